#include "vlab/csvio.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace vlab {

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_rows(std::ofstream& out, const Grid2D& g,
                const std::vector<const ScalarField2D*>& cols, int i_base, int j_base) {
    out << "# grid n1=" << g.n1() << " n2=" << g.n2()
        << " min1=" << fmt_double(g.min1()) << " max1=" << fmt_double(g.max1())
        << " min2=" << fmt_double(g.min2()) << " max2=" << fmt_double(g.max2()) << "\n";
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j) {
            out << (i_base + i) << ',' << (j_base + j) << ','
                << fmt_double(g.x1(i)) << ',' << fmt_double(g.x2(j));
            for (const ScalarField2D* c : cols) out << ',' << fmt_double((*c)(i, j));
            out << '\n';
        }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open file for writing: " + path);
    return out;
}

}  // namespace

void write_csv_field(const std::string& path, const ScalarField2D& f, int i_base, int j_base) {
    auto out = open_out(path);
    write_rows(out, f.grid(), {&f}, i_base, j_base);
}

void write_csv_field(const std::string& path, const VectorField2D& f, int i_base, int j_base) {
    auto out = open_out(path);
    write_rows(out, f.grid(), {&f.comp1(), &f.comp2()}, i_base, j_base);
}

void write_csv_columns(const std::string& path, const Grid2D& grid,
                       const std::vector<std::pair<std::string, const ScalarField2D*>>& cols,
                       int i_base, int j_base) {
    auto out = open_out(path);
    std::vector<const ScalarField2D*> ptrs;
    out << "# columns i,j,z1,z2";
    for (const auto& [name, ptr] : cols) {
        out << ',' << name;
        ptrs.push_back(ptr);
    }
    out << '\n';
    write_rows(out, grid, ptrs, i_base, j_base);
}

CsvFieldSet load_profile_csv(const std::string& path, const std::vector<std::string>& columns) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);

    std::string line;
    long lineno = 0;
    int n1 = -1, n2 = -1;
    double min1 = 0, max1 = 0, min2 = 0, max2 = 0;
    std::vector<std::string> names = columns;

    // Header lines: an optional "# columns ..." line and the "# grid ..." line.
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] != '#') break;
        if (line.rfind("# columns", 0) == 0 && names.empty()) {
            std::string rest = line.substr(std::strlen("# columns"));
            std::stringstream ss(rest);
            std::string tok;
            std::vector<std::string> all;
            while (std::getline(ss, tok, ',')) {
                while (!tok.empty() && (tok.front() == ' ')) tok.erase(tok.begin());
                if (!tok.empty()) all.push_back(tok);
            }
            if (all.size() > 4) names.assign(all.begin() + 4, all.end());
        } else if (line.rfind("# grid", 0) == 0) {
            if (std::sscanf(line.c_str(),
                            "# grid n1=%d n2=%d min1=%lf max1=%lf min2=%lf max2=%lf",
                            &n1, &n2, &min1, &max1, &min2, &max2) != 6)
                throw InputError(path + ": malformed grid header at line " +
                                 std::to_string(lineno));
        }
    }
    if (n1 < 0)
        throw InputError(path + ": missing '# grid' header");

    Grid2D grid(min1, max1, min2, max2, n1, n2);
    CsvFieldSet set;
    set.grid = grid;

    std::size_t ncols = 0;
    std::vector<std::vector<double>> data;
    int i_base = 0, j_base = 0;
    double prev_z1 = -std::numeric_limits<double>::infinity();
    double prev_z2 = 0;
    long row = 0;

    auto parse_row = [&](const std::string& l, long ln) {
        std::stringstream ss(l);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) {
            char* end = nullptr;
            const double x = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str())
                throw InputError(path + ": unparsable number at line " + std::to_string(ln));
            vals.push_back(x);
        }
        if (vals.size() < 5)
            throw InputError(path + ": short row at line " + std::to_string(ln));
        if (ncols == 0) {
            ncols = vals.size() - 4;
            data.assign(ncols, std::vector<double>(grid.size()));
            if (names.empty())
                for (std::size_t c = 0; c < ncols; ++c)
                    names.push_back(ncols == 1 ? "value" : "value" + std::to_string(c + 1));
            if (names.size() != ncols)
                throw InputError(path + ": expected " + std::to_string(names.size()) +
                                 " value columns, file has " + std::to_string(ncols));
        } else if (vals.size() - 4 != ncols) {
            throw InputError(path + ": ragged row at line " + std::to_string(ln));
        }
        const int i = static_cast<int>(vals[0]);
        const int j = static_cast<int>(vals[1]);
        if (row == 0) {
            i_base = i;
            j_base = j;
        }
        const int a = i - i_base, b = j - j_base;
        if (a < 0 || a >= n1 || b < 0 || b >= n2 ||
            row != static_cast<long>(grid.idx(a, b)))
            throw InputError(path + ": row order is not row-major in i then j at line " +
                             std::to_string(ln));
        // Mesh coordinates must be monotone along the scan.
        if (b == 0) {
            if (row > 0 && !(vals[2] > prev_z1))
                throw InputError(path + ": non-monotone z1 coordinate at line " +
                                 std::to_string(ln));
            prev_z1 = vals[2];
        } else if (!(vals[3] > prev_z2)) {
            throw InputError(path + ": non-monotone z2 coordinate at line " + std::to_string(ln));
        }
        prev_z2 = vals[3];
        for (std::size_t c = 0; c < ncols; ++c) {
            const double x = vals[4 + c];
            if (std::isnan(x))
                throw InputError(path + ": NaN value at line " + std::to_string(ln));
            data[c][grid.idx(a, b)] = x;
        }
        ++row;
    };

    if (!in.eof() || (!line.empty() && line[0] != '#')) {
        if (!line.empty() && line[0] != '#') parse_row(line, lineno);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        parse_row(line, lineno);
    }
    if (row != static_cast<long>(grid.size()))
        throw InputError(path + ": expected " + std::to_string(grid.size()) + " rows, got " +
                         std::to_string(row));

    set.i_base = i_base;
    set.j_base = j_base;
    set.column_names = names;
    for (std::size_t c = 0; c < ncols; ++c)
        set.columns.emplace(names[c], ScalarField2D(grid, std::move(data[c])));
    return set;
}

ScalarField2D load_csv_scalar(const std::string& path) {
    CsvFieldSet s = load_profile_csv(path);
    if (s.column_names.size() != 1)
        throw InputError(path + ": expected a single value column");
    return s.columns.begin()->second;
}

VectorField2D load_csv_vector(const std::string& path) {
    CsvFieldSet s = load_profile_csv(path);
    if (s.column_names.size() != 2)
        throw InputError(path + ": expected two value columns");
    return VectorField2D(s.column(s.column_names[0]), s.column(s.column_names[1]));
}

void write_csv_series(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    out << "# ";
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c)
            out << (c ? "," : "") << fmt_double(r[c]);
        out << '\n';
    }
}

}  // namespace vlab
