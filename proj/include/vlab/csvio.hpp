#pragma once

#include <map>
#include <string>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab {

/// Gridded columns loaded from one CSV file, with the original mesh indices
/// preserved for report cross-reference (files may index from a nonzero base).
struct CsvFieldSet {
    Grid2D grid;
    int i_base = 0;
    int j_base = 0;
    std::vector<std::string> column_names;          // in file order
    std::map<std::string, ScalarField2D> columns;   // by name

    const ScalarField2D& column(const std::string& name) const {
        auto it = columns.find(name);
        if (it == columns.end())
            throw InputError("CSV column '" + name + "' not present");
        return it->second;
    }
    /// Mesh index of node (a, b) in the source file's numbering.
    std::pair<int, int> mesh_index(int a, int b) const { return {i_base + a, j_base + b}; }
};

/// Shared CSV field format:
///   # grid n1=<int> n2=<int> min1=<f> max1=<f> min2=<f> max2=<f>
///   i,j,z1,z2,value[,value2[,...]]
/// row-major in i then j, full-precision decimal floats.
void write_csv_field(const std::string& path, const ScalarField2D& f,
                     int i_base = 0, int j_base = 0);
void write_csv_field(const std::string& path, const VectorField2D& f,
                     int i_base = 0, int j_base = 0);
void write_csv_columns(const std::string& path, const Grid2D& grid,
                       const std::vector<std::pair<std::string, const ScalarField2D*>>& cols,
                       int i_base = 0, int j_base = 0);

/// Loads a file in the shared format. `columns` names the value columns in
/// order; pass an empty list to auto-name them value1..valueK. Ragged rows,
/// non-monotone mesh coordinates and NaNs are rejected with the line number.
CsvFieldSet load_profile_csv(const std::string& path,
                             const std::vector<std::string>& columns = {});

ScalarField2D load_csv_scalar(const std::string& path);
VectorField2D load_csv_vector(const std::string& path);

/// Columnar series (x, y[, ...]) for plot emission.
void write_csv_series(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace vlab
