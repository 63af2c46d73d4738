#include "vlab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "vlab/axisym.hpp"
#include "vlab/certify.hpp"
#include "vlab/csvio.hpp"
#include "vlab/euler2d.hpp"
#include "vlab/fd.hpp"
#include "vlab/profile.hpp"
#include "vlab/report.hpp"
#include "vlab/rescale.hpp"

namespace vlab {

namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string short_hash(const Json& config) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%08llx",
                  static_cast<unsigned long long>(fnv1a(config.dump()) & 0xffffffffULL));
    return buf;
}

struct OutputContext {
    fs::path dir;
    std::string prefix;

    static OutputContext create(std::string out_dir, const Json& config) {
        if (const char* env = std::getenv("VLAB_OUT_DIR")) out_dir = env;
        if (out_dir.empty()) throw InputError("field --out: output directory is required");
        OutputContext ctx;
        ctx.dir = out_dir;
        fs::create_directories(ctx.dir);
        ctx.prefix = short_hash(config) + "-";
        write_report((ctx.dir / (ctx.prefix + "config.json")).string(), config);
        return ctx;
    }
    std::string path(const std::string& name) const {
        return (dir / (prefix + name)).string();
    }
};

int thread_count() {
    if (const char* env = std::getenv("VLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

Json grid_json(const Grid2D& g) {
    Json j;
    j["n1"] = g.n1();
    j["n2"] = g.n2();
    j["min1"] = g.min1();
    j["max1"] = g.max1();
    j["min2"] = g.min2();
    j["max2"] = g.max2();
    return j;
}

std::vector<double> parse_list(const std::string& s, const char* field) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str())
            throw InputError(std::string("field ") + field + ": unparsable number '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InputError(std::string("field ") + field + ": empty list");
    return out;
}

Grid2D parse_grid_spec(const std::string& s, const char* field) {
    const auto v = parse_list(s, field);
    if (v.size() != 6)
        throw InputError(std::string("field ") + field +
                         ": expected min1,max1,min2,max2,n1,n2");
    return Grid2D(v[0], v[1], v[2], v[3], static_cast<int>(v[4]), static_cast<int>(v[5]));
}

// ------------------------------------------------------------- simulate --

int cmd_simulate(const std::string& system, const std::string& grid_spec, int steps,
                 double cfl, std::uint64_t seed, const std::string& ic,
                 const std::string& out_dir, int dump_every) {
    Json config;
    config["subcommand"] = "simulate";
    config["system"] = system;
    config["grid"] = grid_spec;
    config["steps"] = steps;
    config["cfl"] = cfl;
    config["seed"] = seed;
    config["ic"] = ic;
    config["dump_every"] = dump_every;
    const OutputContext ctx = OutputContext::create(out_dir, config);

    Json manifest;
    manifest["system"] = system;
    Json times = Json::array();
    Json files = Json::array();

    auto snap_name = [&](int k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "snap_%04d.csv", k);
        return std::string(buf);
    };

    if (system == "axisym") {
        const Grid2D g = grid_spec.empty()
                             ? Grid2D(AxiState::kDefaultRmin, 1.0, 0.0, 1.0, 64, 64)
                             : parse_grid_spec(grid_spec, "--grid");
        AxiState state = make_smooth_axi_state(g, seed);
        manifest["grid"] = grid_json(g);
        manifest["fields"] = Json::array({"vr", "vtheta", "v3"});
        double t = 0.0;
        int dumped = 0;
        auto dump = [&](const AxiState& s) {
            const std::string name = snap_name(dumped++);
            write_csv_columns(ctx.path(name), s.grid(),
                              {{"vr", &s.vr()}, {"vtheta", &s.vtheta()}, {"v3", &s.v3()}});
            times.push_back(t);
            files.push_back(ctx.prefix + name);
        };
        dump(state);
        for (int k = 0; k < steps; ++k) {
            const double dt = cfl * std::min(g.h1(), g.h2()) /
                              std::max(state.max_speed(), 1e-12);
            state = step_axisym(state, dt);
            t += dt;
            if ((k + 1) % dump_every == 0 || k + 1 == steps) dump(state);
        }
        manifest["gamma_conservation_note"] =
            "sup and L^2n statistics available via the library";
    } else if (system == "euler2d" || system == "boussinesq") {
        Grid2D g = grid_spec.empty() ? Grid2D(0, 1, 0, 1, 64, 64)
                                     : parse_grid_spec(grid_spec, "--grid");
        ScalarField2D omega(g, 0.0);
        if (!ic.empty() && ic.rfind("csv:", 0) == 0) {
            omega = load_csv_scalar(ic.substr(4));
            g = omega.grid();
        } else {
            const int p1 = g.n1() - 1;
            for (int i = 0; i < g.n1(); ++i)
                for (int j = 0; j < g.n2(); ++j) {
                    const double x = g.x1(i % p1), y = g.x2(j);
                    omega(i, j) = std::sin(2 * M_PI * x) * std::sin(2 * M_PI * y) +
                                  0.4 * std::cos(2 * M_PI * y);
                }
        }
        manifest["grid"] = grid_json(g);
        const bool bous = system == "boussinesq";
        manifest["fields"] = bous ? Json::array({"omega", "h"}) : Json::array({"omega"});
        BoussinesqState state(Euler2DState(g, omega), ScalarField2D(g, 0.0),
                              BuoyancyOrientation::PlusVertical);
        if (bous) {
            const int p1 = g.n1() - 1;
            for (int i = 0; i < g.n1(); ++i)
                for (int j = 0; j < g.n2(); ++j)
                    state.h(i, j) = 0.5 + 0.3 * std::sin(2 * M_PI * g.x1(i % p1));
        }
        double t = 0.0;
        int dumped = 0;
        auto dump = [&]() {
            const std::string name = snap_name(dumped++);
            if (bous)
                write_csv_columns(ctx.path(name), g,
                                  {{"omega", &state.flow.omega()}, {"h", &state.h}});
            else
                write_csv_field(ctx.path(name), state.flow.omega());
            times.push_back(t);
            files.push_back(ctx.prefix + name);
        };
        dump();
        for (int k = 0; k < steps; ++k) {
            const double dt = cfl * std::min(g.h1(), g.h2()) /
                              std::max(state.flow.max_speed(), 1e-12);
            state = bous ? step_boussinesq(state, dt)
                         : BoussinesqState(step_euler2d(state.flow, dt), state.h,
                                           state.orientation);
            t += dt;
            if ((k + 1) % dump_every == 0 || k + 1 == steps) dump();
        }
    } else {
        throw InputError("field --system: unknown system '" + system + "'");
    }

    manifest["times"] = times;
    manifest["files"] = files;
    write_report(ctx.path("manifest.json"), manifest);
    std::cout << "simulate: wrote " << files.size() << " snapshot(s) under " << ctx.dir
              << "\n";
    return 0;
}

// -------------------------------------------------------------- rescale --

MeridianParent builtin_parent(const std::string& name, double alpha) {
    MeridianParent p;
    if (name == "sss-bump") {
        p.velocity = [alpha](double r, double, double x3, double t) -> std::array<double, 3> {
            const double lam = std::pow(1.0 - t, 1.0 - alpha);
            const double amp = std::pow(1.0 - t, -alpha);
            const double y1 = r / lam, y2 = x3 / lam;
            const double b = std::exp(-(y1 * y1 + y2 * y2) / 2.0);
            return {0.8 * amp * b, 0.0, amp * b};
        };
        p.t_hi = 0.999999;
        return p;
    }
    if (name == "shear-swirl") {
        p.velocity = [](double r, double, double, double) -> std::array<double, 3> {
            return {0.0, 1.0, 0.3 + 0.2 * std::sin(5.0 * r)};
        };
        p.pressure_gradient = [](double r, double, double) -> std::array<double, 2> {
            return {1.0 / r, 0.0};
        };
        p.r_lo = 1e-6;
        return p;
    }
    throw InputError("field --parent: unknown builtin '" + name + "'");
}

int cmd_rescale(const std::string& parent_spec, double alpha, const std::string& qs,
                const std::string& center, const std::string& window_spec,
                const std::string& times_spec, const std::string& out_dir,
                bool raw_swirl) {
    Json config;
    config["subcommand"] = "rescale";
    config["parent"] = parent_spec;
    config["alpha"] = alpha;
    config["q"] = qs;
    config["center"] = center;
    config["window"] = window_spec;
    config["times"] = times_spec;
    config["raw_swirl"] = raw_swirl;
    const OutputContext ctx = OutputContext::create(out_dir, config);

    if (parent_spec.rfind("builtin:", 0) != 0)
        throw InputError("field --parent: expected builtin:<name> (trajectory rescaling "
                         "goes through the library API)");
    const MeridianParent parent = builtin_parent(parent_spec.substr(8), alpha);
    const auto ctr = parse_list(center, "--center");
    if (ctr.size() != 3) throw InputError("field --center: expected r,x3,t");
    const Grid2D window = parse_grid_spec(window_spec, "--window");
    const auto tt = parse_list(times_spec, "--times");
    const auto qlist = parse_list(qs, "--q");

    RescaleOptions opt;
    opt.normalize_swirl = !raw_swirl;
    BlowupSequence seq;
    seq.alpha = alpha;
    Json centers = Json::array();
    int idx = 0;
    for (const double Q : qlist) {
        const auto rf =
            rescale_field(parent, ctr[0], ctr[1], ctr[2], Q, alpha, window, tt, opt);
        for (std::size_t n = 0; n < rf.meridian.size(); ++n) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "window_q%02d_t%02zu.csv", idx, n);
            write_csv_columns(ctx.path(buf), window,
                              {{"vr", &rf.meridian.at(n).comp1()},
                               {"v3", &rf.meridian.at(n).comp2()},
                               {"vtheta", &rf.swirl.at(n)}});
        }
        seq.centers.push_back({ctr[0], ctr[1], ctr[2] + idx * 0.0, Q});
        Json c;
        c["x"] = Json::array({ctr[0], ctr[1]});
        c["t"] = ctr[2];
        c["Q"] = Q;
        c["origin_magnitude"] = rf.origin_magnitude;
        centers.push_back(c);
        ++idx;
    }

    Json manifest;
    manifest["alpha"] = alpha;
    manifest["c"] = seq.c;
    manifest["centers"] = centers;
    if (qlist.size() >= 2) {
        // Wall-distance classification of the zoom sequence.
        BlowupSequence s2;
        s2.alpha = alpha;
        for (std::size_t k = 0; k < qlist.size(); ++k)
            s2.centers.push_back({ctr[0], ctr[1], ctr[2] + 1e-6 * k, qlist[k]});
        const DomainClass dc = classify_domain(s2, alpha);
        manifest["domain_class"] =
            dc.tag == DomainClass::Tag::FullPlane    ? "FullPlane"
            : dc.tag == DomainClass::Tag::HalfPlane ? "HalfPlane"
                                                     : "Inconclusive";
        manifest["domain_offset"] = dc.offset;
    } else {
        manifest["domain_class"] = "Inconclusive";
    }
    write_report(ctx.path("sequence.json"), manifest);
    std::cout << "rescale: wrote " << idx << " window set(s) under " << ctx.dir << "\n";
    return 0;
}

// -------------------------------------------------------------- validate --

int cmd_validate(const std::string& ansatz_path, const std::string& out_dir) {
    Json config;
    config["subcommand"] = "validate";
    config["ansatz"] = ansatz_path;
    const OutputContext ctx = OutputContext::create(out_dir, config);

    const SelfSimilarAnsatz a = load_ansatz_manifest(ansatz_path);
    const RegimeClass rc = classify_regime(a.alpha, a.beta);
    Json rep;
    rep["regime"] = RegimeClass::name(rc.tag);
    rep["discriminant"] = rc.discriminant;
    Json checks = Json::array();
    for (const ProfileCheck& pc : symmetry_decay_check(a)) {
        Json c;
        c["profile"] = pc.name;
        c["parity_checked"] = pc.parity_checked;
        if (!pc.parity_note.empty()) c["parity_note"] = pc.parity_note;
        c["parity_defect_z1"] = pc.parity_defect_z1;
        c["parity_defect_z2"] = pc.parity_defect_z2;
        if (pc.decay_fitted) {
            c["decay_exponent"] = pc.decay_exponent;
            c["decay_target"] = pc.decay_target;
            c["decay_residual"] = pc.decay_residual;
        }
        Json sv = Json::array();
        for (const auto& [i, j] : pc.sign_violations) sv.push_back(Json::array({i, j}));
        c["sign_violations"] = sv;
        checks.push_back(c);
    }
    rep["checks"] = checks;
    write_report(ctx.path("validation.json"), rep);
    std::cout << "validate: regime " << RegimeClass::name(rc.tag) << ", report under "
              << ctx.dir << "\n";
    return 0;
}

// --------------------------------------------------------------- certify --

int cmd_certify(const std::string& ansatz_path, const std::string& prop,
                const std::string& variant_name, bool boundary_centered, double l0,
                const std::string& rect_spec, const std::string& sector_spec,
                const std::string& p_ladder, const std::string& out_dir) {
    Json config;
    config["subcommand"] = "certify";
    config["ansatz"] = ansatz_path;
    config["prop"] = prop;
    config["variant"] = variant_name;
    config["boundary_centered"] = boundary_centered;
    config["l0"] = l0;
    config["rect"] = rect_spec;
    config["sector"] = sector_spec;
    config["p_ladder"] = p_ladder;
    const OutputContext ctx = OutputContext::create(out_dir, config);

    SelfSimilarAnsatz a = load_ansatz_manifest(ansatz_path);
    // Working window: the manifest's sample grid, or the first gridded
    // profile's mesh.
    bool have_grid = false;
    {
        const Json manifest = read_json(ansatz_path);
        have_grid = manifest.contains("sample_grid");
    }
    if (!have_grid)
        for (const auto& [name, prof] : a.profiles)
            if (prof.samples()) {
                a.sample_grid = prof.samples()->grid();
                have_grid = true;
                break;
            }
    CertifyOptions opt;
    opt.domain = a.sample_grid;

    FamilyVariant variant = FamilyVariant::MeridianLead;
    if (variant_name == "swirl-lead") variant = FamilyVariant::SwirlLead;
    else if (variant_name == "meridian-lead") variant = FamilyVariant::MeridianLead;
    else if (variant_name == "centered-boundary") variant = FamilyVariant::CenteredBoundary;
    else throw InputError("field --variant: unknown family variant '" + variant_name + "'");

    std::vector<std::string> to_run;
    Json routing;
    if (prop == "auto") {
        const Route r = route_proposition(a, variant, boundary_centered);
        routing["proposition"] = r.proposition;
        routing["rationale"] = r.rationale;
        to_run = r.certifiers;
    } else {
        routing["proposition"] = prop;
        routing["rationale"] = "explicitly requested";
        to_run = {prop};
    }

    SectorSpec spec;
    if (!sector_spec.empty()) {
        const auto v = parse_list(sector_spec, "--sector");
        if (v.size() != 2 && v.size() != 4)
            throw InputError("field --sector: expected th1,th2[,l1,l2]");
        spec.th1 = v[0];
        spec.th2 = v[1];
        if (v.size() == 4) {
            spec.l1 = v[2];
            spec.l2 = v[3];
        }
    }
    if (!p_ladder.empty()) spec.p_ladder = parse_list(p_ladder, "--p-ladder");
    std::vector<double> rect = {1.0, 1.0, 2.0, 2.0};
    if (!rect_spec.empty()) {
        rect = parse_list(rect_spec, "--rect");
        if (rect.size() != 4) throw InputError("field --rect: expected a1,b1,a2,b4");
    }

    auto run_one = [&](const std::string& id) -> CertificateReport {
        if (id == "sector-integral") return sector_integral_test(a, spec, opt);
        if (id == "rectangle-flowline")
            return rectangle_flowline_test(a, rect[0], rect[1], rect[2], rect[3], opt);
        if (id == "singular-flowline") return singular_flowline_test(a, l0, opt);
        if (id == "base-signs") return base_sign_tests(a, opt);
        if (id == "theta-independence") {
            const ScalarField2D th = a.profile("theta").sampled(a.sample_grid);
            ScalarField2D th2(th.grid());
            for (std::size_t k = 0; k < th2.values().size(); ++k)
                th2.values()[k] = th.values()[k] * th.values()[k];
            return theta_independence_test(th2, 25,
                                           a.parity("theta").in_z2 == Parity::Odd);
        }
        if (id == "boundary-oddness") return boundary_oddness_test(a, opt);
        if (id == "homogeneity") return homogeneity_certificate(a, opt);
        throw InputError("field --prop: unknown certifier '" + id + "'");
    };

    Json certs = Json::array();
    std::vector<CertificateReport> reports;
    const int threads = thread_count();
    if (threads > 1 && to_run.size() > 1) {
        std::vector<std::future<CertificateReport>> futs;
        for (const std::string& id : to_run)
            futs.push_back(std::async(std::launch::async, [&, id]() { return run_one(id); }));
        for (auto& f : futs) reports.push_back(f.get());
    } else {
        for (const std::string& id : to_run) reports.push_back(run_one(id));
    }
    int not_met = 0;
    for (const auto& rep : reports) {
        certs.push_back(to_json(rep));
        if (rep.verdict == Verdict::HypothesesNotMet) ++not_met;
        std::cout << "certify: " << rep.proposition << " -> " << verdict_name(rep.verdict)
                  << "\n";
    }

    Json out = routing;
    out["certificates"] = certs;
    write_report(ctx.path("certificates.json"), out);
    if (!reports.empty() && not_met == static_cast<int>(reports.size())) return 2;
    return 0;
}

// -------------------------------------------------------------- datacheck --

int cmd_datacheck(const std::string& profiles_path, double accuracy,
                  const std::string& columns, const std::string& out_dir) {
    Json config;
    config["subcommand"] = "datacheck";
    config["profiles"] = profiles_path;
    config["accuracy"] = accuracy;
    config["columns"] = columns;
    const OutputContext ctx = OutputContext::create(out_dir, config);

    std::vector<std::string> cols;
    {
        std::stringstream ss(columns);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    const CsvFieldSet set = load_profile_csv(profiles_path, cols);

    VorticityReport vr;
    if (set.columns.count("w") && set.columns.count("dz2v1") && set.columns.count("dz1v2")) {
        vr = vorticity_consistency_from_derivatives(set.column("w"), set.column("dz2v1"),
                                                    set.column("dz1v2"), accuracy,
                                                    set.i_base, set.j_base);
    } else if (set.columns.count("v1") && set.columns.count("v2") && set.columns.count("w")) {
        vr = vorticity_consistency(VectorField2D(set.column("v1"), set.column("v2")),
                                   set.column("w"), accuracy, set.i_base, set.j_base);
    } else {
        throw InputError("field --columns: need either w,dz2v1,dz1v2 or v1,v2,w");
    }

    Json rep;
    rep["accuracy"] = accuracy;
    rep["max_mismatch"] = vr.max_mismatch;
    rep["flagged_count"] = vr.flagged.size();
    Json fl = Json::array();
    for (const auto& [i, j] : vr.flagged) {
        Json f;
        f["mesh"] = Json::array({i, j});
        f["mismatch"] = vr.mismatch(i - vr.i_base, j - vr.j_base);
        fl.push_back(f);
    }
    rep["flagged"] = fl;
    write_report(ctx.path("datacheck.json"), rep);
    std::cout << "datacheck: max mismatch " << vr.max_mismatch << ", " << vr.flagged.size()
              << " node(s) beyond " << accuracy << "\n";
    return 0;
}

// ---------------------------------------------------------------- report --

int cmd_report(const std::string& in_path, const std::string& field_csv,
               const std::string& out_dir) {
    Json config;
    config["subcommand"] = "report";
    config["in"] = in_path;
    config["field"] = field_csv;
    const OutputContext ctx = OutputContext::create(out_dir, config);

    int emitted = 0;
    if (!in_path.empty()) {
        const Json j = read_json(in_path);
        auto emit_roots = [&](const char* key) {
            if (!j.contains("traces") || !j["traces"].contains(key)) return;
            std::vector<std::vector<double>> rows;
            for (const auto& pr : j["traces"][key])
                rows.push_back({pr[0].get<double>(), pr[1].get<double>()});
            write_csv_series(ctx.path(std::string(key) + ".csv"), {"p", "root"}, rows);
            ++emitted;
        };
        // Accept either a bare certificate or a bundle of them.
        std::vector<Json> certs;
        if (j.contains("certificates"))
            for (const auto& c : j["certificates"]) certs.push_back(c);
        else
            certs.push_back(j);
        int ci = 0;
        for (const Json& c : certs) {
            if (c.contains("traces") && c["traces"].contains("flowlines")) {
                int li = 0;
                for (const auto& line : c["traces"]["flowlines"]) {
                    std::vector<std::vector<double>> rows;
                    const auto& param = line["param"];
                    const auto& pos = line["pos"];
                    for (std::size_t k = 0; k < param.size(); ++k)
                        rows.push_back({param[k].get<double>(), pos[k][0].get<double>(),
                                        pos[k][1].get<double>()});
                    char buf[48];
                    std::snprintf(buf, sizeof buf, "flowline_%02d_%02d.csv", ci, li++);
                    write_csv_series(ctx.path(buf), {"s", "z1", "z2"}, rows);
                    ++emitted;
                }
            }
            if (c.contains("traces")) {
                for (const char* key : {"p_roots_bulk", "p_roots_ray_hi", "p_roots_ray_lo"}) {
                    if (!c["traces"].contains(key)) continue;
                    std::vector<std::vector<double>> rows;
                    for (const auto& pr : c["traces"][key])
                        rows.push_back({pr[0].get<double>(), pr[1].get<double>()});
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%s_%02d.csv", key, ci);
                    write_csv_series(ctx.path(buf), {"p", "root"}, rows);
                    ++emitted;
                }
            }
            ++ci;
        }
        (void)emit_roots;
    }
    if (!field_csv.empty()) {
        // Heat-map pass-through in the shared format (round-trips bitwise).
        const CsvFieldSet set = load_profile_csv(field_csv);
        std::vector<std::pair<std::string, const ScalarField2D*>> cols;
        for (const auto& name : set.column_names)
            cols.emplace_back(name, &set.columns.at(name));
        // Preserve single-column files in the bare field format.
        if (cols.size() == 1)
            write_csv_field(ctx.path("field.csv"), *cols[0].second, set.i_base, set.j_base);
        else
            write_csv_columns(ctx.path("field.csv"), set.grid, cols, set.i_base, set.j_base);
        ++emitted;
    }
    std::cout << "report: emitted " << emitted << " series file(s) under " << ctx.dir << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"verification laboratory for axisymmetric Euler blow-up screening"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a desk-scale solver and dump snapshots");
    std::string sim_system = "axisym", sim_grid, sim_ic, sim_out;
    int sim_steps = 0, sim_dump_every = 1;
    double sim_cfl = 0.4;
    std::uint64_t sim_seed = 2024;
    sim->add_option("--system", sim_system, "axisym | euler2d | boussinesq");
    sim->add_option("--grid", sim_grid, "min1,max1,min2,max2,n1,n2");
    sim->add_option("--steps", sim_steps, "number of steps");
    sim->add_option("--cfl", sim_cfl, "CFL number");
    sim->add_option("--seed", sim_seed, "seed for the smooth random data");
    sim->add_option("--ic", sim_ic, "csv:<path> initial vorticity (euler2d)");
    sim->add_option("--dump-every", sim_dump_every, "snapshot cadence");
    sim->add_option("--out", sim_out, "output directory")->required();

    // rescale
    auto* rsc = app.add_subcommand("rescale", "zoom windows of a parent field");
    std::string rsc_parent = "builtin:sss-bump", rsc_q = "1.0", rsc_center = "0,0,0.9";
    std::string rsc_window = "-1,1,-1,1,33,33", rsc_times = "-1,-0.5,0", rsc_out;
    double rsc_alpha = 0.5;
    bool rsc_raw_swirl = false;
    rsc->add_option("--parent", rsc_parent, "builtin:sss-bump | builtin:shear-swirl");
    rsc->add_option("--alpha", rsc_alpha, "scaling exponent");
    rsc->add_option("--q", rsc_q, "comma list of magnitudes");
    rsc->add_option("--center", rsc_center, "r,x3,t");
    rsc->add_option("--window", rsc_window, "min1,max1,min2,max2,n1,n2");
    rsc->add_option("--times", rsc_times, "comma list of t~ <= 0");
    rsc->add_flag("--raw-swirl", rsc_raw_swirl, "keep the physical swirl scale");
    rsc->add_option("--out", rsc_out, "output directory")->required();

    // validate
    auto* val = app.add_subcommand("validate", "symmetry/decay/regime checks of an ansatz");
    std::string val_ansatz, val_out;
    val->add_option("--ansatz", val_ansatz, "ansatz manifest JSON")->required();
    val->add_option("--out", val_out, "output directory")->required();

    // certify
    auto* cer = app.add_subcommand("certify", "run contradiction certifiers");
    std::string cer_ansatz, cer_prop = "auto", cer_variant = "meridian-lead";
    std::string cer_rect, cer_sector, cer_pladder, cer_out;
    bool cer_boundary = true;
    double cer_l0 = 2.0;
    cer->add_option("--ansatz", cer_ansatz, "ansatz manifest JSON")->required();
    cer->add_option("--prop", cer_prop,
                    "auto | sector-integral | rectangle-flowline | singular-flowline | "
                    "base-signs | theta-independence | boundary-oddness | homogeneity");
    cer->add_option("--variant", cer_variant, "swirl-lead | meridian-lead | centered-boundary");
    cer->add_flag("--boundary-centered,!--no-boundary-centered", cer_boundary,
                  "centers sit on the side wall");
    cer->add_option("--l0", cer_l0, "strip height for the singular-flow certifier");
    cer->add_option("--rect", cer_rect, "a1,b1,a2,b4");
    cer->add_option("--sector", cer_sector, "th1,th2[,l1,l2]");
    cer->add_option("--p-ladder", cer_pladder, "comma list of p values");
    cer->add_option("--out", cer_out, "output directory")->required();

    // datacheck
    auto* dat = app.add_subcommand("datacheck", "vorticity consistency of external data");
    std::string dat_profiles, dat_columns = "w,dz2v1,dz1v2", dat_out;
    double dat_accuracy = 1e-7;
    dat->add_option("--profiles", dat_profiles, "CSV data file")->required();
    dat->add_option("--accuracy", dat_accuracy, "mismatch threshold");
    dat->add_option("--columns", dat_columns, "value column names");
    dat->add_option("--out", dat_out, "output directory")->required();

    // report
    auto* repc = app.add_subcommand("report", "emit plot-ready CSV series");
    std::string rep_in, rep_field, rep_out;
    repc->add_option("--in", rep_in, "report JSON (certificate or bundle)");
    repc->add_option("--field", rep_field, "field CSV to re-emit");
    repc->add_option("--out", rep_out, "output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help() << "\n";
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_system, sim_grid, sim_steps, sim_cfl, sim_seed, sim_ic,
                                sim_out, sim_dump_every);
        if (rsc->parsed())
            return cmd_rescale(rsc_parent, rsc_alpha, rsc_q, rsc_center, rsc_window,
                               rsc_times, rsc_out, rsc_raw_swirl);
        if (val->parsed()) return cmd_validate(val_ansatz, val_out);
        if (cer->parsed())
            return cmd_certify(cer_ansatz, cer_prop, cer_variant, cer_boundary, cer_l0,
                               cer_rect, cer_sector, cer_pladder, cer_out);
        if (dat->parsed()) return cmd_datacheck(dat_profiles, dat_accuracy, dat_columns, dat_out);
        if (repc->parsed()) return cmd_report(rep_in, rep_field, rep_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cerr << "error: no subcommand\n";
    return 3;
}

}  // namespace vlab
