#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "vlab/csvio.hpp"
#include "vlab/fd.hpp"
#include "vlab/profile.hpp"

using namespace vlab;

TEST_CASE("regime classification: pinned pairs") {
    // (-2, 1.5): the balanced case, discriminant 0.
    const auto critical = classify_regime(-2.0, 1.5);
    CHECK(critical.tag == RegimeClass::Tag::Critical);
    CHECK(critical.discriminant == 0.0);

    const auto super = classify_regime(-2.0, 2.0);
    CHECK(super.tag == RegimeClass::Tag::Supercritical);
    CHECK(super.discriminant == doctest::Approx(0.5).epsilon(1e-14));

    const auto sub = classify_regime(-2.0, 1.0);
    CHECK(sub.tag == RegimeClass::Tag::Subcritical);
    CHECK(sub.discriminant == doctest::Approx(-0.5).epsilon(1e-14));

    CHECK(classify_regime(0.5, 0.0).tag == RegimeClass::Tag::VelocityBlowup);
    CHECK_THROWS_AS(classify_regime(0.0, 1.0), InputError);
    CHECK_THROWS_AS(classify_regime(1.5, 1.0), InputError);
}

TEST_CASE("regime classification agrees with extended-precision sign arithmetic") {
    vlab::test::Rng rng(12345);
    for (int k = 0; k < 1000; ++k) {
        const double alpha = -rng.uniform(0.05, 5.0);
        const double beta = rng.uniform(0.01, 5.0);
        const auto rc = classify_regime(alpha, beta);
        const long double disc = -2.0L * static_cast<long double>(beta) / alpha +
                                 1.0L / static_cast<long double>(alpha) - 1.0L;
        RegimeClass::Tag want = disc > 0 ? RegimeClass::Tag::Supercritical
                                : disc < 0 ? RegimeClass::Tag::Subcritical
                                           : RegimeClass::Tag::Critical;
        CHECK(rc.tag == want);
    }
}

namespace {

SelfSimilarAnsatz bump_ansatz(double alpha, double beta) {
    SelfSimilarAnsatz a;
    a.alpha = alpha;
    a.beta = beta;
    a.profiles["theta"] = Profile([](double x, double y) {
        return std::exp(-(x * x + y * y) / 2.0);
    });
    a.profiles["vr"] = Profile([](double x, double y) {
        return 0.7 * std::exp(-(x * x + y * y) / 3.0);
    });
    a.profiles["v3"] = Profile([](double x, double y) {
        return 0.4 * x * std::exp(-(x * x + y * y) / 3.0);
    });
    return a;
}

std::vector<double> tgrid(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = lo + (hi - lo) * k / (n - 1);
    return t;
}

}  // namespace

TEST_CASE("scaled family with Q=1 reproduces the ansatz at t~ = 0") {
    const auto a = bump_ansatz(-2.0, 1.5);
    const Grid2D w(-1, 1, -1, 1, 17, 17);
    const auto fam = build_scaled_family(a, {1.0}, FamilyVariant::MeridianLead, w, {0.0});
    REQUIRE(fam.size() == 1);
    for (int i = 0; i < w.n1(); ++i)
        for (int j = 0; j < w.n2(); ++j) {
            CHECK(fam[0].vr.at(0)(i, j) == a.profile("vr")(w.x1(i), w.x2(j)));
            CHECK(fam[0].vtheta.at(0)(i, j) == a.profile("theta")(w.x1(i), w.x2(j)));
        }
}

TEST_CASE("swirl-led family fades the meridian parts by Q^{-beta/alpha}") {
    // alpha = -2, beta = 1.5: the meridian factor is Q^{0.75}.
    const auto a = bump_ansatz(-2.0, 1.5);
    const Grid2D w(-1, 1, -1, 1, 9, 9);
    const auto tt = tgrid(-0.8, 0.0, 3);
    for (const double Q : {1e-2, 1e-1}) {
        const auto fam = build_scaled_family(a, {Q}, FamilyVariant::SwirlLead, w, tt);
        // direct substitution at sample points
        for (const int i : {1, 3, 4, 6, 8})
            for (std::size_t n = 0; n < tt.size(); ++n) {
                const double lam = std::pow(1.0 - tt[n], 1.0 + 2.0);
                const double want = std::pow(Q, 0.75) * std::pow(1.0 - tt[n], 2.0 + 1.5) *
                                    a.profile("vr")(w.x1(i) / lam, w.x2(4) / lam);
                CHECK(fam[0].vr.at(n)(i, 4) == doctest::Approx(want).epsilon(1e-13));
            }
    }
}

TEST_CASE("meridian-led family: h_k is independent of k to 1e-12") {
    const auto a = bump_ansatz(-2.0, 1.5);
    const Grid2D w(-1, 1, -1, 1, 9, 9);
    const auto tt = tgrid(-0.8, 0.0, 3);
    const auto fam =
        build_scaled_family(a, {1e-4, 1e-2, 1.0}, FamilyVariant::MeridianLead, w, tt);
    for (std::size_t k = 1; k < fam.size(); ++k)
        for (std::size_t n = 0; n < tt.size(); ++n)
            for (int i = 0; i < w.n1(); ++i)
                for (int j = 0; j < w.n2(); ++j)
                    CHECK(fam[k].h.at(n)(i, j) ==
                          doctest::Approx(fam[0].h.at(n)(i, j)).epsilon(1e-12));
}

TEST_CASE("scaled family rejects a missing profile") {
    SelfSimilarAnsatz a;
    a.alpha = -2;
    a.beta = 1.5;
    a.profiles["vr"] = Profile([](double, double) { return 1.0; });
    a.profiles["v3"] = Profile([](double, double) { return 1.0; });
    const Grid2D w(-1, 1, -1, 1, 9, 9);
    CHECK_THROWS_WITH_AS(
        build_scaled_family(a, {1.0}, FamilyVariant::MeridianLead, w, {0.0}),
        doctest::Contains("theta"), InputError);
}

TEST_CASE("vorticity consistency: exact pair and trivial mismatch cases") {
    const Grid2D g(0, 1, 0, 1, 48, 48);
    const auto psi = ScalarField2D::sample(g, [](double x, double y) {
        return std::sin(2 * x + 1) * std::cos(2 * y);
    });
    const auto v = perp_gradient(psi);
    // Discrete curl of the discrete perp-gradient: mismatch O(h^2) against
    // the compact Laplacian-based claim.
    ScalarField2D w_claim(g);
    const auto lap = laplacian_interior(psi);
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j) w_claim(i, j) = -lap(i, j);
    const auto rep = vorticity_consistency(v, w_claim, 1.0);
    // Away from the edge stencils both routes are central differences and the
    // wide/compact gap is O(h^2).
    double interior_mismatch = 0;
    for (int i = 2; i < g.n1() - 2; ++i)
        for (int j = 2; j < g.n2() - 2; ++j)
            interior_mismatch = std::max(interior_mismatch, rep.mismatch(i, j));
    CHECK(interior_mismatch <= 60.0 * g.h1() * g.h1());

    // random V with W_claimed = 0: mismatch equals |curl| everywhere.
    const auto v2 = VectorField2D::sample(g, [](double x, double y) { return x * y; },
                                          [](double x, double) { return x * x; });
    const auto curl = curl2d(v2);
    const auto rep2 = vorticity_consistency(v2, ScalarField2D(g, 0.0), 1e-7);
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j)
            CHECK(rep2.mismatch(i, j) == doctest::Approx(std::fabs(curl(i, j))).epsilon(1e-13));
}

TEST_CASE("vorticity consistency reproduces the external-data mismatch") {
    // Derivative columns as shipped in the external steady-state data: the
    // claimed vorticity disagrees with d2 V1 - d1 V2 by ~1.02e-5 at one node.
    const Grid2D g(0.35, 0.37, 7.19, 7.21, 3, 3);
    ScalarField2D w_claim(g, 0.0), d2v1(g, 0.0), d1v2(g, 0.0);
    w_claim(1, 1) = 8.843970087044398e-17;
    d2v1(1, 1) = -2.850898611910781e-19;
    d1v2(1, 1) = 1.023527319550463e-5;
    const auto rep = vorticity_consistency_from_derivatives(w_claim, d2v1, d1v2, 1e-7, 35, 719);
    const double expect = std::fabs(8.843970087044398e-17 -
                                    (-2.850898611910781e-19 - 1.023527319550463e-5));
    CHECK(rep.max_mismatch == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::fabs(rep.max_mismatch - 1.0235e-5) <= 1e-8);
    REQUIRE(rep.flagged.size() == 1);
    CHECK(rep.flagged[0] == std::pair<int, int>(36, 720));
}

TEST_CASE("parity checks: odd H passes, flipped sign is caught, asymmetric grid skips") {
    SelfSimilarAnsatz a;
    a.alpha = -2;
    a.sample_grid = Grid2D(-1, 1, -1, 1, 33, 33);
    a.profiles["h"] = Profile([](double x, double y) {
        return x * std::exp(-(x * x + y * y));
    });
    a.parities["h"] = {Parity::Odd, Parity::None};
    auto checks = symmetry_decay_check(a);
    REQUIRE(checks.size() == 1);
    CHECK(checks[0].parity_checked);
    CHECK(checks[0].parity_defect_z1 <= 1e-12);

    a.parities["h"] = {Parity::Even, Parity::None};
    checks = symmetry_decay_check(a);
    CHECK(checks[0].parity_defect_z1 > 0.1);

    a.sample_grid = Grid2D(0, 1, -1, 1, 33, 33);
    checks = symmetry_decay_check(a);
    CHECK_FALSE(checks[0].parity_checked);
    CHECK(checks[0].parity_note.find("skipped") != std::string::npos);
}

TEST_CASE("decay fit recovers a planted exponent within 0.05") {
    SelfSimilarAnsatz a;
    a.alpha = -2;
    a.sample_grid = Grid2D(-40, 40, -40, 40, 161, 161);
    // W = r^{-1/3} * angular bump: the planted exponent matches 1/(1-alpha).
    a.profiles["w"] = Profile([](double x, double y) {
        const double r = std::hypot(x, y) + 1e-12;
        const double th = std::atan2(y, x);
        return std::pow(r, -1.0 / 3.0) * (1.2 + std::cos(2 * th));
    });
    a.decay_exponents["w"] = -1.0 / 3.0;
    const auto checks = symmetry_decay_check(a);
    REQUIRE(checks.size() == 1);
    REQUIRE(checks[0].decay_fitted);
    CHECK(checks[0].decay_exponent == doctest::Approx(-1.0 / 3.0).epsilon(0.15));
    CHECK(std::fabs(checks[0].decay_exponent - (-1.0 / 3.0)) <= 0.05);
}

TEST_CASE("sign checks: positive vertical profile passes, negated is located") {
    SelfSimilarAnsatz a;
    a.alpha = -2;
    a.sample_grid = Grid2D(0, 2, 0, 2, 17, 17);
    a.profiles["v2"] = Profile([](double, double y) { return y * std::exp(-y); });
    auto checks = symmetry_decay_check(a);
    CHECK(checks[0].sign_violations.empty());

    a.profiles["v2"] = Profile([](double, double y) { return -y * std::exp(-y); });
    checks = symmetry_decay_check(a);
    CHECK_FALSE(checks[0].sign_violations.empty());
}

TEST_CASE("base ODE: explicit powers satisfy both equations symbolically") {
    // V1 = 0, alpha = -2, C = 1: H2 = z^{1/3}, W = -(1/3) z^{-2/3};
    // substitution uses the analytic derivatives of the powers.
    const auto sol = base_ode_solve(nullptr, -2.0, 1.0, 1.0, 10.0, 100);
    REQUIRE(sol.analytic_branch);
    double worst1 = 0, worst2 = 0;
    for (int k = 0; k <= 100; ++k) {
        const double z = 1.0 + 9.0 * k / 100.0;
        const double a = 3.0 * z;  // V1 + (1-alpha) z
        const double eq1 = a * sol.w_deriv_fn(z) + sol.w_fn(z) - sol.h2_deriv_fn(z);
        const double eq2 = a * sol.h2_deriv_fn(z) + (1.0 + (-2.0)) * sol.h2_fn(z);
        worst1 = std::max(worst1, std::fabs(eq1));
        worst2 = std::max(worst2, std::fabs(eq2));
    }
    CHECK(worst1 <= 1e-12);
    CHECK(worst2 <= 1e-12);
    CHECK(sol.h2_fn(8.0) == doctest::Approx(2.0).epsilon(1e-14));       // 8^{1/3}
    CHECK(sol.w_fn(1.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("base ODE: RK4 matches the closed form to 1e-8 over [1,10]") {
    const auto sol = base_ode_solve(nullptr, -2.0, 1.0, 1.0, 10.0, 10000);
    CHECK(sol.max_rel_discrepancy <= 1e-8);
    // No zero of H2 or W on the evaluated range for C != 0.
    for (std::size_t k = 0; k < sol.z.size(); ++k) {
        CHECK(std::fabs(sol.h2_closed[k]) > 0.0);
        CHECK(std::fabs(sol.w_closed[k]) > 0.0);
    }
}

TEST_CASE("base ODE: C = 0 collapses to the trivial pair") {
    const auto sol = base_ode_solve(nullptr, -2.0, 0.0, 1.0, 5.0, 100);
    for (std::size_t k = 0; k < sol.z.size(); ++k) {
        CHECK(sol.h2_rk4[k] == 0.0);
        CHECK(sol.w_rk4[k] == 0.0);
    }
}

TEST_CASE("base ODE: growth exponent of H2 fits 1/3 within 0.02") {
    const auto sol = base_ode_solve(nullptr, -2.0, 1.0, 1.0, 10.0, 2000);
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < sol.z.size(); ++k) {
        lx.push_back(std::log(sol.z[k]));
        ly.push_back(std::log(sol.h2_rk4[k]));
    }
    CHECK(vlab::test::fit_slope(lx, ly) == doctest::Approx(1.0 / 3.0).epsilon(0.06));
    CHECK(std::fabs(vlab::test::fit_slope(lx, ly) - 1.0 / 3.0) <= 0.02);
}

TEST_CASE("base ODE: general V1 branch matches RK4 through the quadrature closed form") {
    const auto v1 = [](double z) { return 0.3 * std::sin(z); };
    const auto sol = base_ode_solve(v1, -2.0, 1.0, 1.0, 6.0, 2000);
    CHECK_FALSE(sol.analytic_branch);
    CHECK(sol.max_rel_discrepancy <= 1e-6);
}

TEST_CASE("base ODE rejects a vanishing drift coefficient") {
    // V1 = -(1-alpha) z at z = 2 kills the transport coefficient.
    const auto v1 = [](double z) { return -3.0 * z + 3.0 * (z - 2.0) * (z - 2.0); };
    CHECK_THROWS_WITH_AS(base_ode_solve(v1, -2.0, 1.0, 1.0, 3.0, 100),
                         doctest::Contains("singular"), InputError);
}

TEST_CASE("homogeneity: exact negative-degree profile vs bounded bump") {
    const Grid2D g(-1, 1, -1, 1, 64, 64);
    const Profile hom([](double x, double y) {
        return std::pow(std::hypot(x, y) + 1e-300, -2.0 / 3.0);
    });
    const auto rep = homogeneity_check(hom, -2.0 / 3.0, g);
    CHECK(rep.defect <= 1e-10 * rep.scale);
    CHECK(rep.unbounded_near_origin);
    CHECK_FALSE(rep.inconsistent);
    CHECK(rep.note.find("blow-up") != std::string::npos);

    const Profile flat([](double x, double y) { return std::exp(-(x * x + y * y)); });
    const auto rep2 = homogeneity_check(flat, -2.0 / 3.0, g);
    CHECK(rep2.defect > 0.1 * rep2.scale);  // homogeneity rejected
    CHECK_FALSE(rep2.unbounded_near_origin);

    const Profile zero([](double, double) { return 0.0; });
    const auto rep3 = homogeneity_check(zero, -2.0 / 3.0, g);
    CHECK(rep3.defect == 0.0);
    CHECK_FALSE(rep3.nontrivial);

    // The impossible combination: bounded, nontrivial, exactly homogeneous of
    // negative degree only happens for data that is secretly inconsistent.
    const Profile capped([](double x, double y) {
        const double r = std::hypot(x, y);
        return std::pow(std::max(r, 1e-4), -2.0 / 3.0);  // capped at tiny radius
    });
    const auto rep4 = homogeneity_check(capped, -2.0 / 3.0, g);
    CHECK(rep4.defect <= 1e-10 * rep4.scale);
    CHECK(rep4.unbounded_near_origin);  // the cap radius is below the sampling shell
}

TEST_CASE("decay fit survives the CSV ingestion pipeline") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "vlab_pipeline_test";
    fs::create_directories(dir);
    // Downsampled planted profile written to CSV, loaded back, then fitted.
    const Grid2D g(-40, 40, -40, 40, 161, 161);
    const auto w = ScalarField2D::sample(g, [](double x, double y) {
        const double r = std::hypot(x, y) + 1e-12;
        const double th = std::atan2(y, x);
        return std::pow(r, -1.0 / 3.0) * (1.2 + std::cos(2 * th));
    });
    const std::string wpath = (dir / "w.csv").string();
    write_csv_field(wpath, w);

    SelfSimilarAnsatz a;
    a.alpha = -2;
    a.profiles["w"] = Profile(load_profile_csv(wpath).column("value"));
    a.decay_exponents["w"] = -1.0 / 3.0;
    const auto checks = symmetry_decay_check(a);
    REQUIRE(checks.size() == 1);
    REQUIRE(checks[0].decay_fitted);
    CHECK(std::fabs(checks[0].decay_exponent - (-1.0 / 3.0)) <= 0.05);
}

TEST_CASE("default error modulus is o(T0 - t)") {
    SelfSimilarAnsatz a;
    a.T0 = 1.0;
    double prev_ratio = 1e300;
    for (const double gap : {1e-1, 1e-2, 1e-4, 1e-8}) {
        const double ratio = a.error_modulus_or_default(1.0 - gap) / gap;
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio <= 0.06);  // 1/log(1e8)

    a.error_modulus = [](double t) { return (1.0 - t) * (1.0 - t); };
    CHECK(a.error_modulus_or_default(0.9) == doctest::Approx(0.01));
}

TEST_CASE("ansatz manifest round trip through CSV profiles") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "vlab_manifest_test";
    fs::create_directories(dir);
    const Grid2D g(-1, 1, -1, 1, 9, 9);
    const auto w = ScalarField2D::sample(g, [](double x, double y) { return x + 2 * y; });
    const std::string wpath = (dir / "w.csv").string();
    write_csv_field(wpath, w);
    const std::string mpath = (dir / "ansatz.json").string();
    {
        std::ofstream out(mpath);
        out << R"({"alpha": -2.0, "beta": 1.5, "T0": 1.0,
                   "profiles": {"w": ")" << wpath << R"("},
                   "parities": {"w": {"z1": "odd"}},
                   "decay_exponents": {"w": -0.3333333333333333}})";
    }
    const auto a = load_ansatz_manifest(mpath);
    CHECK(a.alpha == -2.0);
    CHECK(a.beta == 1.5);
    CHECK(a.has("w"));
    CHECK(a.parity("w").in_z1 == Parity::Odd);
    CHECK(a.profile("w")(g.x1(3), g.x2(4)) == doctest::Approx(w(3, 4)).epsilon(1e-12));

    std::ofstream bad(mpath);
    bad << R"({"beta": 1})";
    bad.close();
    CHECK_THROWS_WITH_AS(load_ansatz_manifest(mpath), doctest::Contains("alpha"), InputError);
}
