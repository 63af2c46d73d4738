#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vlab/euler2d.hpp"
#include "vlab/fd.hpp"

using namespace vlab;

namespace {

Grid2D strip(int n) { return Grid2D(0.0, 1.0, 0.0, 1.0, n, n); }

ScalarField2D periodic_sample(const Grid2D& g, const std::function<double(double, double)>& f) {
    ScalarField2D out(g);
    const int p1 = g.n1() - 1;
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j) out(i, j) = f(g.x1(i % p1), g.x2(j));
    return out;
}

}  // namespace

TEST_CASE("stream function solve is consistent: Lap(psi) = -omega, div v small") {
    const Grid2D g = strip(48);
    const auto omega = periodic_sample(g, [](double x, double y) {
        return std::sin(2 * M_PI * x) * std::sin(M_PI * y);
    });
    Euler2DState s(g, omega);
    CHECK(s.poisson_residual() <= 1e-8);
    // v = perp-grad(psi) reconstructed with the repo sign convention.
    const auto w_back = curl2d(s.velocity());
    double worst = 0;
    for (int i = 2; i < g.n1() - 2; ++i)
        for (int j = 2; j < g.n2() - 2; ++j)
            worst = std::max(worst, std::fabs(w_back(i, j) - omega(i, j)));
    CHECK(worst <= 30.0 * g.h1() * g.h1());
    // No-penetration walls.
    for (int i = 0; i < g.n1(); ++i) {
        CHECK(s.velocity().comp2()(i, 0) == 0.0);
        CHECK(s.velocity().comp2()(i, g.n2() - 1) == 0.0);
    }
}

TEST_CASE("a starved stream-function solve is rejected with its residual") {
    const Grid2D g = strip(32);
    const auto omega = periodic_sample(g, [](double x, double y) {
        return std::sin(2 * M_PI * x) * std::sin(M_PI * y);
    });
    PoissonOptions starved;
    starved.sweeps_per_node_cap = 0;
    CHECK_THROWS_WITH_AS(Euler2DState(g, omega, 0.0, starved),
                         doctest::Contains("residual"), InputError);
}

TEST_CASE("shear flow on a periodic strip is steady to 1e-10 per step") {
    const Grid2D g = strip(32);
    // omega = omega(z2) with zero net flux.
    const auto omega = periodic_sample(g, [](double, double y) { return std::sin(2 * M_PI * y); });
    Euler2DState s(g, omega);
    const double dt = 0.4 * g.h1() / std::max(s.max_speed(), 1e-12);
    const Euler2DState s2 = step_euler2d(s, dt);
    double worst = 0;
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j)
            worst = std::max(worst, std::fabs(s2.omega()(i, j) - s.omega()(i, j)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("boussinesq with h == 0 reproduces the euler step bit-for-bit") {
    const Grid2D g = strip(24);
    const auto omega = periodic_sample(g, [](double x, double y) {
        return 0.4 + 0.3 * std::sin(2 * M_PI * x) * std::cos(M_PI * y) + 0.2 * y;
    });
    Euler2DState e(g, omega, 0.15);
    BoussinesqState b(Euler2DState(g, omega, 0.15), ScalarField2D(g, 0.0),
                      BuoyancyOrientation::MinusVertical);
    const double dt = 0.3 * g.h1() / e.max_speed();
    const Euler2DState e2 = step_euler2d(e, dt);
    const BoussinesqState b2 = step_boussinesq(b, dt);
    for (std::size_t k = 0; k < e2.omega().values().size(); ++k)
        CHECK(e2.omega().values()[k] == b2.flow.omega().values()[k]);
}

TEST_CASE("transport maximum principle: omega extrema non-increasing over 500 steps") {
    const Grid2D g = strip(48);
    const auto omega = periodic_sample(g, [](double x, double y) {
        return std::sin(2 * M_PI * x) * std::sin(2 * M_PI * (y - 0.2)) +
               0.5 * std::cos(2 * M_PI * x);
    });
    Euler2DState s(g, omega);
    const double w0max = s.omega().max_abs();
    double wmax = w0max;
    const double dt = 0.4 * g.h1() / s.max_speed();
    for (int k = 0; k < 500; ++k) {
        s = step_euler2d(s, dt);
        wmax = std::max(wmax, s.omega().max_abs());
    }
    CHECK(wmax <= w0max + 1e-3 * w0max);
}

TEST_CASE("boussinesq forcing moves vorticity with the declared sign") {
    const Grid2D g = strip(32);
    const ScalarField2D omega(g, 0.0);
    const auto h = periodic_sample(g, [](double x, double) { return std::sin(2 * M_PI * x); });

    auto run = [&](BuoyancyOrientation o) {
        BoussinesqState b(Euler2DState(g, omega), h, o);
        return step_boussinesq(b, 1e-2);
    };
    // d_t w = +d1(h^2) for +(0,h^2): at x=1/8, d1(sin^2) = 2 pi sin(2x...)>0.
    const auto plus = run(BuoyancyOrientation::PlusVertical);
    const auto minus = run(BuoyancyOrientation::MinusVertical);
    const int i8 = 4;  // x = 1/8 on a 32-node unit grid
    CHECK(plus.flow.omega()(i8, 16) > 0.0);
    CHECK(minus.flow.omega()(i8, 16) < 0.0);
    for (std::size_t k = 0; k < plus.flow.omega().values().size(); ++k)
        CHECK(plus.flow.omega().values()[k] == doctest::Approx(-minus.flow.omega().values()[k]));

    // h extrema do not grow under transport.
    CHECK(plus.h.max_abs() <= h.max_abs() + 1e-12);
}

TEST_CASE("weak residual: constant-in-time shear is tiny") {
    const Grid2D g = strip(33);
    auto fbump = [](double x, double y) {
        const double dx = (x - 0.5) / 0.18, dy = (y - 0.5) / 0.18;
        const double s2 = dx * dx + dy * dy;
        return s2 < 1.0 ? std::pow(1.0 - s2, 4) : 0.0;
    };
    VectorTimeSeries vel;
    TimeSeries test;
    for (int k = 0; k < 5; ++k) {
        const double t = 0.1 * k;
        vel.push_back(t, VectorField2D::sample(g, [](double, double y) { return y * (1 - y); },
                                               [](double, double) { return 0.0; }));
        const double env = (k == 0 || k == 4) ? 0.0 : 1.0;
        test.push_back(t, ScalarField2D::sample(g, [&](double x, double y) {
                           return env * fbump(x, y);
                       }));
    }
    CHECK(std::fabs(weak_residual(vel, test)) <= 1e-10);
}

TEST_CASE("weak residual: uniform vertical draining flow integrates to zero") {
    // v = (0, c/(1-t)^alpha): the time derivative pairs with the mean-zero
    // component of the perp-gradient test field.
    const Grid2D g = strip(33);
    const double alpha = 0.5, c = 2.0;
    auto fbump = [](double x, double y) {
        const double dx = (x - 0.45) / 0.2, dy = (y - 0.55) / 0.2;
        const double s2 = dx * dx + dy * dy;
        return s2 < 1.0 ? std::pow(1.0 - s2, 4) : 0.0;
    };
    VectorTimeSeries vel;
    TimeSeries test;
    for (int k = 0; k < 7; ++k) {
        const double t = 0.08 * k;
        vel.push_back(t, VectorField2D::sample(g, [](double, double) { return 0.0; },
                                               [&](double, double) {
                                                   return c / std::pow(1.0 - t, alpha);
                                               }));
        const double env = (k == 0 || k == 6) ? 0.0 : 1.0;
        test.push_back(t, ScalarField2D::sample(g, [&](double x, double y) {
                           return env * fbump(x, y);
                       }));
    }
    CHECK(std::fabs(weak_residual(vel, test)) <= 1e-10);
}

TEST_CASE("weak residual rejects support touching the boundary") {
    const Grid2D g = strip(17);
    VectorTimeSeries vel;
    TimeSeries test;
    for (int k = 0; k < 3; ++k) {
        vel.push_back(0.1 * k, VectorField2D(g));
        const double env = (k == 0 || k == 2) ? 0.0 : 1.0;
        test.push_back(0.1 * k, ScalarField2D(g, env));  // constant 1: touches boundary
    }
    CHECK_THROWS_AS(weak_residual(vel, test), InputError);
}

TEST_CASE("weak residual of a solver trajectory drops >= 3.5x under refinement") {
    auto fbump = [](double cx, double cy, double w, double x, double y) {
        const double dx = (x - cx) / w, dy = (y - cy) / w;
        const double s2 = dx * dx + dy * dy;
        return s2 < 1.0 ? std::pow(1.0 - s2, 4) : 0.0;
    };
    auto run = [&](int n, int steps) {
        const Grid2D g = strip(n);
        const auto omega = periodic_sample(g, [](double x, double y) {
            return std::sin(2 * M_PI * x) * std::sin(2 * M_PI * y) + 0.4 * std::cos(2 * M_PI * y);
        });
        Euler2DState s(g, omega);
        const double T = 0.25;
        const double dt = T / steps;
        VectorTimeSeries vel;
        vel.push_back(0.0, s.velocity());
        for (int k = 0; k < steps; ++k) {
            s = step_euler2d(s, dt);
            vel.push_back(dt * (k + 1), s.velocity());
        }
        // 20 compact test streams on a lattice of centers/widths, time-windowed.
        double worst = 0;
        vlab::test::Rng rng(5);
        for (int m = 0; m < 20; ++m) {
            const double cx = 0.3 + 0.4 * rng.uniform(), cy = 0.3 + 0.4 * rng.uniform();
            const double w = 0.12 + 0.08 * rng.uniform();
            TimeSeries test;
            for (std::size_t k = 0; k < vel.size(); ++k) {
                const double t = vel.time(k);
                const double env =
                    (k == 0 || k + 1 == vel.size()) ? 0.0
                                                    : std::pow(std::sin(M_PI * t / T), 2);
                test.push_back(t, ScalarField2D::sample(g, [&](double x, double y) {
                                   return env * fbump(cx, cy, w, x, y);
                               }));
            }
            worst = std::max(worst, std::fabs(weak_residual(vel, test)));
        }
        return worst;
    };
    const double coarse = run(33, 16);
    const double fine = run(65, 32);
    CHECK(coarse / fine >= 3.5);
}
