#include "vlab/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlab/fd.hpp"
#include "vlab/interp.hpp"

namespace vlab {

namespace {

void require_periodic_match(const ScalarField2D& f, const char* name) {
    const Grid2D& g = f.grid();
    for (int i = 0; i < g.n1(); ++i)
        if (f(i, 0) != f(i, g.n2() - 1))
            throw InputError(std::string("AxiState: ") + name +
                             " violates the x3-periodic match at r-row " + std::to_string(i));
}

}  // namespace

AxiState::AxiState(Grid2D grid, ScalarField2D vr, ScalarField2D vtheta, ScalarField2D v3)
    : grid_(grid), vr_(std::move(vr)), vtheta_(std::move(vtheta)), v3_(std::move(v3)) {
    if (!(grid_.min1() > 0.0))
        throw InputError("AxiState: r_min must be positive (off-axis annulus)");
    if (vr_.grid() != grid_ || vtheta_.grid() != grid_ || v3_.grid() != grid_)
        throw InputError("AxiState: field grids differ from the state grid");
    vr_.require_finite("AxiState v_r");
    vtheta_.require_finite("AxiState v_theta");
    v3_.require_finite("AxiState v_3");
    for (int j = 0; j < grid_.n2(); ++j) {
        if (vr_(0, j) != 0.0)
            throw InputError("AxiState: no-penetration violated, v_r != 0 at r_min, node j=" +
                             std::to_string(j));
        if (vr_(grid_.n1() - 1, j) != 0.0)
            throw InputError("AxiState: no-penetration violated, v_r != 0 at r=1, node j=" +
                             std::to_string(j));
    }
    require_periodic_match(vr_, "v_r");
    require_periodic_match(vtheta_, "v_theta");
    require_periodic_match(v3_, "v_3");
}

ScalarField2D AxiState::gamma() const {
    ScalarField2D g(grid_);
    for (int i = 0; i < grid_.n1(); ++i)
        for (int j = 0; j < grid_.n2(); ++j) g(i, j) = r(i) * vtheta_(i, j);
    return g;
}

double AxiState::max_divergence() const {
    VectorField2D b(vr_, v3_);
    ScalarField2D w(grid_);
    for (int i = 0; i < grid_.n1(); ++i)
        for (int j = 0; j < grid_.n2(); ++j) w(i, j) = r(i);
    return divergence(b, &w, /*periodic2=*/true).max_abs();
}

double AxiState::max_speed() const {
    double m = 0;
    for (int i = 0; i < grid_.n1(); ++i)
        for (int j = 0; j < grid_.n2(); ++j) {
            const double s = std::sqrt(vr_(i, j) * vr_(i, j) + vtheta_(i, j) * vtheta_(i, j) +
                                       v3_(i, j) * v3_(i, j));
            m = std::max(m, s);
        }
    return m;
}

AxiState step_axisym(const AxiState& s, double dt, const AxiStepOptions& opt) {
    const Grid2D& g = s.grid();
    const int n1 = g.n1(), n2 = g.n2();
    const int period = n2 - 1;
    const double hmin = std::min(g.h1(), g.h2());

    const double cfl = s.max_speed() * dt / hmin;
    if (cfl > opt.cfl_limit)
        throw InputError("step_axisym: CFL number " + std::to_string(cfl) +
                         " exceeds limit " + std::to_string(opt.cfl_limit));

    const BicubicSampler vr_s(s.vr(), false, true);
    const BicubicSampler v3_s(s.v3(), false, true);
    const ScalarField2D gamma_old = s.gamma();
    const BicubicSampler gamma_s(gamma_old, false, true, /*clamp=*/true);

    // Swirl source on v_r, Gamma^2/r^3 with its x3-mean removed; the mean
    // part is a pure radial gradient absorbed by the pressure (the x3-mean of
    // v_r vanishes identically under these boundary conditions).
    auto source_field = [&](const ScalarField2D& gam) {
        ScalarField2D f(g);
        for (int i = 0; i < n1; ++i) {
            const double r = g.x1(i);
            double mean = 0;
            for (int j = 0; j < period; ++j) {
                f(i, j) = gam(i, j) * gam(i, j) / (r * r * r);
                mean += f(i, j);
            }
            mean /= period;
            for (int j = 0; j < period; ++j) f(i, j) -= mean;
            f(i, n2 - 1) = f(i, 0);
        }
        return f;
    };
    const ScalarField2D f_old = source_field(gamma_old);
    const BicubicSampler f_old_s(f_old, false, true);

    ScalarField2D gamma_new(g), vr_star(g), v3_star(g);
    const double r_lo = g.min1(), r_hi = g.max1();
    for (int i = 0; i < n1; ++i) {
        const double x = g.x1(i);
        for (int j = 0; j < period; ++j) {
            const double y = g.x2(j);
            // RK2 departure point along b = (v_r, v_3).
            const double k1r = s.vr()(i, j), k13 = s.v3()(i, j);
            double xm = x - 0.5 * dt * k1r;
            double ym = y - 0.5 * dt * k13;
            xm = std::clamp(xm, r_lo, r_hi);
            const double k2r = vr_s(xm, ym), k23 = v3_s(xm, ym);
            double xd = std::clamp(x - dt * k2r, r_lo, r_hi);
            const double yd = y - dt * k23;

            gamma_new(i, j) = gamma_s(xd, yd);
            v3_star(i, j) = v3_s(xd, yd);
            vr_star(i, j) = vr_s(xd, yd) + 0.5 * dt * f_old_s(xd, yd);
        }
    }
    // Second half of the forcing uses the advanced Gamma.
    for (int i = 0; i < n1; ++i) gamma_new(i, n2 - 1) = gamma_new(i, 0);
    const ScalarField2D f_new = source_field(gamma_new);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < period; ++j) vr_star(i, j) += 0.5 * dt * f_new(i, j);

    // Wall-normal velocity is absorbed by the wall pressure.
    for (int j = 0; j < n2; ++j) {
        vr_star(0, j) = 0.0;
        vr_star(n1 - 1, j) = 0.0;
    }
    for (int i = 0; i < n1; ++i) {
        vr_star(i, n2 - 1) = vr_star(i, 0);
        v3_star(i, n2 - 1) = v3_star(i, 0);
    }

    // Meridian-plane projection: remove the weighted-divergence residue.
    std::vector<double> rw(n1);
    for (int i = 0; i < n1; ++i) rw[i] = g.x1(i);
    ScalarField2D w(g);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) w(i, j) = rw[i];
    const ScalarField2D rhs = divergence(VectorField2D(vr_star, v3_star), &w, true);
    PoissonResult pr = solve_poisson_wall1_periodic2(rhs, /*dirichlet=*/false, {}, {}, rw,
                                                     opt.poisson);
    if (!pr.converged)
        throw InputError("step_axisym: projection solve residual " +
                         std::to_string(pr.residual) + " above acceptance tolerance");
    const ScalarField2D dphi1 = d_dx1(pr.solution, false);
    const ScalarField2D dphi3 = d_dx2(pr.solution, true);
    for (int i = 1; i < n1 - 1; ++i)
        for (int j = 0; j < period; ++j) vr_star(i, j) -= dphi1(i, j);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < period; ++j) v3_star(i, j) -= dphi3(i, j);

    ScalarField2D vtheta_new(g);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < period; ++j) vtheta_new(i, j) = gamma_new(i, j) / g.x1(i);
    for (int i = 0; i < n1; ++i) {
        vr_star(i, n2 - 1) = vr_star(i, 0);
        v3_star(i, n2 - 1) = v3_star(i, 0);
        vtheta_new(i, n2 - 1) = vtheta_new(i, 0);
    }

    for (const ScalarField2D* f : {&vr_star, &vtheta_new, &v3_star})
        f->require_finite("step_axisym update");

    return AxiState(g, std::move(vr_star), std::move(vtheta_new), std::move(v3_star));
}

double gamma_conservation(const std::vector<AxiState>& series) {
    if (series.size() < 2)
        throw InputError("gamma_conservation: need at least 2 snapshots");
    const Grid2D& g = series.front().grid();
    for (const AxiState& s : series)
        if (s.grid() != g) throw InputError("gamma_conservation: mismatched grids");
    const double g0 = series.front().gamma().max_abs();
    double worst = 0;
    for (const AxiState& s : series) {
        const double gt = s.gamma().max_abs();
        const double drift = g0 > 0 ? std::fabs(gt - g0) / g0 : std::fabs(gt);
        worst = std::max(worst, drift);
    }
    return worst;
}

double gamma_power_integral(const AxiState& s, int n) {
    const Grid2D& g = s.grid();
    const ScalarField2D gam = s.gamma();
    double total = 0;
    for (int i = 0; i < g.n1(); ++i) {
        const double wr = (i == 0 || i == g.n1() - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.n2() - 1; ++j) {
            const double v = std::pow(gam(i, j) * gam(i, j), n);
            total += wr * v * g.x1(i);
        }
    }
    return total * g.h1() * g.h2();
}

double swirl_bound_check(const AxiState& s, double gamma0_sup) {
    const Grid2D& g = s.grid();
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j)
            worst = std::max(worst, std::fabs(s.vtheta()(i, j)) * g.x1(i) - gamma0_sup);
    return worst;
}

AxiState make_smooth_axi_state(const Grid2D& g, std::uint64_t seed, double meridian_amp,
                               double swirl_amp) {
    auto next = [&seed]() {
        std::uint64_t z = (seed += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    };
    const double r0 = g.min1(), r1 = g.max1();
    const double L = g.max2() - g.min2();
    const double dr = r1 - r0;

    struct Mode {
        int m, n;
        double a, b;
    };
    std::vector<Mode> psi_modes, sw_modes;
    for (int m = 1; m <= 2; ++m)
        for (int n = 1; n <= 2; ++n) {
            psi_modes.push_back({m, n, next(), next()});
            sw_modes.push_back({m, n, next(), next()});
        }

    auto psi_dr = [&](double r, double z) {
        double v = 0;
        for (const Mode& md : psi_modes) {
            const double kr = md.m * M_PI / dr, kz = 2 * M_PI * md.n / L;
            v += kr * std::cos(kr * (r - r0)) *
                 (md.a * std::cos(kz * z) + md.b * std::sin(kz * z));
        }
        return v;
    };
    auto psi_dz = [&](double r, double z) {
        double v = 0;
        for (const Mode& md : psi_modes) {
            const double kr = md.m * M_PI / dr, kz = 2 * M_PI * md.n / L;
            v += std::sin(kr * (r - r0)) * kz *
                 (-md.a * std::sin(kz * z) + md.b * std::cos(kz * z));
        }
        return v;
    };
    auto swirl = [&](double r, double z) {
        double v = 0.6;  // bounded-away baseline keeps Gamma nontrivial
        for (const Mode& md : sw_modes) {
            const double kr = md.m * M_PI / dr, kz = 2 * M_PI * md.n / L;
            v += 0.35 * std::cos(kr * (r - r0)) *
                 (md.a * std::cos(kz * z) + md.b * std::sin(kz * z));
        }
        return v;
    };

    const int period = g.n2() - 1;
    ScalarField2D vr(g), vt(g), v3(g);
    for (int i = 0; i < g.n1(); ++i) {
        const double r = g.x1(i);
        for (int j = 0; j < g.n2(); ++j) {
            const double z = g.x2(j % period);
            vr(i, j) = -meridian_amp * psi_dz(r, z) / r;
            v3(i, j) = meridian_amp * psi_dr(r, z) / r;
            vt(i, j) = swirl_amp * swirl(r, z);
        }
    }
    // sin(m*pi) is not exactly zero in floating point; pin the walls.
    for (int j = 0; j < g.n2(); ++j) {
        vr(0, j) = 0.0;
        vr(g.n1() - 1, j) = 0.0;
    }
    return AxiState(g, std::move(vr), std::move(vt), std::move(v3));
}

}  // namespace vlab
