#include "vlab/euler2d.hpp"

#include <algorithm>
#include <cmath>

#include "vlab/fd.hpp"
#include "vlab/interp.hpp"

namespace vlab {

namespace {

Grid2D transposed(const Grid2D& g) {
    return Grid2D(g.min2(), g.max2(), g.min1(), g.max1(), g.n2(), g.n1());
}

ScalarField2D transpose(const ScalarField2D& f) {
    ScalarField2D out(transposed(f.grid()));
    for (int i = 0; i < f.grid().n1(); ++i)
        for (int j = 0; j < f.grid().n2(); ++j) out(j, i) = f(i, j);
    return out;
}

}  // namespace

Euler2DState::Euler2DState(Grid2D grid, ScalarField2D omega, double flux1,
                           const PoissonOptions& opt)
    : grid_(grid), omega_(std::move(omega)), psi_(grid), v_(grid), flux1_(flux1) {
    if (omega_.grid() != grid_)
        throw InputError("Euler2DState: omega grid differs from state grid");
    omega_.require_finite("Euler2DState omega");

    // Lap(psi) = -omega, z1-periodic, Dirichlet walls in z2 carrying the
    // z1-flux: flux1 = psi(bottom) - psi(top). Solved in the transposed
    // layout (walls on axis 1, periodic axis 2).
    ScalarField2D rhs_t = transpose(omega_);
    for (double& v : rhs_t.values()) v = -v;
    const int n2 = grid_.n1();  // transposed axis-2 count = z1 nodes
    std::vector<double> lo(n2, 0.0), hi(n2, -flux1);
    PoissonResult pr =
        solve_poisson_wall1_periodic2(rhs_t, /*dirichlet=*/true, lo, hi, {}, opt);
    poisson_residual_ = pr.residual;
    if (!pr.converged)
        throw InputError("Euler2DState: stream-function solve residual " +
                         std::to_string(pr.residual) + " above acceptance tolerance");
    psi_ = transpose(pr.solution);

    // v = (-d2 psi, d1 psi); the wall rows get v2 = 0 exactly since psi is
    // constant along each wall.
    ScalarField2D v1 = d_dx2(psi_, false);
    for (double& x : v1.values()) x = -x;
    ScalarField2D v2 = d_dx1(psi_, true);
    for (int i = 0; i < grid_.n1(); ++i) {
        v2(i, 0) = 0.0;
        v2(i, grid_.n2() - 1) = 0.0;
    }
    v_ = VectorField2D(std::move(v1), std::move(v2));
}

double Euler2DState::max_speed() const {
    double m = 0;
    for (int i = 0; i < grid_.n1(); ++i)
        for (int j = 0; j < grid_.n2(); ++j) m = std::max(m, v_.magnitude(i, j));
    return m;
}

namespace {

/// Shared semi-Lagrangian advance for omega (with optional buoyancy source)
/// and h. Null h runs the plain Euler step on the identical code path.
BoussinesqState advance(const Euler2DState& s, const ScalarField2D* h,
                        BuoyancyOrientation orientation, double dt,
                        const Euler2DStepOptions& opt) {
    const Grid2D& g = s.grid();
    const int n1 = g.n1(), n2 = g.n2();
    const int period1 = n1 - 1;
    const double hmin = std::min(g.h1(), g.h2());
    const double cfl = s.max_speed() * dt / hmin;
    if (cfl > opt.cfl_limit)
        throw InputError("step: CFL number " + std::to_string(cfl) + " exceeds limit " +
                         std::to_string(opt.cfl_limit));

    const BicubicSampler v1s(s.velocity().comp1(), true, false);
    const BicubicSampler v2s(s.velocity().comp2(), true, false);
    const BicubicSampler ws(s.omega(), true, false, /*clamp=*/true);

    auto h2_field = [&](const ScalarField2D& hh) {
        ScalarField2D out(g);
        for (std::size_t k = 0; k < out.values().size(); ++k)
            out.values()[k] = hh.values()[k] * hh.values()[k];
        return out;
    };
    auto source_of = [&](const ScalarField2D& hh) {
        // d_t w + v.grad(w) = sign * d(h^2); see BuoyancyOrientation.
        const ScalarField2D h2 = h2_field(hh);
        ScalarField2D src(g);
        switch (orientation) {
            case BuoyancyOrientation::PlusVertical: src = d_dx1(h2, true); break;
            case BuoyancyOrientation::MinusVertical: {
                src = d_dx1(h2, true);
                for (double& v : src.values()) v = -v;
                break;
            }
            case BuoyancyOrientation::MinusHorizontal: src = d_dx2(h2, false); break;
        }
        return src;
    };

    ScalarField2D w_new(g), h_new(g);
    ScalarField2D src_old(g);
    std::optional<BicubicSampler> hs, src_old_s;
    if (h) {
        hs.emplace(*h, true, false, /*clamp=*/true);
        src_old = source_of(*h);
        src_old_s.emplace(src_old, true, false);
    }

    const double y_lo = g.min2(), y_hi = g.max2();
    for (int i = 0; i < period1; ++i) {
        const double x = g.x1(i);
        for (int j = 0; j < n2; ++j) {
            const double y = g.x2(j);
            const double k11 = s.velocity().comp1()(i, j), k12 = s.velocity().comp2()(i, j);
            const double xm = x - 0.5 * dt * k11;
            const double ym = std::clamp(y - 0.5 * dt * k12, y_lo, y_hi);
            const double k21 = v1s(xm, ym), k22 = v2s(xm, ym);
            const double xd = x - dt * k21;
            const double yd = std::clamp(y - dt * k22, y_lo, y_hi);
            w_new(i, j) = ws(xd, yd);
            if (h) {
                h_new(i, j) = (*hs)(xd, yd);
                w_new(i, j) += 0.5 * dt * (*src_old_s)(xd, yd);
            }
        }
    }
    if (h) {
        for (int j = 0; j < n2; ++j) h_new(period1, j) = h_new(0, j);
        const ScalarField2D src_new = source_of(h_new);
        for (int i = 0; i < period1; ++i)
            for (int j = 0; j < n2; ++j) w_new(i, j) += 0.5 * dt * src_new(i, j);
    }
    for (int j = 0; j < n2; ++j) w_new(period1, j) = w_new(0, j);

    Euler2DState flow(g, std::move(w_new), s.flux1(), opt.poisson);
    if (!h) return BoussinesqState(std::move(flow), ScalarField2D(g, 0.0),
                                   BuoyancyOrientation::PlusVertical);
    return BoussinesqState(std::move(flow), std::move(h_new), orientation);
}

}  // namespace

Euler2DState step_euler2d(const Euler2DState& s, double dt, const Euler2DStepOptions& opt) {
    return advance(s, nullptr, BuoyancyOrientation::PlusVertical, dt, opt).flow;
}

BoussinesqState step_boussinesq(const BoussinesqState& s, double dt,
                                const Euler2DStepOptions& opt) {
    return advance(s.flow, &s.h, s.orientation, dt, opt);
}

double weak_residual(const VectorTimeSeries& velocity, const TimeSeries& test_stream) {
    if (velocity.size() < 3)
        throw InputError("weak_residual: need at least 3 snapshots for time derivatives");
    if (velocity.size() != test_stream.size())
        throw InputError("weak_residual: velocity and test stream lengths differ");
    const Grid2D& g = velocity.grid();
    if (test_stream.grid() != g)
        throw InputError("weak_residual: test stream grid differs from velocity grid");

    // The test stream must vanish near the space-time boundary of the window.
    double fscale = 0;
    for (std::size_t k = 0; k < test_stream.size(); ++k)
        fscale = std::max(fscale, test_stream.at(k).max_abs());
    const double tol = 1e-12 * std::max(fscale, 1.0);
    auto boundary_ok = [&](const ScalarField2D& f) {
        const int n1 = g.n1(), n2 = g.n2();
        for (int ring = 0; ring < 2; ++ring)
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j) {
                    const bool edge = i == ring || i == n1 - 1 - ring || j == ring ||
                                      j == n2 - 1 - ring;
                    if (edge && std::fabs(f(i, j)) > tol) return false;
                }
        return true;
    };
    for (std::size_t k = 0; k < test_stream.size(); ++k) {
        const bool endpoint = k == 0 || k + 1 == test_stream.size();
        if (endpoint) {
            if (test_stream.at(k).max_abs() > tol)
                throw InputError("weak_residual: test stream does not vanish at the "
                                 "first/last time slice");
        } else if (!boundary_ok(test_stream.at(k))) {
            throw InputError("weak_residual: test stream support touches the spatial "
                             "boundary at snapshot " + std::to_string(k));
        }
    }

    const double cellw = g.h1() * g.h2();
    double total = 0.0;
    for (std::size_t k = 1; k + 1 < velocity.size(); ++k) {
        const double dt2 = velocity.time(k + 1) - velocity.time(k - 1);
        const VectorField2D& v = velocity.at(k);
        const ScalarField2D dv1d1 = d_dx1(v.comp1());
        const ScalarField2D dv1d2 = d_dx2(v.comp1());
        const ScalarField2D dv2d1 = d_dx1(v.comp2());
        const ScalarField2D dv2d2 = d_dx2(v.comp2());
        const ScalarField2D z1 = d_dx2(test_stream.at(k));  // -zeta_1
        const ScalarField2D z2 = d_dx1(test_stream.at(k));  //  zeta_2
        double slab = 0.0;
        for (int i = 0; i < g.n1(); ++i)
            for (int j = 0; j < g.n2(); ++j) {
                const double a1 = v.comp1()(i, j) * dv1d1(i, j) +
                                  v.comp2()(i, j) * dv1d2(i, j) +
                                  (velocity.at(k + 1).comp1()(i, j) -
                                   velocity.at(k - 1).comp1()(i, j)) / dt2;
                const double a2 = v.comp1()(i, j) * dv2d1(i, j) +
                                  v.comp2()(i, j) * dv2d2(i, j) +
                                  (velocity.at(k + 1).comp2()(i, j) -
                                   velocity.at(k - 1).comp2()(i, j)) / dt2;
                slab += (-a1 * z1(i, j) + a2 * z2(i, j)) * cellw;
            }
        const double wk = 0.5 * (velocity.time(k + 1) - velocity.time(k - 1));
        total += slab * wk;
    }
    return total;
}

}  // namespace vlab
