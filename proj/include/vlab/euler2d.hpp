#pragma once

#include <optional>

#include "vlab/grid.hpp"
#include "vlab/poisson.hpp"

namespace vlab {

/// 2D incompressible state in vorticity / stream-function form on a
/// (z1, z2) rectangle, z1-periodic with no-penetration walls at the z2
/// extremes. Signs: w = d2 v1 - d1 v2 and v = (-d2 psi, d1 psi), so psi
/// solves Lap(psi) = -w with Dirichlet wall values carrying the z1-flux.
class Euler2DState {
public:
    Euler2DState(Grid2D grid, ScalarField2D omega, double flux1 = 0.0,
                 const PoissonOptions& opt = {});

    const Grid2D& grid() const { return grid_; }
    const ScalarField2D& omega() const { return omega_; }
    const ScalarField2D& psi() const { return psi_; }
    const VectorField2D& velocity() const { return v_; }
    double flux1() const { return flux1_; }
    double poisson_residual() const { return poisson_residual_; }

    double max_speed() const;

private:
    Grid2D grid_;
    ScalarField2D omega_, psi_;
    VectorField2D v_;
    double flux1_ = 0.0;
    double poisson_residual_ = 0.0;
};

/// Momentum forcing orientation for the Boussinesq system.
enum class BuoyancyOrientation {
    PlusVertical,     // forcing +(0, h^2): d_t w + v.grad(w) - d1(h^2) = 0
    MinusVertical,    // forcing -(0, h^2): d_t w + v.grad(w) + d1(h^2) = 0
    MinusHorizontal,  // forcing -(h^2, 0): d_t w + v.grad(w) - d2(h^2) = 0
};

/// Euler2DState plus the transported scalar h whose square forces the
/// vorticity with the sign selected by the orientation flag.
struct BoussinesqState {
    Euler2DState flow;
    ScalarField2D h;
    BuoyancyOrientation orientation = BuoyancyOrientation::PlusVertical;

    BoussinesqState(Euler2DState f, ScalarField2D hh, BuoyancyOrientation o)
        : flow(std::move(f)), h(std::move(hh)), orientation(o) {
        if (h.grid() != flow.grid())
            throw InputError("BoussinesqState: h grid differs from flow grid");
        h.require_finite("BoussinesqState h");
    }
};

struct Euler2DStepOptions {
    double cfl_limit = 0.5;
    PoissonOptions poisson;
};

Euler2DState step_euler2d(const Euler2DState& s, double dt, const Euler2DStepOptions& opt = {});
BoussinesqState step_boussinesq(const BoussinesqState& s, double dt,
                                const Euler2DStepOptions& opt = {});

/// Space-time residual of the momentum equation in weak form:
/// integral of (v.grad v + d_t v) . perp_grad(f) over the sampled window.
/// The test stream f must vanish (with first derivatives) on the two
/// outermost node rings and the first/last time slices.
double weak_residual(const VectorTimeSeries& velocity, const TimeSeries& test_stream);

}  // namespace vlab
