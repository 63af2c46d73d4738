#pragma once

#include <cstdint>
#include <vector>

#include "vlab/grid.hpp"
#include "vlab/poisson.hpp"

namespace vlab {

/// Axisymmetric velocity snapshot on the meridian (r, x3) plane.
/// Grid axis 1 is r in [r_min, 1] with r_min > 0 (the off-axis annulus),
/// axis 2 is x3-periodic (first/last node values coincide). No-penetration
/// walls: v_r = 0 at both radial walls.
class AxiState {
public:
    AxiState(Grid2D grid, ScalarField2D vr, ScalarField2D vtheta, ScalarField2D v3);

    static constexpr double kDefaultRmin = 0.25;

    const Grid2D& grid() const { return grid_; }
    const ScalarField2D& vr() const { return vr_; }
    const ScalarField2D& vtheta() const { return vtheta_; }
    const ScalarField2D& v3() const { return v3_; }

    double r(int i) const { return grid_.x1(i); }

    /// Gamma = r * v_theta, the transported swirl quantity.
    ScalarField2D gamma() const;

    /// Max meridian-divergence (1/r)(d_r(r v_r) + d_3(r v_3)) over nodes.
    double max_divergence() const;

    double max_speed() const;

private:
    Grid2D grid_;
    ScalarField2D vr_, vtheta_, v3_;
};

struct AxiStepOptions {
    double cfl_limit = 0.5;
    PoissonOptions poisson;
};

/// One semi-Lagrangian step of the axisymmetric Euler system: Gamma is
/// advected along b = (v_r, v_3) (range-clamped bicubic), the meridian
/// momentum is advected with the swirl forcing integrated at second order,
/// and incompressibility is re-enforced by a meridian-plane projection.
AxiState step_axisym(const AxiState& s, double dt, const AxiStepOptions& opt = {});

/// Max relative drift of ||Gamma(t)||_inf against the initial snapshot.
/// If Gamma(0) vanishes identically the drift is reported as absolute.
double gamma_conservation(const std::vector<AxiState>& series);

/// r-weighted integral of |Gamma|^(2n) over the meridian section.
double gamma_power_integral(const AxiState& s, int n);

/// Worst violation max over nodes of (|v_theta| * r - gamma0_sup).
double swirl_bound_check(const AxiState& s, double gamma0_sup);

/// Smooth random wall-compatible data from low-wavenumber modes; the
/// meridian part comes from a stream function so it is divergence-free.
AxiState make_smooth_axi_state(const Grid2D& g, std::uint64_t seed,
                               double meridian_amp = 0.5, double swirl_amp = 1.0);

}  // namespace vlab
