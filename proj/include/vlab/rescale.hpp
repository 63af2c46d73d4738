#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vlab/grid.hpp"
#include "vlab/holder.hpp"

namespace vlab {

/// A parent velocity field samplable at any meridian point (and, through the
/// angle argument, anywhere in 3D): components (v_r, v_theta, v_3) as
/// functions of (r, theta, x3, t). Axisymmetric closures ignore theta.
struct MeridianParent {
    std::function<std::array<double, 3>(double r, double theta, double x3, double t)> velocity;
    /// Optional meridian pressure gradient (d_r p, d_3 p)(r, x3, t).
    std::function<std::array<double, 2>(double r, double x3, double t)> pressure_gradient;
    bool axisymmetric = true;
    // Sampling domain; windows mapping outside are rejected. Closures over a
    // physical annulus should set r_lo/r_hi; analytic profiles defined
    // everywhere keep the open defaults.
    double r_lo = -1e300, r_hi = 1e300;
    double x3_lo = -1e300, x3_hi = 1e300;
    double t_lo = -1e300, t_hi = 1e300;
};

/// Blow-up centers (x_k, t_k) with magnitudes Q_k and the scale parameters.
struct BlowupSequence {
    struct Center {
        double r = 0, x3 = 0;  // meridian coordinates of x_k
        double t = 0;
        double Q = 1;
    };
    std::vector<Center> centers;
    double alpha = 0.5;
    double c = 1.0;          // comparability constant, >= 1
    double T0 = 1.0;         // blow-up time the t_k increase toward
    double off_axis_d = 0;   // recorded lower bound on |x'_k|

    void validate(const std::vector<double>& vmag_at_centers = {}) const;
};

/// Tabulated increasing lambda: [0,inf) -> [1,inf) plus the window-radius
/// rule; both are user-supplied with the documented defaults.
struct AnchorCriterion {
    std::vector<std::pair<double, double>> lambda_table = {{0.0, 2.0}, {1.0, 4.0}, {4.0, 10.0},
                                                           {16.0, 34.0}, {64.0, 130.0}};
    std::function<double(int)> window_radius = [](int k) { return 4.0 * std::sqrt(double(k + 1)); };

    double lambda(double s) const;
    void validate() const;
};

struct DomainClass {
    enum class Tag { FullPlane, HalfPlane, Inconclusive };
    Tag tag = Tag::Inconclusive;
    double offset = 0.0;  // scaled wall distance for HalfPlane
    std::string rationale;
};

/// One rescaled window: tilde fields on a (x1~, x3~) grid at times t~ <= 0,
/// under the map x = Q^{-(1-a)/a} x~ + x_k, t = Q^{-1/a} t~ + t_k.
struct RescaledField {
    Grid2D window;
    VectorTimeSeries meridian;            // (v_r~, v_3~)
    TimeSeries swirl;                     // v_theta~ (empty if parent has none)
    VectorTimeSeries pressure_gradient;   // (d1 p~, d3 p~), empty when not supplied
    double origin_magnitude = 0.0;        // |v~(0,0)| at the latest time
    double Q = 1.0, alpha = 0.5;
    double center_r = 0.0, center_x3 = 0.0, center_t = 0.0;
    bool swirl_normalized = true;
};

struct RescaleOptions {
    /// Paper convention divides the swirl by Q like every component; the
    /// diagnostic mode keeps the physical swirl so the reduced-equation
    /// exponent in Q can be measured in isolation.
    bool normalize_swirl = true;
    bool sample_pressure_gradient = true;
};

RescaledField rescale_field(const MeridianParent& parent, double center_r, double center_x3,
                            double center_t, double Q, double alpha, const Grid2D& window,
                            const std::vector<double>& t_tilde,
                            const RescaleOptions& opt = {});

/// Wraps a sampled trajectory as a parent: bicubic in space, linear between
/// snapshots in time, with the domain bounds taken from the grid and the
/// time span. The wrapper keeps views into the series; it must outlive them.
MeridianParent make_gridded_parent(const VectorTimeSeries& meridian,
                                   const TimeSeries* swirl = nullptr,
                                   bool periodic2 = false);

/// Near-maximal centers from a sampled trajectory: for each selected snapshot
/// the argmax of |v| qualifies when it dominates the running supremum by the
/// factor c in (0,1]. Non-qualifying indices are reported, not fatal.
struct NearMaximalResult {
    BlowupSequence sequence;
    std::vector<std::size_t> skipped;  // requested indices that did not qualify
};
NearMaximalResult find_near_maximal(const VectorTimeSeries& series, double c,
                                    std::vector<std::size_t> snapshot_indices = {},
                                    double alpha = 0.5, double T0 = 1.0);

/// Worst ratio max |v~| / (lambda(|x~|^2+|t~|) |v~(0,0)|); <= 1 means anchor.
double check_anchor(const RescaledField& rescaled, const AnchorCriterion& crit, int k = 0);

/// Wall-distance classification of the expanding domains from the scaled
/// boundary gaps Q^{(1-a)/a} (1 - |x'_k|).
DomainClass classify_domain(const BlowupSequence& seq, double alpha,
                            double divergence_threshold = 1e3);

/// Reduced-equation diagnostics of a rescaled window.
struct ReducedResidual {
    TimeSeries radial;    // 2D momentum residual, radial component
    TimeSeries vertical;  // and vertical component
    double radial_max = 0.0, vertical_max = 0.0;
    double swirl_term_max = 0.0;   // max (v_theta~)^2 / (Q^{1/a-1} r)
    double oterm_max = 0.0;        // angular remainder estimate at the window extent
    double window_angle = 0.0;     // angle subtended by the window at the axis
};
ReducedResidual reduced_residual(const RescaledField& rf, double Q, double alpha, double r0);

/// Exponent of Q in the reduced swirl term for the h-normalized families:
/// the term vanishes as Q -> 0 exactly when this is positive.
inline double swirl_term_q_exponent(double alpha, double beta) {
    return 2.0 * beta / alpha - 1.0 / alpha + 1.0;
}

/// Transverse-derivative collapse check: max |d2 v~ - tan(theta) d1 v~| over
/// a window sampled on the plane whose center subtends the given angle.
struct CollapseDefect {
    double defect = 0.0;
    double radial = 0.0, vertical = 0.0;
};
CollapseDefect tan_theta_collapse(const MeridianParent& parent, double center_r,
                                  double center_x3, double center_t, double Q, double alpha,
                                  const Grid2D& window, double theta);

/// Successive-difference convergence diagnostics: Hoelder estimates of
/// v~_{k+1} - v~_k on the shared window (the checkable surrogate for
/// subsequence extraction). The estimate is the componentwise worst case.
std::vector<double> successive_difference_sup(const std::vector<RescaledField>& seq);
std::vector<HolderEstimate> successive_difference_holder(const std::vector<RescaledField>& seq,
                                                         double gamma,
                                                         std::size_t pair_budget = 20000);

}  // namespace vlab
