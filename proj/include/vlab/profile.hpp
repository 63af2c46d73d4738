#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab {

enum class Parity { None, Even, Odd };

/// A named profile: an analytic closure, gridded samples, or both
/// (analytic preferred for evaluation; gridded data uses bicubic sampling).
class Profile {
public:
    Profile() = default;
    explicit Profile(std::function<double(double, double)> fn) : fn_(std::move(fn)) {}
    explicit Profile(ScalarField2D samples) : grid_(std::move(samples)) {}

    bool present() const { return fn_ != nullptr || grid_.has_value(); }
    bool analytic() const { return fn_ != nullptr; }
    const std::optional<ScalarField2D>& samples() const { return grid_; }

    double operator()(double z1, double z2) const;

    /// Samples onto a grid (exact for analytic profiles).
    ScalarField2D sampled(const Grid2D& g) const;

private:
    std::function<double(double, double)> fn_;
    std::optional<ScalarField2D> grid_;
};

struct ParitySpec {
    Parity in_z1 = Parity::None;
    Parity in_z2 = Parity::None;
};

/// Self-similar ansatz: exponents, named profiles, declared symmetries and
/// decay exponents. Profile names in use: "theta", "vr", "v3" (meridian
/// families) and "v1", "v2", "h", "w" (half-plane profiles).
struct SelfSimilarAnsatz {
    double alpha = -2.0;
    double beta = 1.5;
    double T0 = 1.0;
    std::map<std::string, Profile> profiles;
    std::map<std::string, ParitySpec> parities;
    std::map<std::string, double> decay_exponents;
    /// o(T0-t) factor of the error term; default (T0-t)/log(1/(T0-t)).
    std::function<double(double)> error_modulus;
    /// Working grid for gridded checks of analytic profiles.
    Grid2D sample_grid{-1.0, 1.0, -1.0, 1.0, 65, 65};

    static constexpr double kNontrivialThreshold = 1e-12;

    const Profile& profile(const std::string& name) const;
    bool has(const std::string& name) const;
    ParitySpec parity(const std::string& name) const;
    double error_modulus_or_default(double t) const;
};

/// Exponent-regime classification from the sign of -2 beta/alpha + 1/alpha - 1.
struct RegimeClass {
    enum class Tag { VelocityBlowup, Supercritical, Critical, Subcritical };
    Tag tag;
    double discriminant;
    static const char* name(Tag t);
};
RegimeClass classify_regime(double alpha, double beta);

/// Scaled families of the ansatz at magnitudes Q_k.
enum class FamilyVariant {
    SwirlLead,       // swirl carries the top order; meridian parts fade as Q^{-beta/alpha}
    MeridianLead,    // meridian parts at top order; swirl diverges, h_k normalizes it
    CenteredBoundary // profiles shifted so the boundary point is the origin
};
struct FamilyMember {
    double Q = 1.0;
    TimeSeries vtheta, vr, v3;
    TimeSeries h;  // only for MeridianLead
};
std::vector<FamilyMember> build_scaled_family(const SelfSimilarAnsatz& ansatz,
                                              const std::vector<double>& Qs,
                                              FamilyVariant variant, const Grid2D& window,
                                              const std::vector<double>& t_tilde);

/// Mismatch |W_claimed - (d2 V1 - d1 V2)| with nodes beyond the accuracy
/// threshold flagged (mesh indices when the fields carry an index base).
struct VorticityReport {
    ScalarField2D mismatch;
    std::vector<std::pair<int, int>> flagged;  // node indices (plus base offsets)
    double max_mismatch = 0.0;
    int i_base = 0, j_base = 0;
};
VorticityReport vorticity_consistency(const VectorField2D& v, const ScalarField2D& w_claimed,
                                      double accuracy, int i_base = 0, int j_base = 0);
VorticityReport vorticity_consistency_from_derivatives(const ScalarField2D& w_claimed,
                                                       const ScalarField2D& d2_v1,
                                                       const ScalarField2D& d1_v2,
                                                       double accuracy, int i_base = 0,
                                                       int j_base = 0);

/// Parity defects, outer-annulus decay fits and canonical sign checks.
struct ProfileCheck {
    std::string name;
    bool parity_checked = false;
    std::string parity_note;
    double parity_defect_z1 = 0.0, parity_defect_z2 = 0.0;
    bool decay_fitted = false;
    double decay_exponent = 0.0, decay_target = 0.0, decay_residual = 0.0;
    std::vector<std::pair<int, int>> sign_violations;
};
std::vector<ProfileCheck> symmetry_decay_check(const SelfSimilarAnsatz& ansatz);

/// Base-line ODE pair for (H^2, W) along z2 = 0:
///   a(z) dW/dz + W - dH2/dz = 0,   a(z) dH2/dz + (1+alpha) H2 = 0,
/// a(z) = V1(z) + (1-alpha) z, integrated by RK4 and evaluated independently
/// through the closed exponential-integral form.
struct BaseOdeSolution {
    std::vector<double> z;
    std::vector<double> h2_rk4, w_rk4;
    std::vector<double> h2_closed, w_closed;
    double max_rel_discrepancy = 0.0;
    // Closed forms as callables (analytic powers when V1 is null).
    std::function<double(double)> h2_fn, w_fn;
    std::function<double(double)> h2_deriv_fn, w_deriv_fn;  // analytic branch only
    bool analytic_branch = false;
};
BaseOdeSolution base_ode_solve(const std::function<double(double)>& v1_base, double alpha,
                               double C, double z_lo, double z_hi, int n_steps,
                               std::optional<double> w0_override = std::nullopt);

/// Homogeneity defect max |T(ly) - l^d T(y)| over annulus samples with
/// l in {1/2, 2}, plus the boundedness-vs-degree verdict.
struct HomogeneityReport {
    double defect = 0.0;
    double scale = 0.0;  // annulus magnitude the defect is judged against
    std::vector<double> lambdas_used;
    bool nontrivial = false;
    bool unbounded_near_origin = false;
    bool inconsistent = false;  // negative degree + bounded + nontrivial
    std::string note;
};
HomogeneityReport homogeneity_check(const Profile& theta, double degree, const Grid2D& grid);

/// Ansatz manifest loader:
/// {alpha, beta, T0, profiles:{name: csv path}, parities, decay_exponents}.
SelfSimilarAnsatz load_ansatz_manifest(const std::string& path);

}  // namespace vlab
