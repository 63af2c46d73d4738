#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vlab/grid.hpp"
#include "vlab/profile.hpp"

namespace vlab {

enum class Verdict { ContradictionFound, HypothesesNotMet, Inconclusive };
const char* verdict_name(Verdict v);

struct HypothesisItem {
    std::string name;
    bool pass = false;
    std::string witness;  // node / flow-line / p-value evidence
};

/// One point of a traced flow line.
struct FlowLine {
    enum class Termination { ReachedBoundary, LeftWindow, HitSingularCurve, ParameterLimit };
    std::vector<double> param;              // strictly monotone
    std::vector<std::pair<double, double>> pos;
    std::vector<double> w_values;
    std::vector<double> h2_values;          // optional, may be empty
    Termination termination = Termination::ParameterLimit;
    static const char* termination_name(Termination t);
};

/// Quantitative traces attached to a certificate.
struct CertificateTraces {
    std::vector<std::pair<double, double>> p_roots_bulk;      // (p, |T1|^(1/(p+1)))
    std::vector<std::pair<double, double>> p_roots_ray_hi;    // (p, T4 root)
    std::vector<std::pair<double, double>> p_roots_ray_lo;    // (p, T5 root)
    std::vector<std::vector<double>> integral_terms;          // per p: T1..T5 + tail
    std::vector<FlowLine> flowlines;
    std::vector<double> basis_integrals;                      // theta-independence I_i
    std::vector<double> seeds;                                // replay data (flattened pairs)
};

struct CertificateReport {
    std::string proposition;  // mechanism id, e.g. "sector-integral"
    Verdict verdict = Verdict::Inconclusive;
    std::vector<HypothesisItem> hypotheses;
    std::string conclusion;
    CertificateTraces traces;

    bool all_hypotheses_pass() const;
    /// Enforces: ContradictionFound only with every hypothesis item passing.
    void finalize(Verdict proposed, std::string note);
};

/// Annular sector about the origin for the p-power test.
struct SectorSpec {
    double th1 = 0.35, th2 = 0.8;  // in (0, pi/2), th1 < th2
    double l1 = 0.0;
    double l2 = std::numeric_limits<double>::infinity();  // inf => tail bound
    std::vector<double> p_ladder = {25, 50, 100, 200};
    double strict_max_margin = 1e-12;  // discrete strict-maximum margin
    double sup_margin_rel = 1e-9;      // ray-sup comparison margin
    void validate(double alpha) const;
};

struct CertifyOptions {
    Grid2D domain{0.0, 6.0, 0.0, 6.0, 97, 97};  // working window in the first quadrant
    double strict_max_margin = 1e-12;
    int flow_seeds_1 = 8, flow_seeds_2 = 4;     // backward flow seed lattice
    double param_horizon = 12.0;                 // backward parameter limit
    double sign_tol = 0.0;                       // strictness tolerance for sign scans
    double nontrivial_threshold = SelfSimilarAnsatz::kNontrivialThreshold;
};

/// Sectorial p-power certificate: checks the sign/decay/strict-max
/// hypotheses, evaluates the five boundary/bulk terms over the p ladder with
/// the truncation tail folded into the tolerance, and certifies when the
/// strictly positive total contradicts the integral identity.
CertificateReport sector_integral_test(const SelfSimilarAnsatz& ansatz, const SectorSpec& spec,
                                       const CertifyOptions& opt = {});

/// Rectangle flow-line certificate: backward characteristics from a strict
/// maximum cannot stay inside the rectangle while the carried vorticity is
/// non-increasing toward it.
CertificateReport rectangle_flowline_test(const SelfSimilarAnsatz& ansatz, double a1, double b1,
                                          double a2, double b4,
                                          const CertifyOptions& opt = {});

/// Singular flow-line certificate on the strip [0, l0]^2-ish window: traces
/// backward characteristics of the composite drift around the zero curve of
/// d1 W, confirming non-crossing and the vanishing of the carried vorticity.
CertificateReport singular_flowline_test(const SelfSimilarAnsatz& ansatz, double l0,
                                         const CertifyOptions& opt = {});

/// Base-line sign certificate: extra zeros of W on the positive axis and
/// negative W values in the open quadrant, each with a backward flow trace.
CertificateReport base_sign_tests(const SelfSimilarAnsatz& ansatz,
                                  const CertifyOptions& opt = {});

/// Weak-form independence certificate: integrals of Theta^2 against the
/// transverse derivatives of a compact bump basis decide d2(Theta^2) = 0,
/// which together with declared oddness and nontriviality is contradictory.
CertificateReport theta_independence_test(const ScalarField2D& theta_sq, int basis_size,
                                          bool declared_odd_z2, double tol = -1.0);

/// Shifted-profile oddness certificate (boundary-centered scaling limits are
/// functions of time whose vertical component inherits the declared parity).
CertificateReport boundary_oddness_test(const SelfSimilarAnsatz& ansatz,
                                        const CertifyOptions& opt = {});

/// Homogeneity certificate for swirl-led families.
CertificateReport homogeneity_certificate(const SelfSimilarAnsatz& ansatz,
                                          const CertifyOptions& opt = {});

/// Deterministic routing from (regime, family variant, parities) to the
/// certifiers to run.
struct Route {
    std::string proposition;
    std::string rationale;
    std::vector<std::string> certifiers;  // mechanism ids
};
Route route_proposition(const SelfSimilarAnsatz& ansatz, FamilyVariant variant,
                        bool boundary_centered);

}  // namespace vlab
