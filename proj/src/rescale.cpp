#include "vlab/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlab/fd.hpp"
#include "vlab/interp.hpp"

namespace vlab {

void BlowupSequence::validate(const std::vector<double>& vmag_at_centers) const {
    if (centers.empty()) throw InputError("BlowupSequence: no centers");
    if (!(c >= 1.0)) throw InputError("BlowupSequence: comparability constant c must be >= 1");
    if (alpha == 0.0 || alpha >= 1.0)
        throw InputError("BlowupSequence: alpha must be nonzero and < 1");
    for (std::size_t k = 0; k + 1 < centers.size(); ++k)
        if (!(centers[k].t < centers[k + 1].t) || !(centers[k + 1].t < T0))
            throw InputError("BlowupSequence: t_k must increase strictly toward T0");
    for (const Center& ct : centers)
        if (!(ct.Q > 0)) throw InputError("BlowupSequence: magnitudes Q_k must be positive");
    if (!vmag_at_centers.empty()) {
        if (vmag_at_centers.size() != centers.size())
            throw InputError("BlowupSequence: magnitude list length mismatch");
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double m = vmag_at_centers[k];
            if (!(centers[k].Q <= c * m && centers[k].Q >= m / c))
                throw InputError("BlowupSequence: Q_" + std::to_string(k) +
                                 " violates the comparability bounds");
        }
    }
}

double AnchorCriterion::lambda(double s) const {
    const auto& tb = lambda_table;
    if (s <= tb.front().first) return tb.front().second;
    if (s >= tb.back().first) return tb.back().second;
    for (std::size_t k = 0; k + 1 < tb.size(); ++k)
        if (s <= tb[k + 1].first) {
            const double w = (s - tb[k].first) / (tb[k + 1].first - tb[k].first);
            return tb[k].second + w * (tb[k + 1].second - tb[k].second);
        }
    return tb.back().second;
}

void AnchorCriterion::validate() const {
    if (lambda_table.empty()) throw InputError("AnchorCriterion: empty lambda table");
    if (!(lambda_table.front().second >= 1.0))
        throw InputError("AnchorCriterion: lambda(0) must be >= 1");
    for (std::size_t k = 0; k + 1 < lambda_table.size(); ++k)
        if (lambda_table[k + 1].second < lambda_table[k].second ||
            !(lambda_table[k + 1].first > lambda_table[k].first))
            throw InputError("AnchorCriterion: lambda table must be increasing");
}

namespace {

struct ScaleMap {
    double s;   // spatial factor Q^{-(1-a)/a}
    double st;  // temporal factor Q^{-1/a}
};

ScaleMap scale_map(double Q, double alpha) {
    if (!(Q > 0)) throw InputError("rescale: Q must be positive");
    if (alpha == 0.0 || alpha >= 1.0)
        throw InputError("rescale: alpha must be nonzero and < 1 (got " +
                         std::to_string(alpha) + ")");
    return {std::pow(Q, -(1.0 - alpha) / alpha), std::pow(Q, -1.0 / alpha)};
}

}  // namespace

RescaledField rescale_field(const MeridianParent& parent, double center_r, double center_x3,
                            double center_t, double Q, double alpha, const Grid2D& window,
                            const std::vector<double>& t_tilde, const RescaleOptions& opt) {
    if (t_tilde.empty()) throw InputError("rescale_field: empty time window");
    const ScaleMap m = scale_map(Q, alpha);

    // Reject windows escaping the parent domain, naming the first bad corner.
    for (const double tt : t_tilde) {
        const double t = center_t + m.st * tt;
        for (const double cx : {window.min1(), window.max1()})
            for (const double cy : {window.min2(), window.max2()}) {
                const double r = center_r + m.s * cx;
                const double x3 = center_x3 + m.s * cy;
                if (r < parent.r_lo || r > parent.r_hi || x3 < parent.x3_lo ||
                    x3 > parent.x3_hi || t < parent.t_lo || t > parent.t_hi)
                    throw InputError(
                        "rescale_field: window corner (x1~=" + std::to_string(cx) +
                        ", x3~=" + std::to_string(cy) + ", t~=" + std::to_string(tt) +
                        ") maps outside the parent domain");
            }
    }

    RescaledField out;
    out.window = window;
    out.Q = Q;
    out.alpha = alpha;
    out.center_r = center_r;
    out.center_x3 = center_x3;
    out.center_t = center_t;
    out.swirl_normalized = opt.normalize_swirl;

    const double swirl_scale = opt.normalize_swirl ? 1.0 / Q : 1.0;
    for (const double tt : t_tilde) {
        const double t = center_t + m.st * tt;
        VectorField2D mer(window);
        ScalarField2D sw(window);
        for (int i = 0; i < window.n1(); ++i)
            for (int j = 0; j < window.n2(); ++j) {
                const double r = center_r + m.s * window.x1(i);
                const double x3 = center_x3 + m.s * window.x2(j);
                const auto v = parent.velocity(r, 0.0, x3, t);
                mer.comp1()(i, j) = v[0] / Q;
                mer.comp2()(i, j) = v[2] / Q;
                sw(i, j) = v[1] * swirl_scale;
            }
        out.meridian.push_back(tt, std::move(mer));
        out.swirl.push_back(tt, std::move(sw));
        if (opt.sample_pressure_gradient && parent.pressure_gradient) {
            VectorField2D gp(window);
            const double pscale = 1.0 / (Q * Q) * m.s;  // d~(p/Q^2) per unit x~
            for (int i = 0; i < window.n1(); ++i)
                for (int j = 0; j < window.n2(); ++j) {
                    const double r = center_r + m.s * window.x1(i);
                    const double x3 = center_x3 + m.s * window.x2(j);
                    const auto g = parent.pressure_gradient(r, x3, t);
                    gp.comp1()(i, j) = g[0] * pscale;
                    gp.comp2()(i, j) = g[1] * pscale;
                }
            out.pressure_gradient.push_back(tt, std::move(gp));
        }
    }

    {
        const auto v0 = parent.velocity(center_r, 0.0, center_x3,
                                        center_t + m.st * t_tilde.back());
        out.origin_magnitude =
            std::sqrt(v0[0] * v0[0] + v0[1] * v0[1] + v0[2] * v0[2]) / Q;
    }
    return out;
}

MeridianParent make_gridded_parent(const VectorTimeSeries& meridian, const TimeSeries* swirl,
                                   bool periodic2) {
    if (meridian.empty()) throw InputError("make_gridded_parent: empty series");
    if (swirl && swirl->size() != meridian.size())
        throw InputError("make_gridded_parent: swirl series length differs");
    const Grid2D g = meridian.grid();
    MeridianParent p;
    p.r_lo = g.min1();
    p.r_hi = g.max1();
    p.x3_lo = g.min2();
    p.x3_hi = g.max2();
    p.t_lo = meridian.time(0);
    p.t_hi = meridian.time(meridian.size() - 1);
    p.velocity = [&meridian, swirl, periodic2](double r, double, double x3,
                                               double t) -> std::array<double, 3> {
        // Bracketing snapshots, linear in time.
        std::size_t hi = 1;
        while (hi + 1 < meridian.size() && meridian.time(hi) < t) ++hi;
        if (meridian.size() == 1) hi = 0;
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        const double t0 = meridian.time(lo), t1 = meridian.time(hi);
        const double u = hi == lo ? 0.0 : std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
        auto sample = [&](std::size_t k, int comp) {
            const ScalarField2D& f = comp == 0   ? meridian.at(k).comp1()
                                     : comp == 1 ? meridian.at(k).comp2()
                                                 : swirl->at(k);
            return BicubicSampler(f, false, periodic2)(r, x3);
        };
        const double vr = (1 - u) * sample(lo, 0) + u * sample(hi, 0);
        const double v3 = (1 - u) * sample(lo, 1) + u * sample(hi, 1);
        const double vth = swirl ? (1 - u) * sample(lo, 2) + u * sample(hi, 2) : 0.0;
        return {vr, vth, v3};
    };
    return p;
}

NearMaximalResult find_near_maximal(const VectorTimeSeries& series, double c,
                                    std::vector<std::size_t> snapshot_indices, double alpha,
                                    double T0) {
    if (series.empty()) throw InputError("find_near_maximal: empty series");
    if (!(c > 0.0 && c <= 1.0))
        throw InputError("find_near_maximal: c must lie in (0,1], got " + std::to_string(c));
    if (snapshot_indices.empty())
        for (std::size_t k = 0; k < series.size(); ++k) snapshot_indices.push_back(k);

    const Grid2D& g = series.grid();
    NearMaximalResult out;
    out.sequence.alpha = alpha;
    out.sequence.c = std::max(1.0, 1.0 / c);
    out.sequence.T0 = T0;
    double running_sup = 0.0;
    std::size_t next = 0;
    double min_r = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < series.size(); ++k) {
        double mx = 0.0;
        int bi = 0, bj = 0;
        for (int i = 0; i < g.n1(); ++i)
            for (int j = 0; j < g.n2(); ++j) {
                const double v = series.at(k).magnitude(i, j);
                if (v > mx) {  // strict: ties keep the smallest (i, j)
                    mx = v;
                    bi = i;
                    bj = j;
                }
            }
        running_sup = std::max(running_sup, mx);
        while (next < snapshot_indices.size() && snapshot_indices[next] == k) {
            if (mx >= c * running_sup && mx > 0.0) {
                out.sequence.centers.push_back({g.x1(bi), g.x2(bj), series.time(k), mx});
                min_r = std::min(min_r, std::fabs(g.x1(bi)));
            } else {
                out.skipped.push_back(k);
            }
            ++next;
        }
    }
    out.sequence.off_axis_d = out.sequence.centers.empty() ? 0.0 : min_r;
    return out;
}

double check_anchor(const RescaledField& rescaled, const AnchorCriterion& crit, int k) {
    crit.validate();
    if (rescaled.meridian.empty()) throw InputError("check_anchor: empty rescaled window");
    if (!(rescaled.origin_magnitude > 0.0))
        throw InputError("check_anchor: |v~(0,0)| = 0, not a blow-up point");
    const double radius2 = crit.window_radius ? crit.window_radius(k) : 1e300;
    const Grid2D& g = rescaled.window;
    double worst = 0.0;
    const bool has_swirl = rescaled.swirl.size() == rescaled.meridian.size();
    for (std::size_t n = 0; n < rescaled.meridian.size(); ++n) {
        const double tt = rescaled.meridian.time(n);
        for (int i = 0; i < g.n1(); ++i)
            for (int j = 0; j < g.n2(); ++j) {
                const double x2 = g.x1(i) * g.x1(i) + g.x2(j) * g.x2(j);
                const double s = x2 + std::fabs(tt);
                if (s > radius2) continue;
                double mag2 = rescaled.meridian.at(n).comp1()(i, j) *
                                  rescaled.meridian.at(n).comp1()(i, j) +
                              rescaled.meridian.at(n).comp2()(i, j) *
                                  rescaled.meridian.at(n).comp2()(i, j);
                if (has_swirl && rescaled.swirl_normalized) {
                    const double sv = rescaled.swirl.at(n)(i, j);
                    mag2 += sv * sv;
                }
                const double ratio =
                    std::sqrt(mag2) / (crit.lambda(s) * rescaled.origin_magnitude);
                worst = std::max(worst, ratio);
            }
    }
    return worst;
}

DomainClass classify_domain(const BlowupSequence& seq, double alpha,
                            double divergence_threshold) {
    if (seq.centers.empty()) throw InputError("classify_domain: empty sequence");
    std::vector<double> s;
    for (const auto& ct : seq.centers) {
        if (ct.r > 1.0 + 1e-12)
            throw InputError("classify_domain: center radius exceeds the unit cylinder");
        s.push_back(std::pow(ct.Q, (1.0 - alpha) / alpha) * (1.0 - std::fabs(ct.r)));
    }
    const std::size_t tail_start = s.size() / 2;
    std::vector<double> tail(s.begin() + tail_start, s.end());

    bool monotone_up = tail.size() >= 2;
    for (std::size_t k = 0; k + 1 < tail.size(); ++k)
        if (!(tail[k + 1] > tail[k])) monotone_up = false;
    DomainClass out;
    if (monotone_up && tail.back() > divergence_threshold) {
        out.tag = DomainClass::Tag::FullPlane;
        out.rationale = "scaled wall distances grow monotonically beyond the threshold";
        return out;
    }
    std::vector<double> sorted = tail;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double spread = sorted.back() - sorted.front();
    if (spread <= 0.25 * std::max(std::fabs(median), 1e-12) + 1e-12) {
        out.tag = DomainClass::Tag::HalfPlane;
        out.offset = median;
        out.rationale = "scaled wall distances converge; offset from the tail median";
        return out;
    }
    out.tag = DomainClass::Tag::Inconclusive;
    out.rationale = "scaled wall distances neither converge nor diverge monotonically";
    return out;
}

ReducedResidual reduced_residual(const RescaledField& rf, double Q, double alpha, double r0) {
    if (!(r0 > 0.0)) throw InputError("reduced_residual: r0 must be positive (off-axis only)");
    if (rf.meridian.size() < 3)
        throw InputError("reduced_residual: need >= 3 time slices for time derivatives");
    const ScaleMap m = scale_map(Q, alpha);
    const Grid2D& g = rf.window;
    const bool has_p = rf.pressure_gradient.size() == rf.meridian.size();
    const bool has_sw = rf.swirl.size() == rf.meridian.size();

    ReducedResidual out;
    const double ext = std::max({std::fabs(g.min1()), std::fabs(g.max1()),
                                 std::fabs(g.min2()), std::fabs(g.max2())});
    out.window_angle = std::atan2(m.s * ext, r0);
    const double th = out.window_angle;
    const double qpow = std::pow(Q, 1.0 / alpha - 1.0);

    for (std::size_t n = 1; n + 1 < rf.meridian.size(); ++n) {
        const VectorField2D& v = rf.meridian.at(n);
        const ScalarField2D d1vr = d_dx1(v.comp1());
        const ScalarField2D d3vr = d_dx2(v.comp1());
        const ScalarField2D d1v3 = d_dx1(v.comp2());
        const ScalarField2D d3v3 = d_dx2(v.comp2());
        const double dt2 = rf.meridian.time(n + 1) - rf.meridian.time(n - 1);

        ScalarField2D rr(g), rv(g);
        for (int i = 0; i < g.n1(); ++i)
            for (int j = 0; j < g.n2(); ++j) {
                const double vr = v.comp1()(i, j), v3 = v.comp2()(i, j);
                const double dtvr = (rf.meridian.at(n + 1).comp1()(i, j) -
                                     rf.meridian.at(n - 1).comp1()(i, j)) / dt2;
                const double dtv3 = (rf.meridian.at(n + 1).comp2()(i, j) -
                                     rf.meridian.at(n - 1).comp2()(i, j)) / dt2;
                double gp1, gp3;
                if (has_p) {
                    gp1 = rf.pressure_gradient.at(n).comp1()(i, j);
                    gp3 = rf.pressure_gradient.at(n).comp2()(i, j);
                } else {
                    // Momentum recovery: the residual then vanishes by design.
                    gp1 = -dtvr - (vr * d1vr(i, j) + v3 * d3vr(i, j));
                    gp3 = -dtv3 - (vr * d1v3(i, j) + v3 * d3v3(i, j));
                }
                rr(i, j) = -(vr * d1vr(i, j) + v3 * d3vr(i, j)) - gp1 - dtvr;
                rv(i, j) = -(vr * d1v3(i, j) + v3 * d3v3(i, j)) - gp3 - dtv3;

                const double rloc = r0 + m.s * g.x1(i);
                if (has_sw) {
                    const double sv = rf.swirl.at(n)(i, j);
                    out.swirl_term_max =
                        std::max(out.swirl_term_max, sv * sv / (qpow * rloc));
                }
                // Angular remainder estimate at the window's subtended angle:
                // transverse derivatives from the axisymmetric identities plus
                // the frame-rotation swirl mixing.
                const double sv = has_sw ? rf.swirl.at(n)(i, j) : 0.0;
                const double kappa = m.s / rloc;
                const double d2frame = d1vr(i, j) * std::tan(th) - sv * kappa;
                const double o_r = std::fabs(vr * d1vr(i, j)) * (1 - std::cos(th)) +
                                   std::fabs(vr * d2frame) * std::sin(th) +
                                   std::fabs(gp1) * (1 - std::cos(th)) +
                                   std::fabs(gp1 * std::tan(th)) * std::sin(th);
                const double o_3 = std::fabs(vr * d1v3(i, j)) * (1 - std::cos(th)) +
                                   std::fabs(v3 * d2frame) * std::sin(th);
                out.oterm_max = std::max(out.oterm_max, o_r + o_3);
            }
        out.radial_max = std::max(out.radial_max, rr.max_abs());
        out.vertical_max = std::max(out.vertical_max, rv.max_abs());
        out.radial.push_back(rf.meridian.time(n), std::move(rr));
        out.vertical.push_back(rf.meridian.time(n), std::move(rv));
    }
    return out;
}

CollapseDefect tan_theta_collapse(const MeridianParent& parent, double center_r,
                                  double center_x3, double center_t, double Q, double alpha,
                                  const Grid2D& window, double theta) {
    const ScaleMap m = scale_map(Q, alpha);
    const double b_phys = center_r * std::tan(theta);  // transverse offset of the plane
    const double delta = window.h1();                  // transverse step, window units

    // Cylindrical scalars as functions of the window coordinates on the
    // offset plane; the transverse derivative is a genuine 3D difference.
    auto sample_plane = [&](double x2t, int i, int j, double& vr, double& v3) {
        const double X = center_r + m.s * window.x1(i);
        const double Y = b_phys + m.s * x2t;
        const double Z = center_x3 + m.s * window.x2(j);
        const double r = std::hypot(X, Y);
        const double th = std::atan2(Y, X);
        const auto v = parent.velocity(r, th, Z, center_t);
        vr = v[0] / Q;
        v3 = v[2] / Q;
    };

    CollapseDefect out;
    const double tt = std::tan(theta);
    for (int i = 1; i < window.n1() - 1; ++i)
        for (int j = 1; j < window.n2() - 1; ++j) {
            double vr_p, v3_p, vr_m, v3_m, vr_e, v3_e, vr_w, v3_w;
            sample_plane(+delta, i, j, vr_p, v3_p);
            sample_plane(-delta, i, j, vr_m, v3_m);
            sample_plane(0.0, i + 1, j, vr_e, v3_e);
            sample_plane(0.0, i - 1, j, vr_w, v3_w);
            const double d2vr = (vr_p - vr_m) / (2 * delta);
            const double d2v3 = (v3_p - v3_m) / (2 * delta);
            const double d1vr = (vr_e - vr_w) / (2 * window.h1());
            const double d1v3 = (v3_e - v3_w) / (2 * window.h1());
            out.radial = std::max(out.radial, std::fabs(d2vr - d1vr * tt));
            out.vertical = std::max(out.vertical, std::fabs(d2v3 - d1v3 * tt));
        }
    out.defect = std::max(out.radial, out.vertical);
    return out;
}

std::vector<HolderEstimate> successive_difference_holder(const std::vector<RescaledField>& seq,
                                                         double gamma,
                                                         std::size_t pair_budget) {
    std::vector<HolderEstimate> out;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        if (seq[k].window != seq[k + 1].window ||
            seq[k].meridian.size() != seq[k + 1].meridian.size())
            throw InputError("successive_difference_holder: windows must match");
        HolderEstimate worst;
        worst.exponent = gamma;
        for (int comp = 0; comp < 2; ++comp) {
            TimeSeries diff;
            for (std::size_t n = 0; n < seq[k].meridian.size(); ++n) {
                const ScalarField2D& a = comp == 0 ? seq[k].meridian.at(n).comp1()
                                                   : seq[k].meridian.at(n).comp2();
                const ScalarField2D& b = comp == 0 ? seq[k + 1].meridian.at(n).comp1()
                                                   : seq[k + 1].meridian.at(n).comp2();
                ScalarField2D d(a.grid());
                for (std::size_t m = 0; m < d.values().size(); ++m)
                    d.values()[m] = b.values()[m] - a.values()[m];
                diff.push_back(seq[k].meridian.time(n), std::move(d));
            }
            const HolderEstimate est = holder_norm(diff, gamma, pair_budget);
            worst.sup_norm = std::max(worst.sup_norm, est.sup_norm);
            worst.seminorm = std::max(worst.seminorm, est.seminorm);
            worst.pairs_used = est.pairs_used;
            worst.all_pairs = est.all_pairs;
        }
        out.push_back(worst);
    }
    return out;
}

std::vector<double> successive_difference_sup(const std::vector<RescaledField>& seq) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        if (seq[k].window != seq[k + 1].window ||
            seq[k].meridian.size() != seq[k + 1].meridian.size())
            throw InputError("successive_difference_sup: windows must match");
        double worst = 0.0;
        for (std::size_t n = 0; n < seq[k].meridian.size(); ++n)
            for (int i = 0; i < seq[k].window.n1(); ++i)
                for (int j = 0; j < seq[k].window.n2(); ++j) {
                    worst = std::max(worst,
                                     std::fabs(seq[k + 1].meridian.at(n).comp1()(i, j) -
                                               seq[k].meridian.at(n).comp1()(i, j)));
                    worst = std::max(worst,
                                     std::fabs(seq[k + 1].meridian.at(n).comp2()(i, j) -
                                               seq[k].meridian.at(n).comp2()(i, j)));
                }
        out.push_back(worst);
    }
    return out;
}

}  // namespace vlab
