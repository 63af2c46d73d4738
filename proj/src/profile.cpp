#include "vlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "vlab/csvio.hpp"
#include "vlab/fd.hpp"
#include "vlab/interp.hpp"

namespace vlab {

double Profile::operator()(double z1, double z2) const {
    if (fn_) return fn_(z1, z2);
    if (grid_) return BicubicSampler(*grid_)(z1, z2);
    throw InputError("Profile: evaluated but not present");
}

ScalarField2D Profile::sampled(const Grid2D& g) const {
    if (fn_) return ScalarField2D::sample(g, fn_);
    if (grid_) {
        if (grid_->grid() == g) return *grid_;
        BicubicSampler s(*grid_);
        return ScalarField2D::sample(g, [&](double x, double y) { return s(x, y); });
    }
    throw InputError("Profile: sampled but not present");
}

const Profile& SelfSimilarAnsatz::profile(const std::string& name) const {
    auto it = profiles.find(name);
    if (it == profiles.end() || !it->second.present())
        throw InputError("ansatz: required profile '" + name + "' is missing");
    return it->second;
}

bool SelfSimilarAnsatz::has(const std::string& name) const {
    auto it = profiles.find(name);
    return it != profiles.end() && it->second.present();
}

ParitySpec SelfSimilarAnsatz::parity(const std::string& name) const {
    auto it = parities.find(name);
    return it == parities.end() ? ParitySpec{} : it->second;
}

double SelfSimilarAnsatz::error_modulus_or_default(double t) const {
    if (error_modulus) return error_modulus(t);
    const double gap = std::max(T0 - t, 1e-300);
    return gap / std::log(1.0 / std::min(gap, 0.5));
}

const char* RegimeClass::name(Tag t) {
    switch (t) {
        case Tag::VelocityBlowup: return "velocity-blowup";
        case Tag::Supercritical: return "supercritical";
        case Tag::Critical: return "critical";
        case Tag::Subcritical: return "subcritical";
    }
    return "?";
}

RegimeClass classify_regime(double alpha, double beta) {
    if (alpha == 0.0 || alpha >= 1.0 || !std::isfinite(alpha))
        throw InputError("classify_regime: alpha must be nonzero and < 1, got " +
                         std::to_string(alpha));
    if (alpha > 0.0) return {RegimeClass::Tag::VelocityBlowup, 0.0};
    const double disc = -2.0 * beta / alpha + 1.0 / alpha - 1.0;
    if (disc > 0.0) return {RegimeClass::Tag::Supercritical, disc};
    if (disc < 0.0) return {RegimeClass::Tag::Subcritical, disc};
    return {RegimeClass::Tag::Critical, disc};
}

std::vector<FamilyMember> build_scaled_family(const SelfSimilarAnsatz& ansatz,
                                              const std::vector<double>& Qs,
                                              FamilyVariant variant, const Grid2D& window,
                                              const std::vector<double>& t_tilde) {
    const double a = ansatz.alpha, b = ansatz.beta;
    if (t_tilde.empty()) throw InputError("build_scaled_family: empty time window");
    const Profile* theta = nullptr;
    const Profile* vr = nullptr;
    const Profile* v3 = nullptr;
    if (variant == FamilyVariant::SwirlLead || variant == FamilyVariant::MeridianLead)
        theta = &ansatz.profile("theta");
    else if (ansatz.has("theta"))
        theta = &ansatz.profiles.at("theta");
    vr = &ansatz.profile("vr");
    v3 = &ansatz.profile("v3");

    std::vector<FamilyMember> out;
    for (const double Q : Qs) {
        if (!(Q > 0)) throw InputError("build_scaled_family: Q must be positive");
        FamilyMember fm;
        fm.Q = Q;
        for (const double tt : t_tilde) {
            const double lam = std::pow(1.0 - tt, 1.0 - a);
            ScalarField2D ft(window), fr(window), f3(window), fh(window);
            for (int i = 0; i < window.n1(); ++i)
                for (int j = 0; j < window.n2(); ++j) {
                    double y1 = window.x1(i) / lam, y2 = window.x2(j) / lam;
                    if (variant == FamilyVariant::CenteredBoundary) {
                        y1 += 1.0;  // shifted profile U(y) = V(y + (1,0))
                    }
                    switch (variant) {
                        case FamilyVariant::SwirlLead: {
                            const double pth = (*theta)(y1, y2);
                            ft(i, j) = std::pow(1.0 - tt, -a) * pth;
                            const double fade = std::pow(Q, -b / a);
                            fr(i, j) = fade * std::pow(1.0 - tt, -(a - b)) * (*vr)(y1, y2);
                            f3(i, j) = fade * std::pow(1.0 - tt, -(a - b)) * (*v3)(y1, y2);
                            break;
                        }
                        case FamilyVariant::MeridianLead: {
                            const double grow = std::pow(Q, b / a);
                            const double pth = (*theta)(y1, y2);
                            ft(i, j) = grow * std::pow(1.0 - tt, -(a + b)) * pth;
                            fr(i, j) = std::pow(1.0 - tt, -a) * (*vr)(y1, y2);
                            f3(i, j) = std::pow(1.0 - tt, -a) * (*v3)(y1, y2);
                            fh(i, j) = std::pow(Q, -b / a) * ft(i, j);
                            break;
                        }
                        case FamilyVariant::CenteredBoundary: {
                            const double amp = std::pow(1.0 - tt, -a);
                            ft(i, j) = theta ? amp * (*theta)(y1, y2) : 0.0;
                            fr(i, j) = amp * (*vr)(y1, y2);
                            f3(i, j) = amp * (*v3)(y1, y2);
                            break;
                        }
                    }
                }
            fm.vtheta.push_back(tt, std::move(ft));
            fm.vr.push_back(tt, std::move(fr));
            fm.v3.push_back(tt, std::move(f3));
            if (variant == FamilyVariant::MeridianLead) fm.h.push_back(tt, std::move(fh));
        }
        out.push_back(std::move(fm));
    }
    return out;
}

namespace {

VorticityReport make_vorticity_report(const ScalarField2D& w_claimed,
                                      const ScalarField2D& w_computed, double accuracy,
                                      int i_base, int j_base) {
    const Grid2D& g = w_claimed.grid();
    VorticityReport rep;
    rep.i_base = i_base;
    rep.j_base = j_base;
    rep.mismatch = ScalarField2D(g);
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j) {
            const double m = std::fabs(w_claimed(i, j) - w_computed(i, j));
            rep.mismatch(i, j) = m;
            rep.max_mismatch = std::max(rep.max_mismatch, m);
            if (m > accuracy) rep.flagged.emplace_back(i_base + i, j_base + j);
        }
    return rep;
}

}  // namespace

VorticityReport vorticity_consistency(const VectorField2D& v, const ScalarField2D& w_claimed,
                                      double accuracy, int i_base, int j_base) {
    if (v.grid() != w_claimed.grid())
        throw InputError("vorticity_consistency: fields on different grids");
    return make_vorticity_report(w_claimed, curl2d(v), accuracy, i_base, j_base);
}

VorticityReport vorticity_consistency_from_derivatives(const ScalarField2D& w_claimed,
                                                       const ScalarField2D& d2_v1,
                                                       const ScalarField2D& d1_v2,
                                                       double accuracy, int i_base,
                                                       int j_base) {
    if (d2_v1.grid() != w_claimed.grid() || d1_v2.grid() != w_claimed.grid())
        throw InputError("vorticity_consistency: fields on different grids");
    ScalarField2D w(w_claimed.grid());
    for (std::size_t k = 0; k < w.values().size(); ++k)
        w.values()[k] = d2_v1.values()[k] - d1_v2.values()[k];
    return make_vorticity_report(w_claimed, w, accuracy, i_base, j_base);
}

namespace {

bool grid_reflection_symmetric(const Grid2D& g, int axis) {
    const double lo = axis == 1 ? g.min1() : g.min2();
    const double hi = axis == 1 ? g.max1() : g.max2();
    return std::fabs(lo + hi) <= 1e-12 * std::max(std::fabs(lo), std::fabs(hi));
}

}  // namespace

std::vector<ProfileCheck> symmetry_decay_check(const SelfSimilarAnsatz& ansatz) {
    std::vector<ProfileCheck> out;
    const Grid2D& g = ansatz.sample_grid;
    for (const auto& [name, prof] : ansatz.profiles) {
        if (!prof.present()) continue;
        ProfileCheck pc;
        pc.name = name;
        const Grid2D eg = prof.samples() ? prof.samples()->grid() : g;
        const ScalarField2D f = prof.sampled(eg);

        const ParitySpec ps = ansatz.parity(name);
        const bool sym1 = grid_reflection_symmetric(eg, 1);
        const bool sym2 = grid_reflection_symmetric(eg, 2);
        if ((ps.in_z1 != Parity::None && !sym1) || (ps.in_z2 != Parity::None && !sym2)) {
            pc.parity_note = "grid not reflection-symmetric; parity check skipped";
        } else {
            pc.parity_checked = ps.in_z1 != Parity::None || ps.in_z2 != Parity::None;
            for (int i = 0; i < eg.n1(); ++i)
                for (int j = 0; j < eg.n2(); ++j) {
                    if (ps.in_z1 != Parity::None) {
                        const double mirrored = f(eg.n1() - 1 - i, j);
                        const double want = ps.in_z1 == Parity::Odd ? -mirrored : mirrored;
                        pc.parity_defect_z1 =
                            std::max(pc.parity_defect_z1, std::fabs(f(i, j) - want));
                    }
                    if (ps.in_z2 != Parity::None) {
                        const double mirrored = f(i, eg.n2() - 1 - j);
                        const double want = ps.in_z2 == Parity::Odd ? -mirrored : mirrored;
                        pc.parity_defect_z2 =
                            std::max(pc.parity_defect_z2, std::fabs(f(i, j) - want));
                    }
                }
        }

        // Decay fit on the outer 25% annulus by least squares in log-log.
        auto target = ansatz.decay_exponents.find(name);
        if (target != ansatz.decay_exponents.end()) {
            const double R = std::min(std::max(std::fabs(eg.min1()), std::fabs(eg.max1())),
                                      std::max(std::fabs(eg.min2()), std::fabs(eg.max2())));
            double fmax = 0.0;
            for (int i = 0; i < eg.n1(); ++i)
                for (int j = 0; j < eg.n2(); ++j) {
                    const double r = std::hypot(eg.x1(i), eg.x2(j));
                    if (r >= 0.75 * R && r <= R) fmax = std::max(fmax, std::fabs(f(i, j)));
                }
            std::vector<double> lx, ly;
            for (int i = 0; i < eg.n1(); ++i)
                for (int j = 0; j < eg.n2(); ++j) {
                    const double r = std::hypot(eg.x1(i), eg.x2(j));
                    const double a = std::fabs(f(i, j));
                    if (r >= 0.75 * R && r <= R && a > 1e-8 * fmax) {
                        lx.push_back(std::log(r));
                        ly.push_back(std::log(a));
                    }
                }
            if (lx.size() >= 8) {
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t k = 0; k < lx.size(); ++k) {
                    sx += lx[k];
                    sy += ly[k];
                    sxx += lx[k] * lx[k];
                    sxy += lx[k] * ly[k];
                }
                const double n = static_cast<double>(lx.size());
                const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                const double icpt = (sy - slope * sx) / n;
                double rss = 0;
                for (std::size_t k = 0; k < lx.size(); ++k) {
                    const double e = ly[k] - (icpt + slope * lx[k]);
                    rss += e * e;
                }
                pc.decay_fitted = true;
                pc.decay_exponent = slope;
                pc.decay_target = target->second;
                pc.decay_residual = std::sqrt(rss / n);
            }
        }

        // Canonical sign conditions in the open first quadrant.
        const bool neg = name == "v1";
        const bool pos = name == "v2";
        const bool nonneg = name == "w";
        if (neg || pos || nonneg) {
            for (int i = 0; i < eg.n1(); ++i)
                for (int j = 0; j < eg.n2(); ++j) {
                    if (!(eg.x1(i) > 0.0 && eg.x2(j) > 0.0)) continue;
                    const double v = f(i, j);
                    const bool bad = (neg && v >= 0.0) || (pos && v <= 0.0) ||
                                     (nonneg && v < 0.0);
                    if (bad) pc.sign_violations.emplace_back(i, j);
                }
        }
        out.push_back(std::move(pc));
    }
    return out;
}

namespace {

double simpson_segment(const std::function<double(double)>& f, double a, double b, int n) {
    // Composite Simpson with n (even) panels; integrands here are smooth.
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

BaseOdeSolution base_ode_solve(const std::function<double(double)>& v1_base, double alpha,
                               double C, double z_lo, double z_hi, int n_steps,
                               std::optional<double> w0_override) {
    if (!(z_hi > z_lo)) throw InputError("base_ode_solve: need z_hi > z_lo");
    if (n_steps < 2) throw InputError("base_ode_solve: need at least 2 steps");
    auto drift = [&](double z) {
        return (v1_base ? v1_base(z) : 0.0) + (1.0 - alpha) * z;
    };
    // The transport coefficient must stay one-signed and nonzero.
    for (int k = 0; k <= 256; ++k) {
        const double z = z_lo + (z_hi - z_lo) * k / 256.0;
        if (!(drift(z) > 0.0))
            throw InputError("base_ode_solve: drift coefficient vanishes at z=" +
                             std::to_string(z) + " (singular transport)");
    }

    BaseOdeSolution out;
    const double p_h2 = -(1.0 + alpha) / (1.0 - alpha);
    const double p_w = -2.0 / (1.0 - alpha);
    const double mu = (1.0 + alpha) / (1.0 - alpha);

    if (!v1_base) {
        // Pure power branch: H2 = C z^{-(1+a)/(1-a)}, W = mu C z^{-2/(1-a)}.
        out.analytic_branch = true;
        out.h2_fn = [=](double z) { return C * std::pow(z, p_h2); };
        out.w_fn = [=](double z) { return mu * C * std::pow(z, p_w); };
        out.h2_deriv_fn = [=](double z) { return C * p_h2 * std::pow(z, p_h2 - 1.0); };
        out.w_deriv_fn = [=](double z) { return mu * C * p_w * std::pow(z, p_w - 1.0); };
    }

    const double h = (z_hi - z_lo) / n_steps;
    const double h2_0 = v1_base ? C * std::pow(z_lo, p_h2) : out.h2_fn(z_lo);
    const double w_0 = w0_override ? *w0_override
                                   : (v1_base ? mu * C * std::pow(z_lo, p_w) : out.w_fn(z_lo));

    // RK4 on (H2, W): H2' = -(1+a) H2 / drift, W' = (H2' - W) / drift.
    auto rhs = [&](double z, double h2, double w, double& dh2, double& dw) {
        const double a = drift(z);
        dh2 = -(1.0 + alpha) * h2 / a;
        dw = (dh2 - w) / a;
    };
    double z = z_lo, h2 = h2_0, w = w_0;
    double G = 0.0, I = 0.0;  // accumulated 1/drift and exp(-a G)/drift^2 integrals

    out.z.push_back(z);
    out.h2_rk4.push_back(h2);
    out.w_rk4.push_back(w);
    out.h2_closed.push_back(h2_0);
    out.w_closed.push_back(w_0);

    for (int k = 0; k < n_steps; ++k) {
        double k1h, k1w, k2h, k2w, k3h, k3w, k4h, k4w;
        rhs(z, h2, w, k1h, k1w);
        rhs(z + h / 2, h2 + h / 2 * k1h, w + h / 2 * k1w, k2h, k2w);
        rhs(z + h / 2, h2 + h / 2 * k2h, w + h / 2 * k2w, k3h, k3w);
        rhs(z + h, h2 + h * k3h, w + h * k3w, k4h, k4w);
        h2 += h / 6 * (k1h + 2 * k2h + 2 * k3h + k4h);
        w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
        const double z_next = z_lo + (k + 1) * h;

        double h2c, wc;
        if (!v1_base) {
            h2c = out.h2_fn(z_next);
            wc = out.w_fn(z_next);
        } else {
            // Exponential-integral closed form, accumulated per step.
            G += simpson_segment([&](double s) { return 1.0 / drift(s); }, z, z_next, 8);
            I += simpson_segment(
                [&](double s) {
                    const double Gs =
                        G - simpson_segment([&](double u) { return 1.0 / drift(u); }, s,
                                            z_next, 8);
                    const double a = drift(s);
                    return std::exp(-alpha * Gs) / (a * a);
                },
                z, z_next, 8);
            h2c = h2_0 * std::exp(-(1.0 + alpha) * G);
            wc = std::exp(-G) * (w_0 - (1.0 + alpha) * h2_0 * I);
        }
        z = z_next;
        out.z.push_back(z);
        out.h2_rk4.push_back(h2);
        out.w_rk4.push_back(w);
        out.h2_closed.push_back(h2c);
        out.w_closed.push_back(wc);
        const double scale_h = std::max(std::fabs(h2c), 1e-300);
        const double scale_w = std::max(std::fabs(wc), 1e-300);
        out.max_rel_discrepancy = std::max({out.max_rel_discrepancy,
                                            std::fabs(h2 - h2c) / scale_h,
                                            std::fabs(w - wc) / scale_w});
    }
    return out;
}

HomogeneityReport homogeneity_check(const Profile& theta, double degree, const Grid2D& grid) {
    HomogeneityReport rep;
    const double R = std::min({std::fabs(grid.min1()), std::fabs(grid.max1()),
                               std::fabs(grid.min2()), std::fabs(grid.max2())});
    if (!(R > 0)) throw InputError("homogeneity_check: grid must cover nested annuli");
    const std::vector<double> want = {0.5, 2.0};
    for (const double lam : want) {
        // keep both y and lam*y inside |y|_inf <= R
        if (R / 2 * lam <= R) rep.lambdas_used.push_back(lam);
    }
    if (rep.lambdas_used.size() < want.size())
        rep.note = "reduced lambda set: annuli partially outside the grid; ";

    double annulus_max = 0.0, inner_max = 0.0, global_max = 0.0;
    const int n = 128;
    for (int a = 0; a < n; ++a) {
        const double ang = 2 * M_PI * a / n;
        for (int rr = 0; rr < 8; ++rr) {
            const double rad = R / 4 + (R / 4) * rr / 7.0;
            const double y1 = rad * std::cos(ang), y2 = rad * std::sin(ang);
            const double base = theta(y1, y2);
            annulus_max = std::max(annulus_max, std::fabs(base));
            for (const double lam : rep.lambdas_used)
                rep.defect = std::max(rep.defect, std::fabs(theta(lam * y1, lam * y2) -
                                                            std::pow(lam, degree) * base));
        }
        const double rin = R / 20 + (R / 20) * (a % 7) / 7.0;
        inner_max = std::max(inner_max,
                             std::fabs(theta(rin * std::cos(ang), rin * std::sin(ang))));
    }
    global_max = std::max(annulus_max, inner_max);
    rep.scale = global_max;
    rep.nontrivial = global_max > SelfSimilarAnsatz::kNontrivialThreshold;
    rep.unbounded_near_origin = inner_max > 1.5 * annulus_max;
    if (degree < 0 && rep.nontrivial && !rep.unbounded_near_origin &&
        rep.defect <= 0.05 * global_max)
        rep.inconsistent = true;
    if (!rep.nontrivial) rep.note += "trivial profile";
    else if (rep.unbounded_near_origin) rep.note += "blow-up at the origin";
    return rep;
}

SelfSimilarAnsatz load_ansatz_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open ansatz manifest: " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("malformed ansatz manifest " + path + ": " + e.what());
    }
    SelfSimilarAnsatz a;
    if (!j.contains("alpha")) throw InputError(path + ": manifest missing field 'alpha'");
    a.alpha = j["alpha"].get<double>();
    a.beta = j.value("beta", 0.0);
    a.T0 = j.value("T0", 1.0);
    if (j.contains("profiles"))
        for (auto& [name, v] : j["profiles"].items()) {
            const std::string p = v.get<std::string>();
            const CsvFieldSet set = load_profile_csv(p);
            a.profiles[name] = Profile(set.columns.begin()->second);
        }
    auto parse_parity = [&](const std::string& s) {
        if (s == "odd") return Parity::Odd;
        if (s == "even") return Parity::Even;
        if (s == "none") return Parity::None;
        throw InputError(path + ": parity must be odd/even/none, got '" + s + "'");
    };
    if (j.contains("parities"))
        for (auto& [name, v] : j["parities"].items()) {
            ParitySpec ps;
            if (v.contains("z1")) ps.in_z1 = parse_parity(v["z1"].get<std::string>());
            if (v.contains("z2")) ps.in_z2 = parse_parity(v["z2"].get<std::string>());
            a.parities[name] = ps;
        }
    if (j.contains("decay_exponents"))
        for (auto& [name, v] : j["decay_exponents"].items())
            a.decay_exponents[name] = v.get<double>();
    if (j.contains("sample_grid")) {
        auto& sg = j["sample_grid"];
        a.sample_grid = Grid2D(sg["min1"].get<double>(), sg["max1"].get<double>(),
                               sg["min2"].get<double>(), sg["max2"].get<double>(),
                               sg["n1"].get<int>(), sg["n2"].get<int>());
    }
    return a;
}

}  // namespace vlab
