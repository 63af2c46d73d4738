#include "vlab/poisson.hpp"

#include <algorithm>
#include <cmath>

namespace vlab {

namespace {

struct Stencil {
    // Coefficients of the row equation  c_w*phi_W + c_e*phi_E + c_s*phi_S
    // + c_n*phi_N + c_c*phi_C = rhs  (S/N along the periodic axis 2).
    std::vector<double> cw, ce, cc;  // per axis-1 row
    double cs = 0, cn = 0;
};

Stencil build_stencil(const Grid2D& g, bool dirichlet, const std::vector<double>& w) {
    const int n1 = g.n1();
    const double h1 = g.h1(), h2 = g.h2();
    Stencil st;
    st.cw.assign(n1, 0.0);
    st.ce.assign(n1, 0.0);
    st.cc.assign(n1, 0.0);
    st.cs = 1.0 / (h2 * h2);
    st.cn = 1.0 / (h2 * h2);
    auto wt = [&](double i_half) {
        if (w.empty()) return 1.0;
        const int lo = static_cast<int>(std::floor(i_half));
        return 0.5 * (w[std::clamp(lo, 0, n1 - 1)] + w[std::clamp(lo + 1, 0, n1 - 1)]);
    };
    auto wc = [&](int i) { return w.empty() ? 1.0 : w[i]; };
    for (int i = 0; i < n1; ++i) {
        if (i > 0 && i < n1 - 1) {
            st.cw[i] = wt(i - 1) / (h1 * h1 * wc(i));
            st.ce[i] = wt(i) / (h1 * h1 * wc(i));
        } else if (!dirichlet) {
            // Flux-free half-cell rows at the walls.
            if (i == 0)
                st.ce[i] = 2.0 * wt(0) / (h1 * h1 * wc(0));
            else
                st.cw[i] = 2.0 * wt(n1 - 2) / (h1 * h1 * wc(n1 - 1));
        }
        st.cc[i] = -(st.cw[i] + st.ce[i] + st.cs + st.cn);
    }
    return st;
}

double residual_max(const ScalarField2D& phi, const ScalarField2D& b, const Stencil& st,
                    int i_lo, int i_hi, int period, int n1) {
    double res = 0.0;
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = 0; j < period; ++j) {
            const int jm = j == 0 ? period - 1 : j - 1;
            const int jp = j == period - 1 ? 0 : j + 1;
            const double lv = (i > 0 ? st.cw[i] * phi(i - 1, j) : 0.0) +
                              (i < n1 - 1 ? st.ce[i] * phi(i + 1, j) : 0.0) +
                              st.cs * phi(i, jm) + st.cn * phi(i, jp) + st.cc[i] * phi(i, j);
            res = std::max(res, std::fabs(lv - b(i, j)));
        }
    return res;
}

}  // namespace

PoissonResult solve_poisson_wall1_periodic2(const ScalarField2D& rhs, bool dirichlet,
                                            const std::vector<double>& wall_lo,
                                            const std::vector<double>& wall_hi,
                                            const std::vector<double>& weight1,
                                            const PoissonOptions& opt,
                                            const ScalarField2D* warm_start) {
    const Grid2D& g = rhs.grid();
    const int n1 = g.n1(), n2 = g.n2();
    const int period = n2 - 1;
    const Stencil st = build_stencil(g, dirichlet, weight1);

    ScalarField2D b = rhs;
    ScalarField2D phi = warm_start && warm_start->grid() == g ? *warm_start : ScalarField2D(g, 0.0);

    // Volume weights for the singular Neumann problem (half cells at walls).
    std::vector<double> vol(n1, 1.0);
    if (!dirichlet) {
        for (int i = 0; i < n1; ++i) {
            vol[i] = weight1.empty() ? 1.0 : weight1[i];
            if (i == 0 || i == n1 - 1) vol[i] *= 0.5;
        }
        double s = 0, sw = 0;
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < period; ++j) {
                s += vol[i] * b(i, j);
                sw += vol[i];
            }
        const double shift = s / sw;
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) b(i, j) -= shift;
    } else {
        if (static_cast<int>(wall_lo.size()) != n2 || static_cast<int>(wall_hi.size()) != n2)
            throw InputError("poisson: Dirichlet wall value arrays must have n2 entries");
        for (int j = 0; j < n2; ++j) {
            phi(0, j) = wall_lo[j];
            phi(n1 - 1, j) = wall_hi[j];
        }
    }

    double bscale = b.max_abs();
    if (dirichlet) {
        double wmax = 0;
        for (double v : wall_lo) wmax = std::max(wmax, std::fabs(v));
        for (double v : wall_hi) wmax = std::max(wmax, std::fabs(v));
        bscale = std::max(bscale, wmax / (g.h1() * g.h1()));
    }
    PoissonResult out{phi, 0.0, 0, true};
    if (bscale == 0.0) {
        out.solution = ScalarField2D(g, 0.0);
        if (dirichlet)
            for (int j = 0; j < n2; ++j) {
                out.solution(0, j) = wall_lo[j];
                out.solution(n1 - 1, j) = wall_hi[j];
            }
        return out;
    }

    double omega = opt.omega;
    if (omega <= 0.0) {
        const double rho = std::cos(M_PI / std::max(n1, n2));
        omega = 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
        omega = std::clamp(omega, 1.0, 1.97);
    }

    const int i_lo = dirichlet ? 1 : 0;
    const int i_hi = dirichlet ? n1 - 2 : n1 - 1;
    const int cap = opt.sweeps_per_node_cap * std::max(n1, n2);

    auto wrap = [&](int j) {
        if (j < 0) return j + period;
        if (j >= period) return j - period;
        return j;
    };

    // Lexicographic SOR. Constants are fixed points of the sweep, so the
    // Neumann nullspace needs anchoring only once at the end.
    double res = 0.0;
    double* p = phi.values().data();
    const double* bb = b.values().data();
    const double cs = st.cs, cn = st.cn;
    for (int sweep = 1; sweep <= cap; ++sweep) {
        for (int i = i_lo; i <= i_hi; ++i) {
            const double cwi = st.cw[i], cei = st.ce[i];
            const double inv_cc = 1.0 / st.cc[i];
            double* row = p + static_cast<std::size_t>(i) * n2;
            const double* rw = i > 0 ? row - n2 : nullptr;
            const double* re = i < n1 - 1 ? row + n2 : nullptr;
            const double* brow = bb + static_cast<std::size_t>(i) * n2;
            for (int j = 0; j < period; ++j) {
                const int jm = j == 0 ? period - 1 : j - 1;
                const int jp = j == period - 1 ? 0 : j + 1;
                const double nb = (rw ? cwi * rw[j] : 0.0) + (re ? cei * re[j] : 0.0) +
                                  cs * row[jm] + cn * row[jp];
                const double gs = (brow[j] - nb) * inv_cc;
                row[j] += omega * (gs - row[j]);
            }
        }
        out.sweeps = sweep;

        if (sweep % 16 == 0 || sweep == cap) {
            res = residual_max(phi, b, st, i_lo, i_hi, period, n1) / bscale;
            if (res <= opt.target_tol) break;
        }
    }
    // Authoritative residual, also covering a zero-sweep cap.
    res = residual_max(phi, b, st, i_lo, i_hi, period, n1) / bscale;
    for (int i = 0; i < n1; ++i) phi(i, n2 - 1) = phi(i, 0);
    if (!dirichlet) {
        double s = 0, sw = 0;
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < period; ++j) {
                s += vol[i] * phi(i, j);
                sw += vol[i];
            }
        const double mean = s / sw;
        for (double& v : phi.values()) v -= mean;
    }
    out.solution = phi;
    out.residual = res;
    out.converged = res <= opt.accept_tol;
    return out;
}

}  // namespace vlab
