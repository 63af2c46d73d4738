#pragma once

#include "vlab/grid.hpp"

namespace vlab {

/// d/dx1 with central differences inside and second-order one-sided stencils
/// at the first/last rows. periodic wraps instead (first/last nodes coincide).
inline ScalarField2D d_dx1(const ScalarField2D& f, bool periodic = false) {
    const Grid2D& g = f.grid();
    ScalarField2D out(g);
    const int n1 = g.n1(), n2 = g.n2();
    const double h = g.h1();
    for (int j = 0; j < n2; ++j) {
        if (periodic) {
            const int p = n1 - 1;
            for (int i = 0; i < n1; ++i) {
                const int im = (i - 1 + p) % p;
                const int ip = (i + 1) % p;
                out(i, j) = (f(ip, j) - f(im, j)) / (2 * h);
            }
        } else {
            out(0, j) = (-3 * f(0, j) + 4 * f(1, j) - f(2, j)) / (2 * h);
            for (int i = 1; i < n1 - 1; ++i)
                out(i, j) = (f(i + 1, j) - f(i - 1, j)) / (2 * h);
            out(n1 - 1, j) = (3 * f(n1 - 1, j) - 4 * f(n1 - 2, j) + f(n1 - 3, j)) / (2 * h);
        }
    }
    return out;
}

/// d/dx2, same stencil policy as d_dx1.
inline ScalarField2D d_dx2(const ScalarField2D& f, bool periodic = false) {
    const Grid2D& g = f.grid();
    ScalarField2D out(g);
    const int n1 = g.n1(), n2 = g.n2();
    const double h = g.h2();
    for (int i = 0; i < n1; ++i) {
        if (periodic) {
            const int p = n2 - 1;
            for (int j = 0; j < n2; ++j) {
                const int jm = (j - 1 + p) % p;
                const int jp = (j + 1) % p;
                out(i, j) = (f(i, jp) - f(i, jm)) / (2 * h);
            }
        } else {
            out(i, 0) = (-3 * f(i, 0) + 4 * f(i, 1) - f(i, 2)) / (2 * h);
            for (int j = 1; j < n2 - 1; ++j)
                out(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2 * h);
            out(i, n2 - 1) = (3 * f(i, n2 - 1) - 4 * f(i, n2 - 2) + f(i, n2 - 3)) / (2 * h);
        }
    }
    return out;
}

/// Scalar vorticity w = d2 v1 - d1 v2 (sign fixed repo-wide; the stream
/// function convention below is Lap(psi) = -w for v = (-d2 psi, d1 psi)).
inline ScalarField2D curl2d(const VectorField2D& v, bool periodic2 = false) {
    v.require_finite("curl2d input");
    const ScalarField2D a = d_dx2(v.comp1(), periodic2);
    const ScalarField2D b = d_dx1(v.comp2(), false);
    ScalarField2D out(v.grid());
    for (std::size_t k = 0; k < out.values().size(); ++k)
        out.values()[k] = a.values()[k] - b.values()[k];
    return out;
}

/// v = (-d2 f, d1 f); with a strictly positive weight w the components are
/// divided by w, so that d1(w v1) + d2(w v2) = 0 analytically.
inline VectorField2D perp_gradient(const ScalarField2D& f,
                                   const ScalarField2D* weight = nullptr,
                                   bool periodic2 = false) {
    f.require_finite("perp_gradient input");
    ScalarField2D c1 = d_dx2(f, periodic2);
    ScalarField2D c2 = d_dx1(f, false);
    for (double& x : c1.values()) x = -x;
    if (weight) {
        if (weight->grid() != f.grid())
            throw InputError("perp_gradient: weight grid differs from field grid");
        for (int i = 0; i < f.grid().n1(); ++i)
            for (int j = 0; j < f.grid().n2(); ++j) {
                const double w = (*weight)(i, j);
                if (!(w > 0))
                    throw InputError("perp_gradient: weight not strictly positive at node (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
                c1(i, j) /= w;
                c2(i, j) /= w;
            }
    }
    return VectorField2D(std::move(c1), std::move(c2));
}

/// Discrete divergence d1 v1 + d2 v2; with a weight it is
/// (d1(w v1) + d2(w v2)) / w, matching the perp_gradient convention.
inline ScalarField2D divergence(const VectorField2D& v,
                                const ScalarField2D* weight = nullptr,
                                bool periodic2 = false) {
    const Grid2D& g = v.grid();
    ScalarField2D a = v.comp1(), b = v.comp2();
    if (weight) {
        for (int i = 0; i < g.n1(); ++i)
            for (int j = 0; j < g.n2(); ++j) {
                a(i, j) *= (*weight)(i, j);
                b(i, j) *= (*weight)(i, j);
            }
    }
    const ScalarField2D da = d_dx1(a, false);
    const ScalarField2D db = d_dx2(b, periodic2);
    ScalarField2D out(g);
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j) {
            double d = da(i, j) + db(i, j);
            if (weight) d /= (*weight)(i, j);
            out(i, j) = d;
        }
    return out;
}

/// Compact 5-point Laplacian (one-sided second-order rows at the edges are
/// not provided; edge nodes copy the nearest interior value's stencil result
/// only where callers ask for interior comparisons).
inline ScalarField2D laplacian_interior(const ScalarField2D& f) {
    const Grid2D& g = f.grid();
    ScalarField2D out(g, 0.0);
    const double h1 = g.h1(), h2 = g.h2();
    for (int i = 1; i < g.n1() - 1; ++i)
        for (int j = 1; j < g.n2() - 1; ++j)
            out(i, j) = (f(i + 1, j) - 2 * f(i, j) + f(i - 1, j)) / (h1 * h1) +
                        (f(i, j + 1) - 2 * f(i, j) + f(i, j - 1)) / (h2 * h2);
    return out;
}

}  // namespace vlab
