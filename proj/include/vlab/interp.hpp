#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vlab/grid.hpp"

namespace vlab {

/// Cubic Lagrange interpolation through 4 equally spaced samples.
/// s is the offset from the second sample in units of the spacing, s in [0,1]
/// for interior cells. Reproduces sample values exactly at s = -1, 0, 1, 2.
inline double cubic4(double fm1, double f0, double f1, double f2, double s) {
    const double a = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double b = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double c = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double d = (s + 1.0) * s * (s - 1.0) / 6.0;
    return a * fm1 + b * f0 + c * f1 + d * f2;
}

/// Bicubic sampler over a ScalarField2D. Either axis may be periodic (period
/// max-min with coincident first/last node values). Non-periodic edges use
/// shifted 4-point stencils, staying fourth-order inside the domain. With
/// clamp_to_local_range the result is limited to the 4x4 stencil's data range
/// (quasi-monotone transport: grid extrema cannot grow).
class BicubicSampler {
public:
    explicit BicubicSampler(const ScalarField2D& f, bool periodic1 = false,
                            bool periodic2 = false, bool clamp_to_local_range = false)
        : f_(&f), p1_(periodic1), p2_(periodic2), clamp_(clamp_to_local_range) {}

    double operator()(double x, double y) const {
        const Grid2D& g = f_->grid();
        std::array<int, 4> ii{}, jj{};
        double t1, t2;
        locate(( x - g.min1()) / g.h1(), g.n1(), p1_, ii, t1);
        locate(( y - g.min2()) / g.h2(), g.n2(), p2_, jj, t2);

        double lo = 0, hi = 0;
        if (clamp_) {
            lo = std::numeric_limits<double>::infinity();
            hi = -lo;
        }
        std::array<double, 4> col{};
        for (int k = 0; k < 4; ++k) {
            const double a = (*f_)(ii[k], jj[0]);
            const double b = (*f_)(ii[k], jj[1]);
            const double c = (*f_)(ii[k], jj[2]);
            const double d = (*f_)(ii[k], jj[3]);
            if (clamp_) {
                lo = std::min({lo, a, b, c, d});
                hi = std::max({hi, a, b, c, d});
            }
            col[k] = cubic4(a, b, c, d, t2);
        }
        double r = cubic4(col[0], col[1], col[2], col[3], t1);
        if (clamp_) r = std::clamp(r, lo, hi);
        return r;
    }

private:
    static void locate(double u, int n, bool periodic, std::array<int, 4>& idx, double& t) {
        if (periodic) {
            const int period = n - 1;
            u = std::fmod(u, static_cast<double>(period));
            if (u < 0) u += period;
            int i0 = static_cast<int>(std::floor(u));
            i0 = std::min(i0, period - 1);
            t = u - i0;
            for (int k = 0; k < 4; ++k) {
                int i = i0 - 1 + k;
                i %= period;
                if (i < 0) i += period;
                idx[k] = i;
            }
        } else {
            int i0 = static_cast<int>(std::floor(u));
            i0 = std::clamp(i0, 0, n - 2);
            double s = std::clamp(u - i0, -0.5, 1.5);
            const int ib = std::clamp(i0 - 1, 0, n - 4);
            t = s + (i0 - 1 - ib);
            for (int k = 0; k < 4; ++k) idx[k] = ib + k;
        }
    }

    const ScalarField2D* f_;
    bool p1_, p2_;
    bool clamp_;
};

/// Bilinear sampler (used where only second-order evaluation is needed).
class BilinearSampler {
public:
    explicit BilinearSampler(const ScalarField2D& f, bool periodic1 = false,
                             bool periodic2 = false)
        : f_(&f), p1_(periodic1), p2_(periodic2) {}

    double operator()(double x, double y) const {
        const Grid2D& g = f_->grid();
        double u = (x - g.min1()) / g.h1();
        double v = (y - g.min2()) / g.h2();
        if (p1_) {
            const double period = g.n1() - 1;
            u = std::fmod(u, period);
            if (u < 0) u += period;
        }
        if (p2_) {
            const double period = g.n2() - 1;
            v = std::fmod(v, period);
            if (v < 0) v += period;
        }
        const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, g.n1() - 2);
        const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, g.n2() - 2);
        const double a = u - i0, b = v - j0;
        return (1 - a) * (1 - b) * (*f_)(i0, j0) + a * (1 - b) * (*f_)(i0 + 1, j0) +
               (1 - a) * b * (*f_)(i0, j0 + 1) + a * b * (*f_)(i0 + 1, j0 + 1);
    }

private:
    const ScalarField2D* f_;
    bool p1_, p2_;
};

}  // namespace vlab
