#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

/// Error thrown when an input violates a documented precondition.
/// The message names the offending field or node.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Uniform rectangular mesh on [min1,max1] x [min2,max2] with n1 x n2 nodes.
/// Spacing is h = (max-min)/(n-1) exactly; nodes include both endpoints.
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(double min1, double max1, double min2, double max2, int n1, int n2)
        : min1_(min1), max1_(max1), min2_(min2), max2_(max2), n1_(n1), n2_(n2) {
        if (n1 < 3 || n2 < 3)
            throw InputError("Grid2D: node counts must be >= 3, got n1=" +
                             std::to_string(n1) + " n2=" + std::to_string(n2));
        if (!(max1 > min1) || !(max2 > min2))
            throw InputError("Grid2D: bounds must satisfy max > min per axis");
        if (!std::isfinite(min1) || !std::isfinite(max1) ||
            !std::isfinite(min2) || !std::isfinite(max2))
            throw InputError("Grid2D: non-finite bounds");
        h1_ = (max1_ - min1_) / static_cast<double>(n1_ - 1);
        h2_ = (max2_ - min2_) / static_cast<double>(n2_ - 1);
    }

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    double min1() const { return min1_; }
    double max1() const { return max1_; }
    double min2() const { return min2_; }
    double max2() const { return max2_; }
    double h1() const { return h1_; }
    double h2() const { return h2_; }
    std::size_t size() const { return static_cast<std::size_t>(n1_) * n2_; }

    double x1(int i) const { return min1_ + h1_ * i; }
    double x2(int j) const { return min2_ + h2_ * j; }

    // Row-major in i then j: index = i*n2 + j.
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * n2_ + j;
    }

    bool contains(double x, double y, double pad = 0.0) const {
        return x >= min1_ - pad && x <= max1_ + pad && y >= min2_ - pad && y <= max2_ + pad;
    }

    bool operator==(const Grid2D& o) const {
        return n1_ == o.n1_ && n2_ == o.n2_ && min1_ == o.min1_ && max1_ == o.max1_ &&
               min2_ == o.min2_ && max2_ == o.max2_;
    }
    bool operator!=(const Grid2D& o) const { return !(*this == o); }

private:
    double min1_ = 0, max1_ = 1, min2_ = 0, max2_ = 1;
    int n1_ = 0, n2_ = 0;
    double h1_ = 0, h2_ = 0;
};

/// Scalar samples on a Grid2D, one value per node, all finite.
class ScalarField2D {
public:
    ScalarField2D() = default;
    explicit ScalarField2D(const Grid2D& g, double fill = 0.0)
        : grid_(g), v_(g.size(), fill) {}
    ScalarField2D(const Grid2D& g, std::vector<double> values)
        : grid_(g), v_(std::move(values)) {
        if (v_.size() != g.size())
            throw InputError("ScalarField2D: value count " + std::to_string(v_.size()) +
                             " != grid size " + std::to_string(g.size()));
    }

    template <class F>
    static ScalarField2D sample(const Grid2D& g, F&& f) {
        ScalarField2D out(g);
        for (int i = 0; i < g.n1(); ++i)
            for (int j = 0; j < g.n2(); ++j)
                out(i, j) = f(g.x1(i), g.x2(j));
        return out;
    }

    const Grid2D& grid() const { return grid_; }
    double& operator()(int i, int j) { return v_[grid_.idx(i, j)]; }
    double operator()(int i, int j) const { return v_[grid_.idx(i, j)]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    /// Throws naming the first non-finite node, if any.
    void require_finite(const std::string& what) const {
        for (int i = 0; i < grid_.n1(); ++i)
            for (int j = 0; j < grid_.n2(); ++j)
                if (!std::isfinite((*this)(i, j)))
                    throw InputError(what + ": non-finite value at node (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
    }

    double max_abs() const {
        double m = 0;
        for (double x : v_) m = std::max(m, std::fabs(x));
        return m;
    }

private:
    Grid2D grid_;
    std::vector<double> v_;
};

/// Two scalar components on a shared Grid2D.
class VectorField2D {
public:
    VectorField2D() = default;
    explicit VectorField2D(const Grid2D& g) : c1_(g), c2_(g) {}
    VectorField2D(ScalarField2D c1, ScalarField2D c2)
        : c1_(std::move(c1)), c2_(std::move(c2)) {
        if (c1_.grid() != c2_.grid())
            throw InputError("VectorField2D: components on different grids");
    }

    template <class F1, class F2>
    static VectorField2D sample(const Grid2D& g, F1&& f1, F2&& f2) {
        return VectorField2D(ScalarField2D::sample(g, f1), ScalarField2D::sample(g, f2));
    }

    const Grid2D& grid() const { return c1_.grid(); }
    ScalarField2D& comp1() { return c1_; }
    ScalarField2D& comp2() { return c2_; }
    const ScalarField2D& comp1() const { return c1_; }
    const ScalarField2D& comp2() const { return c2_; }

    double magnitude(int i, int j) const {
        return std::hypot(c1_(i, j), c2_(i, j));
    }

    void require_finite(const std::string& what) const {
        c1_.require_finite(what + " (component 1)");
        c2_.require_finite(what + " (component 2)");
    }

private:
    ScalarField2D c1_, c2_;
};

/// Snapshots on one shared grid at strictly increasing times.
template <class FieldT>
class TimeSeriesT {
public:
    TimeSeriesT() = default;

    void push_back(double t, FieldT f) {
        if (!snaps_.empty()) {
            if (f.grid() != snaps_.front().grid())
                throw InputError("TimeSeries: snapshot grid differs from series grid");
            if (!(t > times_.back()))
                throw InputError("TimeSeries: times must be strictly increasing");
        }
        times_.push_back(t);
        snaps_.push_back(std::move(f));
    }

    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    double time(std::size_t k) const { return times_[k]; }
    const std::vector<double>& times() const { return times_; }
    const FieldT& at(std::size_t k) const { return snaps_[k]; }
    FieldT& at(std::size_t k) { return snaps_[k]; }
    const Grid2D& grid() const {
        if (snaps_.empty()) throw InputError("TimeSeries: empty series has no grid");
        return snaps_.front().grid();
    }

private:
    std::vector<double> times_;
    std::vector<FieldT> snaps_;
};

using TimeSeries = TimeSeriesT<ScalarField2D>;
using VectorTimeSeries = TimeSeriesT<VectorField2D>;

}  // namespace vlab
