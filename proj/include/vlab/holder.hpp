#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab {

/// Discrete Hoelder estimate with the parabolic distance |x-y| + sqrt(|t-s|).
/// The seminorm is a lower bound computed over a pair sample; it equals the
/// all-pairs value when the budget covers every pair.
struct HolderEstimate {
    double exponent = 0.5;
    double sup_norm = 0.0;
    double seminorm = 0.0;
    std::size_t pairs_used = 0;
    bool all_pairs = false;
};

namespace detail {

/// splitmix64; the seed is derived from the grid shape so repeated runs see
/// the same pair sample.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

inline HolderEstimate holder_norm(const TimeSeries& series, double gamma,
                                  std::size_t pair_budget = 200000) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InputError("holder_norm: exponent gamma must lie in (0,1), got " +
                         std::to_string(gamma));
    if (series.empty()) throw InputError("holder_norm: empty series");
    const Grid2D& g = series.grid();
    const int n1 = g.n1(), n2 = g.n2();
    const std::size_t nt = series.size();
    const std::size_t total = static_cast<std::size_t>(n1) * n2 * nt;
    if (total < 2) throw InputError("holder_norm: need at least 2 nodes");

    HolderEstimate est;
    est.exponent = gamma;
    for (std::size_t k = 0; k < nt; ++k)
        est.sup_norm = std::max(est.sup_norm, series.at(k).max_abs());

    auto node = [&](std::size_t flat, int& i, int& j, std::size_t& k) {
        k = flat / (static_cast<std::size_t>(n1) * n2);
        const std::size_t rem = flat % (static_cast<std::size_t>(n1) * n2);
        i = static_cast<int>(rem / n2);
        j = static_cast<int>(rem % n2);
    };
    auto ratio = [&](std::size_t fa, std::size_t fb) {
        int ia, ja, ib, jb;
        std::size_t ka, kb;
        node(fa, ia, ja, ka);
        node(fb, ib, jb, kb);
        const double du = series.at(ka)(ia, ja) - series.at(kb)(ib, jb);
        const double dx = g.x1(ia) - g.x1(ib);
        const double dy = g.x2(ja) - g.x2(jb);
        const double dist = std::hypot(dx, dy) +
                            std::sqrt(std::fabs(series.time(ka) - series.time(kb)));
        if (dist == 0.0) return 0.0;
        return std::fabs(du) / std::pow(dist, gamma);
    };

    const std::size_t all = total * (total - 1) / 2;
    if (all <= pair_budget) {
        for (std::size_t a = 0; a < total; ++a)
            for (std::size_t b = a + 1; b < total; ++b)
                est.seminorm = std::max(est.seminorm, ratio(a, b));
        est.pairs_used = all;
        est.all_pairs = true;
        return est;
    }

    // Stratified backbone: all pairs among a coarse sub-lattice (includes the
    // domain corners), then a seeded random prefix up to the budget. A larger
    // budget extends the same sequence, so the estimate is monotone in it.
    std::vector<std::size_t> backbone;
    const int bs1 = std::max(1, (n1 - 1) / 4), bs2 = std::max(1, (n2 - 1) / 4);
    const std::size_t bst = std::max<std::size_t>(1, (nt - 1 > 0 ? (nt - 1) / 2 : 1));
    for (std::size_t k = 0; k < nt; k += bst)
        for (int i = 0; i < n1; i += bs1)
            for (int j = 0; j < n2; j += bs2)
                backbone.push_back((k * n1 + i) * n2 + j);
    std::size_t used = 0;
    for (std::size_t a = 0; a < backbone.size() && used < pair_budget; ++a)
        for (std::size_t b = a + 1; b < backbone.size() && used < pair_budget; ++b) {
            est.seminorm = std::max(est.seminorm, ratio(backbone[a], backbone[b]));
            ++used;
        }
    std::uint64_t seed = 0x243f6a8885a308d3ULL ^ (static_cast<std::uint64_t>(n1) << 40) ^
                         (static_cast<std::uint64_t>(n2) << 20) ^ nt;
    while (used < pair_budget) {
        const std::size_t a = detail::splitmix64(seed) % total;
        const std::size_t b = detail::splitmix64(seed) % total;
        if (a == b) continue;
        est.seminorm = std::max(est.seminorm, ratio(a, b));
        ++used;
    }
    est.pairs_used = used;
    est.all_pairs = false;
    return est;
}

}  // namespace vlab
