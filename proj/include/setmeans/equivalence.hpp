#ifndef SETMEANS_EQUIVALENCE_HPP
#define SETMEANS_EQUIVALENCE_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "setmeans/mean.hpp"
#include "setmeans/measure.hpp"
#include "setmeans/point_set.hpp"

namespace setmeans {

/// Disjoint blocks covering the space. Blocks are ordered by their smallest
/// member so the partition has a canonical presentation.
struct Partition {
    SpacePtr space;
    std::vector<PointSet> blocks;

    std::size_t block_of(std::size_t x) const {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (blocks[b].contains(x)) return b;
        return blocks.size();
    }
};

/// Groups points whose distance vectors agree on the support of mu, within
/// tol per coordinate. On a finite space this relation is exactly "points
/// indistinguishable through distances to mu-mass": two points in a common
/// block have equal Frechet functional values under every measure carried by
/// supp(mu).
inline Partition equivalence_classes(const DiscreteMeasure& mu, double tol = 1e-12) {
    const MetricSpace& X = *mu.space();
    const std::vector<std::size_t> supp = mu.support().indices();
    const std::size_t n = X.size();

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool same = true;
            for (std::size_t s : supp)
                if (std::abs(X.dist(i, s) - X.dist(j, s)) > tol) { same = false; break; }
            if (same) parent[find(j)] = find(i);
        }

    std::vector<std::vector<std::size_t>> grouped(n);
    for (std::size_t i = 0; i < n; ++i) grouped[find(i)].push_back(i);

    Partition part;
    part.space = mu.space();
    for (std::size_t r = 0; r < n; ++r)
        if (!grouped[r].empty()) part.blocks.emplace_back(mu.space(), std::move(grouped[r]));
    return part;
}

/// Whether the (restricted) mean set of mu is exactly one equivalence class.
/// On finite spaces this is necessary and sufficient for the empirical mean
/// sets to converge to the population mean set in the Hausdorff metric, so
/// the checker predicts when the plain plug-in estimate is trustworthy.
struct HypothesisCheck {
    bool holds = false;
    std::optional<PointSet> witness_class;
    FrechetResult mean;
    Partition partition;
};

inline HypothesisCheck t2_slln_hypothesis(const DiscreteMeasure& mu, double p, bool restricted) {
    HypothesisCheck check;
    check.mean = restricted ? medoid(mu, p) : frechet_mean(mu, p);
    check.partition = equivalence_classes(mu);
    for (const PointSet& block : check.partition.blocks)
        if (block == check.mean.argmin) {
            check.holds = true;
            check.witness_class = block;
            break;
        }
    return check;
}

} // namespace setmeans

#endif
