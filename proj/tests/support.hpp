// Shared helpers for the test suites: random instance generators and small
// fixed spaces. Everything is driven by the library Rng so test runs are
// reproducible from their seeds.

#ifndef SETMEANS_TESTS_SUPPORT_HPP
#define SETMEANS_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "setmeans/measure.hpp"
#include "setmeans/metric_space.hpp"
#include "setmeans/point_set.hpp"
#include "setmeans/rng.hpp"

namespace setmeans::tests {

/// Random valid metric: symmetric entries in [0.2, 1.2), then a
/// shortest-path completion, which enforces the triangle inequality while
/// keeping all off-diagonal distances positive.
inline SpacePtr random_space(Rng& rng, std::size_t n) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d[i][j] = d[j][i] = 0.2 + rng.next_unit();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return MetricSpace::from_matrix(std::move(d));
}

/// Random measure with full support (normalized exponential weights).
inline DiscreteMeasure random_measure(Rng& rng, const SpacePtr& space) {
    std::vector<double> w(space->size());
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.next_unit());
        total += x;
    }
    for (double& x : w) x /= total;
    return DiscreteMeasure(space, std::move(w));
}

/// Random measure whose support omits roughly `drop` of the points.
inline DiscreteMeasure random_sparse_measure(Rng& rng, const SpacePtr& space, double drop) {
    std::vector<double> w(space->size(), 0.0);
    double total = 0.0;
    for (double& x : w)
        if (rng.next_unit() >= drop) {
            x = -std::log(1.0 - rng.next_unit());
            total += x;
        }
    if (total == 0.0) {
        const auto i = static_cast<std::size_t>(rng.next_unit() * space->size());
        w[std::min(i, space->size() - 1)] = 1.0;
        total = 1.0;
    }
    for (double& x : w) x /= total;
    return DiscreteMeasure(space, std::move(w));
}

/// Random nonempty subset.
inline PointSet random_subset(Rng& rng, const SpacePtr& space) {
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < space->size(); ++i)
        if (rng.next_unit() < 0.5) pts.push_back(i);
    if (pts.empty()) pts.push_back(rng.next_u64() % space->size());
    return PointSet(space, std::move(pts));
}

/// Points {-1, 0, 1} with the distance inherited from the real line.
inline SpacePtr line_three() {
    return MetricSpace::from_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}},
                                    {"-1", "0", "1"});
}

} // namespace setmeans::tests

#endif
