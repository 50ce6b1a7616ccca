#ifndef SETMEANS_LDP_HPP
#define SETMEANS_LDP_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "setmeans/mean.hpp"
#include "setmeans/measure.hpp"
#include "setmeans/point_set.hpp"
#include "setmeans/rng.hpp"
#include "setmeans/sampling.hpp"
#include "setmeans/set_limits.hpp"

namespace setmeans {

/// Lattice of probability vectors with weights that are multiples of 1/h.
/// Materialized up front: enumeration order is lexicographic in the count
/// vectors, which fixes a total order used for deterministic tie-breaking.
class SimplexGrid {
public:
    SimplexGrid(std::size_t dimension, std::size_t resolution)
        : m_(dimension), h_(resolution) {
        if (dimension < 1) throw std::invalid_argument("SimplexGrid: dimension must be >= 1");
        if (resolution < 1) throw std::invalid_argument("SimplexGrid: resolution must be >= 1");
        std::vector<std::uint32_t> current(dimension, 0);
        emit(current, 0, resolution);
    }

    std::size_t size() const { return lattice_.size(); }
    std::size_t dimension() const { return m_; }
    std::size_t resolution() const { return h_; }
    const std::vector<std::uint32_t>& counts(std::size_t i) const { return lattice_[i]; }

    DiscreteMeasure measure(std::size_t i, const SpacePtr& space) const {
        std::vector<double> w(m_);
        for (std::size_t k = 0; k < m_; ++k)
            w[k] = static_cast<double>(lattice_[i][k]) / static_cast<double>(h_);
        return DiscreteMeasure(space, std::move(w));
    }

    /// C(h+m-1, m-1) without enumerating.
    static std::size_t expected_size(std::size_t m, std::size_t h) {
        // binomial(h+m-1, m-1) with the smaller index as loop bound
        std::size_t k = m - 1;
        long double acc = 1.0L;
        for (std::size_t i = 1; i <= k; ++i)
            acc = acc * static_cast<long double>(h + i) / static_cast<long double>(i);
        return static_cast<std::size_t>(acc + 0.5L);
    }

private:
    void emit(std::vector<std::uint32_t>& current, std::size_t pos, std::size_t remaining) {
        if (pos + 1 == m_) {
            current[pos] = static_cast<std::uint32_t>(remaining);
            lattice_.push_back(current);
            return;
        }
        for (std::size_t k = 0; k <= remaining; ++k) {
            current[pos] = static_cast<std::uint32_t>(k);
            emit(current, pos + 1, remaining - k);
        }
    }

    std::size_t m_;
    std::size_t h_;
    std::vector<std::vector<std::uint32_t>> lattice_;
};

/// Entropy cost of forcing the mean set to cover C: the minimum of H(nu|mu)
/// over lattice measures nu whose (unrestricted) mean set contains every
/// point of C. Exhaustive over the lattice, so the value is exact on the
/// grid and an upper bound on the true infimum; refining h can only lower
/// it. Infeasible-on-grid is reported as +infinity with no witness.
struct RateFunctionResult {
    double value = std::numeric_limits<double>::infinity();
    std::optional<DiscreteMeasure> witness;
    std::size_t grid_size = 0;
    std::size_t feasible_count = 0;
    bool finite() const { return std::isfinite(value); }
};

inline RateFunctionResult rate_function(const PointSet& C, const DiscreteMeasure& mu, double p,
                                        std::size_t resolution, unsigned threads = 1) {
    if (C.empty()) throw EmptySetError("rate_function: empty target set");
    if (C.space() != mu.space())
        throw std::invalid_argument("rate_function: set and measure live on different spaces");
    const SpacePtr& space = mu.space();
    SimplexGrid grid(space->size(), resolution);

    struct Best {
        double value = std::numeric_limits<double>::infinity();
        std::size_t index = SIZE_MAX;
        std::size_t feasible = 0;
    };

    const unsigned workers = std::max(1u, threads);
    std::vector<Best> partial(workers);
    detail::parallel_for_index(workers, workers, [&](std::size_t w) {
        Best best;
        for (std::size_t i = w; i < grid.size(); i += workers) {
            const DiscreteMeasure nu = grid.measure(i, space);
            const FrechetResult mean = frechet_mean(nu, p);
            if (!C.subset_of(mean.argmin)) continue;
            ++best.feasible;
            const double value = relative_entropy(nu, mu);
            if (value < best.value || (value == best.value && i < best.index)) {
                best.value = value;
                best.index = i;
            }
        }
        partial[w] = best;
    });

    // (value, lattice index) is a total order, so the reduction result does
    // not depend on the chunking above.
    Best overall;
    for (const Best& b : partial) {
        overall.feasible += b.feasible;
        if (b.value < overall.value || (b.value == overall.value && b.index < overall.index)) {
            overall.value = b.value;
            overall.index = b.index;
        }
    }

    RateFunctionResult result;
    result.grid_size = grid.size();
    result.feasible_count = overall.feasible;
    if (overall.index != SIZE_MAX && std::isfinite(overall.value)) {
        result.value = overall.value;
        result.witness = grid.measure(overall.index, space);
    }
    return result;
}

/// Monte Carlo estimate of log P(rho(F_p(empirical_n), F_p(mu)) >= eps) on a
/// grid of sample sizes, with the exact-zero estimates reported as censored
/// at log(1/reps) and excluded from the slope fit.
struct DecayRow {
    std::uint64_t n = 0;
    std::size_t hits = 0;
    double probability = 0.0;
    double log_probability = 0.0;  // censoring bound when censored
    double stderr_log = 0.0;       // delta-method se of log p, uncensored only
    bool censored = false;
};

struct DecayReport {
    double epsilon = 0.0;
    std::size_t reps = 0;
    std::vector<DecayRow> rows;
    std::optional<double> slope;   // least squares over uncensored rows
    bool slope_negative = false;   // meaningful when >= 3 uncensored rows
    std::size_t uncensored = 0;
};

inline DecayReport tail_decay_diagnostic(const DiscreteMeasure& mu, double p, double epsilon,
                                         const std::vector<std::uint64_t>& n_grid,
                                         std::size_t reps, std::uint64_t seed,
                                         unsigned threads = 1) {
    if (epsilon <= 0.0) throw std::invalid_argument("tail_decay: epsilon must be > 0");
    if (reps < 1) throw std::invalid_argument("tail_decay: reps must be at least 1");

    const SpacePtr& space = mu.space();
    const PointSet target = frechet_mean(mu, p).argmin;
    const PointSet everything = PointSet::full(space);
    const auto cdf = detail::cumulative(mu.weights());

    DecayReport report;
    report.epsilon = epsilon;
    report.reps = reps;
    report.rows.resize(n_grid.size());

    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        const std::uint64_t n = n_grid[g];
        std::vector<std::uint8_t> hit(reps, 0);
        detail::parallel_for_index(reps, threads, [&](std::size_t r) {
            // Independent stream per (n, replicate) pair.
            Rng rng(seed + g * reps + r);
            std::vector<std::uint64_t> counts(space->size(), 0);
            for (std::uint64_t i = 0; i < n; ++i) ++counts[detail::draw(cdf, mu.weights(), rng)];
            const FrechetResult mean =
                frechet_mean_from_counts(space, counts, n, everything, p);
            hit[r] = hausdorff_excess(mean.argmin, target) >= epsilon ? 1 : 0;
        });
        std::size_t hits = 0;
        for (auto h : hit) hits += h;

        DecayRow row;
        row.n = n;
        row.hits = hits;
        row.probability = static_cast<double>(hits) / static_cast<double>(reps);
        row.censored = hits == 0;
        if (row.censored) {
            row.log_probability = std::log(1.0 / static_cast<double>(reps));
        } else {
            row.log_probability = std::log(row.probability);
            row.stderr_log = std::sqrt(row.probability * (1.0 - row.probability) /
                                       static_cast<double>(reps)) /
                             row.probability;
            ++report.uncensored;
        }
        report.rows[g] = row;
    }

    std::vector<double> xs, ys;
    for (const DecayRow& row : report.rows)
        if (!row.censored) {
            xs.push_back(static_cast<double>(row.n));
            ys.push_back(row.log_probability);
        }
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
        mx /= xs.size();
        my /= ys.size();
        double num = 0, den = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        if (den > 0) {
            report.slope = num / den;
            report.slope_negative = report.uncensored >= 3 && *report.slope < 0.0;
        }
    }
    return report;
}

} // namespace setmeans

#endif
