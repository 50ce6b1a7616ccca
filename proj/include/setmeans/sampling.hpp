#ifndef SETMEANS_SAMPLING_HPP
#define SETMEANS_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "setmeans/mean.hpp"
#include "setmeans/measure.hpp"
#include "setmeans/point_set.hpp"
#include "setmeans/rng.hpp"
#include "setmeans/set_limits.hpp"

namespace setmeans {

namespace detail {

/// Cumulative weights for inverse-CDF sampling. Zero-weight points occupy
/// zero-length intervals and are never drawn.
inline std::vector<double> cumulative(const std::vector<double>& w) {
    std::vector<double> cdf(w.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        cdf[i] = acc;
    }
    return cdf;
}

inline std::size_t draw(const std::vector<double>& cdf, const std::vector<double>& w, Rng& rng) {
    const double u = rng.next_unit();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
        // u landed beyond the rounded total; fall back to the last point
        // with positive weight.
        for (std::size_t i = cdf.size(); i-- > 0;)
            if (w[i] > 0.0) return i;
        return cdf.size() - 1;
    }
    return static_cast<std::size_t>(it - cdf.begin());
}

} // namespace detail

/// i.i.d. sample of size n from mu, drawn by inverse CDF over the weight
/// vector. Deterministic given the seed.
inline std::vector<std::size_t> sample_iid(const DiscreteMeasure& mu, std::size_t n,
                                           std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_iid: n must be at least 1");
    Rng rng(seed);
    const auto cdf = detail::cumulative(mu.weights());
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::draw(cdf, mu.weights(), rng);
    return out;
}

/// Row-stochastic transition matrix over the points of a space.
class MarkovKernel {
public:
    MarkovKernel(SpacePtr space, std::vector<std::vector<double>> rows)
        : space_(std::move(space)), rows_(std::move(rows)) {
        const std::size_t n = space_->size();
        if (rows_.size() != n) throw std::invalid_argument("kernel size does not match space");
        for (const auto& row : rows_) {
            if (row.size() != n) throw std::invalid_argument("kernel is not square");
            double total = 0.0;
            for (double q : row) {
                if (q < 0.0) throw std::invalid_argument("kernel has a negative entry");
                total += q;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw std::invalid_argument("kernel row does not sum to 1");
        }
    }

    std::size_t size() const { return rows_.size(); }
    double prob(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const SpacePtr& space() const { return space_; }

    /// Strong connectivity of the positive-transition digraph.
    bool irreducible() const {
        const std::size_t n = size();
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) {
            reach[i][i] = true;
            for (std::size_t j = 0; j < n; ++j)
                if (rows_[i][j] > 0.0) reach[i][j] = true;
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (reach[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (reach[k][j]) reach[i][j] = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!reach[i][j]) return false;
        return true;
    }

    /// gcd-of-cycles test via breadth-first levels; valid for irreducible
    /// kernels.
    bool aperiodic() const {
        if (!irreducible()) return false;
        const std::size_t n = size();
        std::vector<long long> level(n, -1);
        std::vector<std::size_t> queue{0};
        level[0] = 0;
        std::size_t head = 0;
        while (head < queue.size()) {
            const std::size_t u = queue[head++];
            for (std::size_t v = 0; v < n; ++v)
                if (rows_[u][v] > 0.0 && level[v] < 0) {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
        }
        long long g = 0;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (rows_[u][v] > 0.0) g = std::gcd(g, level[u] + 1 - level[v]);
        return g == 1;
    }

private:
    SpacePtr space_;
    std::vector<std::vector<double>> rows_;
};

/// Chain of length n started from nu0 and following the kernel.
/// Deterministic given the seed.
inline std::vector<std::size_t> sample_markov(const MarkovKernel& kernel,
                                              const DiscreteMeasure& nu0, std::size_t n,
                                              std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_markov: n must be at least 1");
    if (nu0.space() != kernel.space())
        throw std::invalid_argument("sample_markov: initial law on a different space");
    Rng rng(seed);
    const auto cdf0 = detail::cumulative(nu0.weights());
    std::vector<std::vector<double>> row_cdfs;
    row_cdfs.reserve(kernel.size());
    for (const auto& row : kernel.rows()) row_cdfs.push_back(detail::cumulative(row));

    std::vector<std::size_t> out(n);
    out[0] = detail::draw(cdf0, nu0.weights(), rng);
    for (std::size_t i = 1; i < n; ++i)
        out[i] = detail::draw(row_cdfs[out[i - 1]], kernel.rows()[out[i - 1]], rng);
    return out;
}

/// Stationary distribution of an irreducible aperiodic kernel, by solving
/// pi P = pi with the normalization sum(pi) = 1 (Gaussian elimination with
/// partial pivoting; the system is tiny). The residual ||pi P - pi||_inf is
/// checked against 1e-10.
inline DiscreteMeasure stationary_distribution(const MarkovKernel& kernel) {
    if (!kernel.irreducible())
        throw std::invalid_argument("stationary_distribution: kernel is reducible");
    if (!kernel.aperiodic())
        throw std::invalid_argument("stationary_distribution: kernel is periodic");

    const std::size_t n = kernel.size();
    // Rows 0..n-2: (P^T - I) pi = 0; last row: sum(pi) = 1.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = kernel.prob(j, i);
        a[i][i] -= 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        if (a[col][col] == 0.0)
            throw std::runtime_error("stationary_distribution: singular system");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = std::max(0.0, a[i][n] / a[i][i]);

    DiscreteMeasure result(kernel.space(), pi);
    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += result.weight(i) * kernel.prob(i, j);
        residual = std::max(residual, std::abs(acc - result.weight(j)));
    }
    if (residual > 1e-10)
        throw std::runtime_error("stationary_distribution: residual " + std::to_string(residual));
    return result;
}

/// Sample source for trajectory experiments: i.i.d. draws from a law, or a
/// Markov chain. The limit law (the law whose mean set the trajectory should
/// approach) is the i.i.d. law itself or the chain's stationary distribution.
struct SamplerSpec {
    enum class Type { iid, markov };

    Type type = Type::iid;
    std::optional<DiscreteMeasure> law;        // iid
    std::optional<MarkovKernel> kernel;        // markov
    std::optional<DiscreteMeasure> initial;    // markov

    static SamplerSpec iid(DiscreteMeasure mu) {
        SamplerSpec s;
        s.type = Type::iid;
        s.law = std::move(mu);
        return s;
    }

    static SamplerSpec markov(MarkovKernel k, DiscreteMeasure nu0) {
        SamplerSpec s;
        s.type = Type::markov;
        s.kernel = std::move(k);
        s.initial = std::move(nu0);
        return s;
    }

    const SpacePtr& space() const {
        return type == Type::iid ? law->space() : kernel->space();
    }

    DiscreteMeasure limit_law() const {
        if (type == Type::iid) return *law;
        return stationary_distribution(*kernel);
    }
};

/// Default checkpoint schedule: every n up to `dense_until`, then geometric
/// steps n = ceil(ratio^k), always ending at n_max.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t n_max,
                                                      std::uint64_t dense_until = 0,
                                                      double ratio = 1.2) {
    if (n_max < 1) throw std::invalid_argument("default_checkpoints: n_max must be >= 1");
    if (ratio <= 1.0) throw std::invalid_argument("default_checkpoints: ratio must exceed 1");
    std::vector<std::uint64_t> cks;
    for (std::uint64_t n = 1; n <= std::min(dense_until, n_max); ++n) cks.push_back(n);
    double g = 1.0;
    while (true) {
        const auto n = static_cast<std::uint64_t>(std::ceil(g));
        if (n > n_max) break;
        cks.push_back(n);
        g *= ratio;
    }
    cks.push_back(n_max);
    std::sort(cks.begin(), cks.end());
    cks.erase(std::unique(cks.begin(), cks.end()), cks.end());
    return cks;
}

struct TrajectoryCheckpoint {
    std::uint64_t n = 0;
    PointSet mean_set;
    std::optional<double> rho_to_target;  // nullopt when the target is empty
    std::vector<std::uint64_t> counts;
};

/// Full record of one seeded trajectory: per-checkpoint empirical mean sets
/// with their count vectors (so every set can be recomputed), the distance
/// to the target, and the limit estimate over the checkpoint sets.
struct TrajectoryRecord {
    std::uint64_t seed = 0;
    double p = 1.0;
    bool restricted = false;
    std::uint64_t n_max = 0;
    PointSet target;
    std::vector<TrajectoryCheckpoint> checkpoints;
    LimitEstimate limit;
    std::string rng_algorithm = std::string(Rng::kAlgorithm);

    std::vector<PointSet> mean_sets() const {
        std::vector<PointSet> sets;
        sets.reserve(checkpoints.size());
        for (const auto& ck : checkpoints) sets.push_back(ck.mean_set);
        return sets;
    }
};

/// Runs one trajectory: counts are maintained per sample, the solver runs
/// only at checkpoints, so the total cost is O(n_max) sampling plus
/// O(|checkpoints| * |X|^2) solving.
inline TrajectoryRecord run_slln(const SamplerSpec& sampler, double p, bool restricted,
                                 std::uint64_t n_max, const std::vector<std::uint64_t>& checkpoints,
                                 std::uint64_t seed,
                                 const std::optional<PointSet>& target_override = std::nullopt,
                                 double tail_fraction = 0.5, std::size_t recurrence = 3) {
    const SpacePtr& space = sampler.space();
    if (n_max < 1) throw std::invalid_argument("run_slln: n_max must be at least 1");
    if (tail_fraction <= 0.0 || tail_fraction > 1.0)
        throw std::invalid_argument("run_slln: tail fraction must be in (0,1]");

    std::vector<std::uint64_t> cks = checkpoints;
    std::sort(cks.begin(), cks.end());
    cks.erase(std::unique(cks.begin(), cks.end()), cks.end());
    if (cks.empty() || cks.front() < 1 || cks.back() > n_max)
        throw std::invalid_argument("run_slln: checkpoints must lie in [1, n_max]");

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.p = p;
    rec.restricted = restricted;
    rec.n_max = n_max;
    if (target_override) {
        rec.target = *target_override;
    } else {
        const DiscreteMeasure limit = sampler.limit_law();
        rec.target = restricted ? medoid(limit, p).argmin : frechet_mean(limit, p).argmin;
    }

    Rng rng(seed);
    std::vector<double> cdf0;
    std::vector<std::vector<double>> row_cdfs;
    const std::vector<double>* w0 = nullptr;
    if (sampler.type == SamplerSpec::Type::iid) {
        w0 = &sampler.law->weights();
        cdf0 = detail::cumulative(*w0);
    } else {
        w0 = &sampler.initial->weights();
        cdf0 = detail::cumulative(*w0);
        row_cdfs.reserve(sampler.kernel->size());
        for (const auto& row : sampler.kernel->rows())
            row_cdfs.push_back(detail::cumulative(row));
    }

    std::vector<std::uint64_t> counts(space->size(), 0);
    const PointSet everything = PointSet::full(space);
    std::size_t next_ck = 0;
    std::size_t prev = 0;
    for (std::uint64_t n = 1; n <= cks.back(); ++n) {
        std::size_t x;
        if (sampler.type == SamplerSpec::Type::iid) {
            x = detail::draw(cdf0, *w0, rng);
        } else if (n == 1) {
            x = detail::draw(cdf0, *w0, rng);
        } else {
            x = detail::draw(row_cdfs[prev], sampler.kernel->rows()[prev], rng);
        }
        prev = x;
        ++counts[x];

        if (n == cks[next_ck]) {
            ++next_ck;
            const PointSet candidates =
                restricted ? positive_count_set(space, counts) : everything;
            FrechetResult mean = frechet_mean_from_counts(space, counts, n, candidates, p);
            TrajectoryCheckpoint ck;
            ck.n = n;
            ck.rho_to_target = rec.target.empty()
                                   ? std::nullopt
                                   : std::optional<double>(
                                         hausdorff_excess(mean.argmin, rec.target));
            ck.mean_set = std::move(mean.argmin);
            ck.counts = counts;
            rec.checkpoints.push_back(std::move(ck));
        }
    }

    const auto sets = rec.mean_sets();
    const std::size_t tail_len =
        std::max<std::size_t>(1, static_cast<std::size_t>(sets.size() * tail_fraction));
    rec.limit = kuratowski_limits(sets, sets.size() - tail_len, recurrence);
    return rec;
}

struct ReplicateConfig {
    SamplerSpec sampler;
    double p = 2.0;
    bool restricted = false;
    std::uint64_t n_max = 1;
    std::vector<std::uint64_t> checkpoints;
    std::size_t reps = 1;
    std::uint64_t base_seed = 0;
    std::vector<ConvergenceMode> detector_modes;
    double tail_fraction = 0.5;
    std::size_t recurrence = 3;
    std::optional<double> tolerance;          // H-type pass tolerance
    std::optional<PointSet> target_override;
    bool keep_records = false;
};

/// Order-insensitive aggregate over replicates. Every statistic is a
/// deterministic function of the per-replicate records taken in replicate
/// order, so thread count cannot affect it.
struct ReplicateAggregate {
    std::size_t reps = 0;
    std::vector<std::uint64_t> checkpoint_ns;
    PointSet target;

    // [checkpoint][point]: replicates whose mean set contains the point.
    std::vector<std::vector<std::size_t>> point_hits;
    // [checkpoint]: replicates whose mean set ties across every candidate.
    std::vector<std::size_t> full_ties;

    std::vector<double> final_rho;            // per replicate, replicate order
    std::vector<double> final_hausdorff;      // per replicate (target nonempty)
    std::map<ConvergenceMode, std::size_t> detector_passes;
    std::size_t ls_equals_target = 0;
    std::size_t li_empty = 0;
    std::vector<std::size_t> ls_point_counts;  // [point]
    std::vector<std::size_t> li_point_counts;  // [point]

    std::vector<TrajectoryRecord> records;     // kept only on request
};

namespace detail {

template <typename Fn>
inline void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

inline ReplicateAggregate replicate(const ReplicateConfig& config, unsigned threads = 1) {
    if (config.reps < 1) throw std::invalid_argument("replicate: reps must be at least 1");

    std::vector<TrajectoryRecord> records(config.reps);
    // Per-replicate streams: seed r derives its own generator state, so the
    // schedule below is embarrassingly parallel and replicate order is the
    // only order that matters.
    detail::parallel_for_index(config.reps, threads, [&](std::size_t r) {
        records[r] = run_slln(config.sampler, config.p, config.restricted, config.n_max,
                              config.checkpoints, config.base_seed + r, config.target_override,
                              config.tail_fraction, config.recurrence);
    });

    ReplicateAggregate agg;
    agg.reps = config.reps;
    agg.target = records.front().target;
    const std::size_t n_points = config.sampler.space()->size();
    const std::size_t n_cks = records.front().checkpoints.size();
    agg.checkpoint_ns.reserve(n_cks);
    for (const auto& ck : records.front().checkpoints) agg.checkpoint_ns.push_back(ck.n);
    agg.point_hits.assign(n_cks, std::vector<std::size_t>(n_points, 0));
    agg.full_ties.assign(n_cks, 0);
    agg.ls_point_counts.assign(n_points, 0);
    agg.li_point_counts.assign(n_points, 0);
    for (auto mode : config.detector_modes) agg.detector_passes[mode] = 0;

    for (const TrajectoryRecord& rec : records) {
        for (std::size_t c = 0; c < n_cks; ++c) {
            const PointSet& set = rec.checkpoints[c].mean_set;
            for (std::size_t x : set.indices()) ++agg.point_hits[c][x];
            const std::size_t candidates =
                config.restricted
                    ? positive_count_set(config.sampler.space(), rec.checkpoints[c].counts).size()
                    : n_points;
            if (set.size() == candidates) ++agg.full_ties[c];
        }
        if (rec.checkpoints.back().rho_to_target)
            agg.final_rho.push_back(*rec.checkpoints.back().rho_to_target);
        if (!agg.target.empty())
            agg.final_hausdorff.push_back(
                hausdorff_distance(rec.checkpoints.back().mean_set, agg.target));
        if (rec.limit.ls == agg.target) ++agg.ls_equals_target;
        if (rec.limit.li.empty()) ++agg.li_empty;
        for (std::size_t x : rec.limit.ls.indices()) ++agg.ls_point_counts[x];
        for (std::size_t x : rec.limit.li.indices()) ++agg.li_point_counts[x];

        const auto sets = rec.mean_sets();
        for (auto mode : config.detector_modes) {
            const DetectorReport verdict =
                detect_convergence(sets, rec.target, mode, config.tail_fraction,
                                   config.recurrence, config.tolerance);
            if (verdict.pass) ++agg.detector_passes[mode];
        }
    }

    if (config.keep_records) agg.records = std::move(records);
    return agg;
}

} // namespace setmeans

#endif
