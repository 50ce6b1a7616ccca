#ifndef SETMEANS_MEASURE_HPP
#define SETMEANS_MEASURE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "setmeans/metric_space.hpp"
#include "setmeans/point_set.hpp"

namespace setmeans {

/// d(x,y)^p with the p = 1 and p = 2 cases kept exact. Every functional
/// evaluation in the library goes through this one helper so that equal
/// inputs always produce bitwise-equal terms.
inline double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

/// A probability measure on a finite metric space, stored as one weight per
/// point. Construction renormalizes inputs whose total is within 1e-9 of 1
/// (Monte Carlo count ratios rarely sum to 1 exactly) and rejects anything
/// further off.
class DiscreteMeasure {
public:
    DiscreteMeasure(SpacePtr space, std::vector<double> weights)
        : space_(std::move(space)), w_(std::move(weights)) {
        if (w_.size() != space_->size())
            throw std::invalid_argument("weight count does not match space size");
        double total = 0.0;
        for (double w : w_) {
            if (w < 0.0) throw std::invalid_argument("negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("weights sum to " + std::to_string(total) +
                                        ", expected 1 within 1e-9");
        if (total != 1.0)
            for (double& w : w_) w /= total;
    }

    static DiscreteMeasure uniform(SpacePtr space) {
        const std::size_t n = space->size();
        return DiscreteMeasure(std::move(space), std::vector<double>(n, 1.0 / n));
    }

    static DiscreteMeasure uniform_on(SpacePtr space, const std::vector<std::size_t>& pts) {
        if (pts.empty()) throw std::invalid_argument("uniform_on: empty point list");
        std::vector<double> w(space->size(), 0.0);
        for (std::size_t x : pts) {
            if (x >= w.size()) throw std::invalid_argument("uniform_on: index out of range");
            w[x] += 1.0 / pts.size();
        }
        return DiscreteMeasure(std::move(space), std::move(w));
    }

    static DiscreteMeasure dirac(SpacePtr space, std::size_t x) {
        std::vector<double> w(space->size(), 0.0);
        if (x >= w.size()) throw std::invalid_argument("dirac: index out of range");
        w[x] = 1.0;
        return DiscreteMeasure(std::move(space), std::move(w));
    }

    double weight(std::size_t i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }
    const SpacePtr& space() const { return space_; }

    PointSet support() const {
        std::vector<std::size_t> pts;
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] > 0.0) pts.push_back(i);
        return PointSet(space_, std::move(pts));
    }

private:
    SpacePtr space_;
    std::vector<double> w_;
};

/// The value sum_y mu(y) d(x,y)^p, i.e. the p-th power of the Wasserstein
/// distance from mu to the point mass at x. Summation runs in point order so
/// equal weight vectors give bitwise-equal values.
inline double frechet_functional(const DiscreteMeasure& mu, std::size_t x, double p) {
    const MetricSpace& X = *mu.space();
    if (x >= X.size()) throw std::invalid_argument("point index out of range");
    if (p < 1.0) throw std::invalid_argument("p must be at least 1");
    double acc = 0.0;
    for (std::size_t y = 0; y < X.size(); ++y) acc += mu.weight(y) * pow_p(X.dist(x, y), p);
    return acc;
}

/// Same functional evaluated from raw sample counts: (sum_y N_y d(x,y)^p)/n.
/// Equal count vectors produce bitwise-identical values, which is what makes
/// exact tie detection in empirical mean sets possible.
inline double frechet_functional_counts(const MetricSpace& X,
                                        const std::vector<std::uint64_t>& counts,
                                        std::uint64_t n, std::size_t x, double p) {
    if (x >= X.size()) throw std::invalid_argument("point index out of range");
    if (counts.size() != X.size()) throw std::invalid_argument("count vector size mismatch");
    if (n == 0) throw std::invalid_argument("empty sample");
    double acc = 0.0;
    for (std::size_t y = 0; y < X.size(); ++y)
        acc += static_cast<double>(counts[y]) * pow_p(X.dist(x, y), p);
    return acc / static_cast<double>(n);
}

inline DiscreteMeasure empirical_measure(SpacePtr space,
                                         const std::vector<std::size_t>& samples) {
    if (samples.empty()) throw std::invalid_argument("empirical measure of an empty sample");
    std::vector<double> w(space->size(), 0.0);
    for (std::size_t s : samples) {
        if (s >= w.size()) throw std::invalid_argument("sample index out of range");
        w[s] += 1.0;
    }
    for (double& x : w) x /= static_cast<double>(samples.size());
    return DiscreteMeasure(std::move(space), std::move(w));
}

/// Relative entropy H(nu|mu) = sum nu log(nu/mu) over the support of nu,
/// +infinity when nu is not absolutely continuous with respect to mu.
/// Uses the convention 0 log 0 = 0.
inline double relative_entropy(const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
    if (nu.space() != mu.space())
        throw std::invalid_argument("relative entropy requires measures on the same space");
    double acc = 0.0;
    for (std::size_t i = 0; i < nu.weights().size(); ++i) {
        const double a = nu.weight(i);
        if (a == 0.0) continue;
        const double b = mu.weight(i);
        if (b == 0.0) return std::numeric_limits<double>::infinity();
        acc += a * std::log(a / b);
    }
    return acc;
}

/// One row of the weak-convergence diagnostic: the sup gap between weight
/// vectors and the functional gaps |f_p(mu_n,x) - f_p(mu,x)| at the probe
/// points. On a finite space, all probe gaps plus the weight gap going to
/// zero certifies convergence of mu_n to mu in the p-Wasserstein sense.
struct FunctionalGapRow {
    std::size_t index = 0;             // position in the input sequence
    double weight_gap = 0.0;           // sup_i |mu_n(i) - mu(i)|
    std::vector<double> probe_gaps;    // parallel to the probe list
    double max_probe_gap = 0.0;
};

inline std::vector<FunctionalGapRow> track_tau_wp(const std::vector<DiscreteMeasure>& seq,
                                                  const DiscreteMeasure& mu, double p,
                                                  const std::vector<std::size_t>& probes) {
    std::vector<double> f_mu(probes.size());
    for (std::size_t k = 0; k < probes.size(); ++k) f_mu[k] = frechet_functional(mu, probes[k], p);

    std::vector<FunctionalGapRow> rows;
    rows.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const DiscreteMeasure& m = seq[t];
        if (m.space() != mu.space())
            throw std::invalid_argument("track_tau_wp requires a common space");
        FunctionalGapRow row;
        row.index = t;
        for (std::size_t i = 0; i < m.weights().size(); ++i)
            row.weight_gap = std::max(row.weight_gap, std::abs(m.weight(i) - mu.weight(i)));
        row.probe_gaps.resize(probes.size());
        for (std::size_t k = 0; k < probes.size(); ++k) {
            row.probe_gaps[k] = std::abs(frechet_functional(m, probes[k], p) - f_mu[k]);
            row.max_probe_gap = std::max(row.max_probe_gap, row.probe_gaps[k]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// All points of the space, the default probe family on finite spaces.
inline std::vector<std::size_t> all_probes(const MetricSpace& X) {
    std::vector<std::size_t> out(X.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
}

} // namespace setmeans

#endif
