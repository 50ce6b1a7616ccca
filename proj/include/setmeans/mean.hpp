#ifndef SETMEANS_MEAN_HPP
#define SETMEANS_MEAN_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "setmeans/errors.hpp"
#include "setmeans/measure.hpp"
#include "setmeans/point_set.hpp"

namespace setmeans {

/// Argmin membership tolerance. Genuine ties in the solvers come from equal
/// sample counts, which produce bitwise-equal functional values under the
/// fixed summation order of frechet_functional_counts; the tolerance exists
/// to absorb rounding in values that are tied in exact arithmetic but reach
/// the comparison through different floating-point routes.
inline constexpr double kTieRel = 1e-9;
inline constexpr double kTieAbs = 1e-12;

inline double tie_tolerance(double min_value) {
    return min_value > 0.0 ? kTieRel * min_value : kTieAbs;
}

/// Result of minimizing the p-th Frechet functional over a candidate set.
/// `values` is parallel to `candidate_set.indices()`; `argmin` holds every
/// candidate within tie tolerance of the minimum.
struct FrechetResult {
    PointSet argmin;
    double min_value = 0.0;
    std::vector<double> values;
    PointSet candidate_set;
};

namespace detail {

inline FrechetResult argmin_from_values(const PointSet& candidates, std::vector<double> values) {
    double min_v = values.front();
    for (double v : values) min_v = std::min(min_v, v);
    const double tol = tie_tolerance(min_v);
    std::vector<std::size_t> arg;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k] <= min_v + tol) arg.push_back(candidates.indices()[k]);
    FrechetResult r;
    r.argmin = PointSet(candidates.space(), std::move(arg));
    r.min_value = min_v;
    r.values = std::move(values);
    r.candidate_set = candidates;
    return r;
}

} // namespace detail

/// Exhaustive minimization of x -> f_p(mu,x) over a candidate set. On a
/// finite space the minimizer always exists, so the only failure mode is an
/// empty candidate set, reported as EmptyDomainError.
inline FrechetResult frechet_mean(const DiscreteMeasure& mu, const PointSet& candidates,
                                  double p) {
    if (candidates.empty())
        throw EmptyDomainError("frechet_mean: empty candidate set");
    if (candidates.space() != mu.space())
        throw std::invalid_argument("frechet_mean: candidates live on a different space");
    std::vector<double> values;
    values.reserve(candidates.size());
    for (std::size_t c : candidates.indices()) values.push_back(frechet_functional(mu, c, p));
    return detail::argmin_from_values(candidates, std::move(values));
}

inline FrechetResult frechet_mean(const DiscreteMeasure& mu, double p) {
    return frechet_mean(mu, PointSet::full(mu.space()), p);
}

/// Restricted mean: minimization over the support of mu. For an empirical
/// measure this is the p-medoid of the sample.
inline FrechetResult medoid(const DiscreteMeasure& mu, double p) {
    return frechet_mean(mu, mu.support(), p);
}

/// Count-vector solver used on sampling trajectories: functional values are
/// bitwise-reproducible functions of the counts, so equal counts give exact
/// ties.
inline FrechetResult frechet_mean_from_counts(const SpacePtr& space,
                                              const std::vector<std::uint64_t>& counts,
                                              std::uint64_t n, const PointSet& candidates,
                                              double p) {
    if (candidates.empty())
        throw EmptyDomainError("frechet_mean_from_counts: empty candidate set");
    std::vector<double> values;
    values.reserve(candidates.size());
    for (std::size_t c : candidates.indices())
        values.push_back(frechet_functional_counts(*space, counts, n, c, p));
    return detail::argmin_from_values(candidates, std::move(values));
}

/// Candidate set {i : counts[i] > 0}; with these candidates the count solver
/// computes the empirical restricted mean.
inline PointSet positive_count_set(const SpacePtr& space,
                                   const std::vector<std::uint64_t>& counts) {
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0) pts.push_back(i);
    return PointSet(space, std::move(pts));
}

/// Constant c_eps with (a+b)^p <= (1+eps) a^p + c_eps b^p for all a,b >= 0:
/// c_eps = (1/((1+eps)^(1/p) - 1) + 1)^p.
inline double peter_paul_constant(double epsilon, double p) {
    if (epsilon <= 0.0) throw std::invalid_argument("peter_paul_constant: epsilon must be > 0");
    if (p < 1.0) throw std::invalid_argument("peter_paul_constant: p must be at least 1");
    const double root = std::pow(1.0 + epsilon, 1.0 / p);
    return std::pow(1.0 / (root - 1.0) + 1.0, p);
}

/// Whether x is a minimizer of f_p(mu, .) over the whole space, i.e. whether
/// mu lies in the cell of measures whose mean set contains x.
inline bool in_voronoi_cell(const DiscreteMeasure& mu, std::size_t x, double p) {
    return frechet_mean(mu, p).argmin.contains(x);
}

/// Restricted variant: x must carry mass and minimize over the support.
inline bool in_restricted_voronoi_cell(const DiscreteMeasure& mu, std::size_t x, double p) {
    if (mu.weight(x) <= 0.0) return false;
    return medoid(mu, p).argmin.contains(x);
}

} // namespace setmeans

#endif
