#ifndef SETMEANS_SET_LIMITS_HPP
#define SETMEANS_SET_LIMITS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "setmeans/errors.hpp"
#include "setmeans/point_set.hpp"

namespace setmeans {

/// One-sided Hausdorff excess of a over b: max over x in a of the distance
/// from x to b. Undefined (and rejected) when either set is empty.
inline double hausdorff_excess(const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty())
        throw EmptySetError("hausdorff excess undefined for empty sets");
    if (a.space() != b.space())
        throw std::invalid_argument("hausdorff excess requires sets on one space");
    const MetricSpace& X = *a.space();
    double worst = 0.0;
    for (std::size_t x : a.indices()) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t y : b.indices()) best = std::min(best, X.dist(x, y));
        worst = std::max(worst, best);
    }
    return worst;
}

/// Hausdorff distance: the larger of the two excesses. A metric on nonempty
/// subsets of a finite space.
inline double hausdorff_distance(const PointSet& a, const PointSet& b) {
    return std::max(hausdorff_excess(a, b), hausdorff_excess(b, a));
}

/// Finite-window estimate of the set-theoretic limits of a sequence of
/// subsets of a finite (hence discrete) space:
///
///   li = points contained in every member of the window,
///   ls = points contained in at least `recurrence` members of the window.
///
/// These estimate the lower and upper limits of the infinite sequence from
/// the finite prefix; the window start and the recurrence threshold are part
/// of the estimate so downstream reports stay auditable. `lt` is defined
/// (li = ls) exactly when the two estimates agree.
struct LimitEstimate {
    PointSet li;
    PointSet ls;
    std::size_t window_begin = 0;   // first sequence index used
    std::size_t window_end = 0;     // one past the last index used
    std::size_t recurrence = 0;     // threshold actually applied
    bool converged() const { return li == ls; }
};

inline LimitEstimate kuratowski_limits(const std::vector<PointSet>& seq, std::size_t n0,
                                       std::size_t recurrence) {
    if (seq.empty()) throw std::invalid_argument("kuratowski_limits: empty sequence");
    if (n0 >= seq.size()) throw std::invalid_argument("kuratowski_limits: n0 out of range");
    if (recurrence < 1) throw std::invalid_argument("kuratowski_limits: recurrence must be >= 1");

    const std::size_t window = seq.size() - n0;
    // A threshold longer than the window would make ls empty while li can be
    // nonempty, inverting the li <= ls ordering; cap it at the window length.
    const std::size_t r = std::min(recurrence, window);

    SpacePtr space;
    for (const auto& s : seq)
        if (s.space()) { space = s.space(); break; }
    if (!space) throw std::invalid_argument("kuratowski_limits: no member carries a space");
    for (const auto& s : seq)
        if (s.space() && s.space() != space)
            throw std::invalid_argument("kuratowski_limits: members live on different spaces");

    std::vector<std::size_t> li_pts, ls_pts;
    for (std::size_t x = 0; x < space->size(); ++x) {
        std::size_t hits = 0;
        for (std::size_t k = n0; k < seq.size(); ++k)
            if (seq[k].contains(x)) ++hits;
        if (hits == window) li_pts.push_back(x);
        if (hits >= r) ls_pts.push_back(x);
    }

    LimitEstimate est;
    est.li = PointSet(space, std::move(li_pts));
    est.ls = PointSet(space, std::move(ls_pts));
    est.window_begin = n0;
    est.window_end = seq.size();
    est.recurrence = r;
    return est;
}

enum class ConvergenceMode { K_plus, K_minus, H_plus, H, K };

inline std::string to_string(ConvergenceMode m) {
    switch (m) {
        case ConvergenceMode::K_plus: return "K_plus";
        case ConvergenceMode::K_minus: return "K_minus";
        case ConvergenceMode::H_plus: return "H_plus";
        case ConvergenceMode::H: return "H";
        case ConvergenceMode::K: return "K";
    }
    return "?";
}

inline ConvergenceMode convergence_mode_from_string(const std::string& s) {
    if (s == "K_plus") return ConvergenceMode::K_plus;
    if (s == "K_minus") return ConvergenceMode::K_minus;
    if (s == "H_plus") return ConvergenceMode::H_plus;
    if (s == "H") return ConvergenceMode::H;
    if (s == "K") return ConvergenceMode::K;
    throw std::invalid_argument("unknown convergence mode: " + s);
}

/// Verdict of one detector run. The K-type verdicts come from the limit
/// estimate; the H-type verdicts track the excess (or Hausdorff distance)
/// from each tail member to the target. `tail_values` is parallel to the
/// tail of the sequence, with nullopt marking members on which the quantity
/// is undefined (empty sets); any such member fails the H-type check.
struct DetectorReport {
    ConvergenceMode mode = ConvergenceMode::K;
    bool pass = false;
    double tolerance = 0.0;
    LimitEstimate limits;
    std::vector<std::optional<double>> tail_values;
    double max_value = 0.0;                // max of the defined tail values
    std::optional<double> trend_slope;     // least-squares slope over the tail
};

inline DetectorReport detect_convergence(const std::vector<PointSet>& seq,
                                         const PointSet& target, ConvergenceMode mode,
                                         double tail_fraction = 0.5, std::size_t recurrence = 3,
                                         std::optional<double> tolerance = std::nullopt) {
    if (seq.empty()) throw std::invalid_argument("detect_convergence: empty sequence");
    if (tail_fraction <= 0.0 || tail_fraction > 1.0)
        throw std::invalid_argument("detect_convergence: tail fraction must be in (0,1]");

    const std::size_t tail_len =
        std::max<std::size_t>(1, static_cast<std::size_t>(seq.size() * tail_fraction));
    const std::size_t n0 = seq.size() - tail_len;

    DetectorReport rep;
    rep.mode = mode;
    rep.limits = kuratowski_limits(seq, n0, recurrence);

    const bool needs_rho =
        mode == ConvergenceMode::H_plus || mode == ConvergenceMode::H;
    if (needs_rho && target.empty())
        throw EmptySetError("detect_convergence: empty target in a Hausdorff mode");

    const SpacePtr& space = rep.limits.li.space();
    rep.tolerance = tolerance.value_or(space->grid_spacing());

    const bool k_plus_ok = rep.limits.ls.subset_of(target);
    const bool k_minus_ok = target.subset_of(rep.limits.li);

    if (needs_rho) {
        bool all_defined = true;
        std::vector<double> xs, ys;
        for (std::size_t k = n0; k < seq.size(); ++k) {
            if (seq[k].empty()) {
                rep.tail_values.push_back(std::nullopt);
                all_defined = false;
                continue;
            }
            const double v = mode == ConvergenceMode::H_plus
                                 ? hausdorff_excess(seq[k], target)
                                 : hausdorff_distance(seq[k], target);
            rep.tail_values.push_back(v);
            rep.max_value = std::max(rep.max_value, v);
            xs.push_back(static_cast<double>(k));
            ys.push_back(v);
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
            if (den > 0) rep.trend_slope = num / den;
        }
        rep.pass = all_defined && rep.max_value <= rep.tolerance;
    } else {
        switch (mode) {
            case ConvergenceMode::K_plus: rep.pass = k_plus_ok; break;
            case ConvergenceMode::K_minus: rep.pass = k_minus_ok; break;
            case ConvergenceMode::K: rep.pass = k_plus_ok && k_minus_ok; break;
            default: break;
        }
    }
    return rep;
}

} // namespace setmeans

#endif
