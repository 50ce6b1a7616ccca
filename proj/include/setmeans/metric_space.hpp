#ifndef SETMEANS_METRIC_SPACE_HPP
#define SETMEANS_METRIC_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace setmeans {

/// Absolute tolerance for the metric axioms. All bundled generators produce
/// entries that satisfy the axioms to within a few ulps, so 1e-12 only has to
/// absorb rounding, never modelling error.
inline constexpr double kMetricTol = 1e-12;

struct MetricViolation {
    enum class Rule {
        negative_entry,
        diagonal_nonzero,
        asymmetry,
        zero_off_diagonal,
        triangle,
    };

    Rule rule = Rule::triangle;
    std::size_t i = 0, j = 0, k = 0;  // k only meaningful for triangle
    double amount = 0.0;              // size of the violation

    std::string describe() const {
        switch (rule) {
            case Rule::negative_entry:
                return "negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")";
            case Rule::diagonal_nonzero:
                return "nonzero diagonal at (" + std::to_string(i) + "," + std::to_string(i) + ")";
            case Rule::asymmetry:
                return "asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")";
            case Rule::zero_off_diagonal:
                return "zero distance between distinct points (" + std::to_string(i) + "," +
                       std::to_string(j) + ")";
            case Rule::triangle:
                return "triangle violation at (" + std::to_string(i) + "," + std::to_string(j) +
                       "," + std::to_string(k) + ")";
        }
        return "unknown violation";
    }
};

/// Checks the metric axioms on a square matrix: nonnegativity, zero diagonal,
/// positivity off the diagonal, symmetry, and the triangle inequality
/// d(i,j) <= d(i,k) + d(k,j). Returns one entry per violated (rule, indices).
/// Throws std::invalid_argument if the matrix is not square.
inline std::vector<MetricViolation> validate_metric(
    const std::vector<std::vector<double>>& m, double tol = kMetricTol) {
    const std::size_t n = m.size();
    for (const auto& row : m) {
        if (row.size() != n) throw std::invalid_argument("distance matrix is not square");
    }

    std::vector<MetricViolation> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(m[i][i]) > tol)
            out.push_back({MetricViolation::Rule::diagonal_nonzero, i, i, 0, std::abs(m[i][i])});
        for (std::size_t j = 0; j < n; ++j) {
            if (m[i][j] < -tol)
                out.push_back({MetricViolation::Rule::negative_entry, i, j, 0, -m[i][j]});
            if (i < j) {
                if (std::abs(m[i][j] - m[j][i]) > tol)
                    out.push_back({MetricViolation::Rule::asymmetry, i, j, 0,
                                   std::abs(m[i][j] - m[j][i])});
                if (std::abs(m[i][j]) <= tol && std::abs(m[j][i]) <= tol)
                    out.push_back({MetricViolation::Rule::zero_off_diagonal, i, j, 0, 0.0});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double slack = m[i][k] + m[k][j] - m[i][j];
                if (slack < -tol)
                    out.push_back({MetricViolation::Rule::triangle, i, j, k, -slack});
            }
    return out;
}

/// Recipe for building a finite metric space. `explicit_matrix` carries its
/// own distance matrix; the generated kinds are parameterized families:
///   circle_grid(N)   N points i/N on the circle with geodesic distance,
///                    N a positive multiple of 4
///   interval_grid(N) N+1 points k/N on the unit interval
///   discrete(m)      m points, d(x,y) = 1 for x != y
///   star(m,p)        points {0..m}; d(x,y) = 1 for distinct x,y >= 1 and
///                    d(0,z) = (1 - 1/m)^(1/p)
struct SpaceSpec {
    enum class Kind { explicit_matrix, circle_grid, interval_grid, discrete, star };

    Kind kind = Kind::explicit_matrix;
    int n = 0;         // N for grids, m for discrete/star
    double p = 2.0;    // star only
    std::vector<std::string> labels;             // explicit only (optional)
    std::vector<std::vector<double>> dist;       // explicit only

    static SpaceSpec circle(int N) { return {Kind::circle_grid, N, 2.0, {}, {}}; }
    static SpaceSpec interval(int N) { return {Kind::interval_grid, N, 2.0, {}, {}}; }
    static SpaceSpec discrete_points(int m) { return {Kind::discrete, m, 2.0, {}, {}}; }
    static SpaceSpec star_points(int m, double p) { return {Kind::star, m, p, {}, {}}; }
};

class MetricSpace;
using SpacePtr = std::shared_ptr<const MetricSpace>;

/// A finite metric space: point labels plus a validated distance matrix.
/// Immutable after construction and shared by pointer, so values built on top
/// of it (measures, point sets) stay cheap to copy and safe to use from
/// several threads at once.
class MetricSpace {
public:
    static SpacePtr from_matrix(std::vector<std::vector<double>> dist,
                                std::vector<std::string> labels = {}) {
        auto violations = validate_metric(dist);
        if (!violations.empty())
            throw std::invalid_argument("not a metric: " + violations.front().describe());
        SpaceSpec spec;
        spec.kind = SpaceSpec::Kind::explicit_matrix;
        return finish(std::move(dist), std::move(labels), spec, 0.0);
    }

    std::size_t size() const { return n_; }
    double dist(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    double diameter() const { return diameter_; }

    /// Grid step of the generated grid families (1/N); zero for spaces with
    /// no grid structure. Used as the default pass tolerance of the
    /// Hausdorff-type convergence detectors.
    double grid_spacing() const { return grid_spacing_; }

    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const SpaceSpec& spec() const { return spec_; }

    std::vector<std::vector<double>> matrix() const {
        std::vector<std::vector<double>> m(n_, std::vector<double>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m[i][j] = dist(i, j);
        return m;
    }

    friend SpacePtr build_space(const SpaceSpec& spec);

private:
    MetricSpace() = default;

    static SpacePtr finish(std::vector<std::vector<double>> dist, std::vector<std::string> labels,
                           SpaceSpec spec, double grid_spacing) {
        auto space = std::shared_ptr<MetricSpace>(new MetricSpace());
        const std::size_t n = dist.size();
        if (n == 0) throw std::invalid_argument("metric space must have at least one point");
        space->n_ = n;
        space->d_.resize(n * n);
        double diam = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                space->d_[i * n + j] = dist[i][j];
                diam = std::max(diam, dist[i][j]);
            }
        space->diameter_ = diam;
        if (labels.empty()) {
            labels.resize(n);
            for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
        } else if (labels.size() != n) {
            throw std::invalid_argument("label count does not match matrix size");
        }
        space->labels_ = std::move(labels);
        if (spec.kind == SpaceSpec::Kind::explicit_matrix) {
            spec.labels = space->labels_;
            spec.dist = {};  // the space itself is the source of truth
        }
        space->spec_ = std::move(spec);
        space->grid_spacing_ = grid_spacing;
        return space;
    }

    std::size_t n_ = 0;
    std::vector<double> d_;  // row-major n x n
    double diameter_ = 0.0;
    double grid_spacing_ = 0.0;
    std::vector<std::string> labels_;
    SpaceSpec spec_;
};

inline SpacePtr build_space(const SpaceSpec& spec) {
    using Kind = SpaceSpec::Kind;
    switch (spec.kind) {
        case Kind::explicit_matrix: {
            auto violations = validate_metric(spec.dist);
            if (!violations.empty())
                throw std::invalid_argument("not a metric: " + violations.front().describe());
            SpaceSpec echo;
            echo.kind = Kind::explicit_matrix;
            return MetricSpace::finish(spec.dist, spec.labels, echo, 0.0);
        }
        case Kind::circle_grid: {
            const int N = spec.n;
            if (N <= 0 || N % 4 != 0)
                throw std::invalid_argument("circle_grid: N must be a positive multiple of 4");
            std::vector<std::vector<double>> d(N, std::vector<double>(N));
            std::vector<std::string> labels(N);
            for (int i = 0; i < N; ++i) {
                labels[i] = std::to_string(i) + "/" + std::to_string(N);
                for (int j = 0; j < N; ++j) {
                    const int gap = std::abs(i - j);
                    d[i][j] = static_cast<double>(std::min(gap, N - gap)) / N;
                }
            }
            return MetricSpace::finish(std::move(d), std::move(labels), spec, 1.0 / N);
        }
        case Kind::interval_grid: {
            const int N = spec.n;
            if (N <= 0) throw std::invalid_argument("interval_grid: N must be positive");
            std::vector<std::vector<double>> d(N + 1, std::vector<double>(N + 1));
            std::vector<std::string> labels(N + 1);
            for (int i = 0; i <= N; ++i) {
                labels[i] = std::to_string(i) + "/" + std::to_string(N);
                for (int j = 0; j <= N; ++j)
                    d[i][j] = static_cast<double>(std::abs(i - j)) / N;
            }
            return MetricSpace::finish(std::move(d), std::move(labels), spec, 1.0 / N);
        }
        case Kind::discrete: {
            const int m = spec.n;
            if (m < 1) throw std::invalid_argument("discrete: m must be at least 1");
            std::vector<std::vector<double>> d(m, std::vector<double>(m, 1.0));
            for (int i = 0; i < m; ++i) d[i][i] = 0.0;
            return MetricSpace::finish(std::move(d), {}, spec, 0.0);
        }
        case Kind::star: {
            const int m = spec.n;
            const double p = spec.p;
            if (m < 2) throw std::invalid_argument("star: m must be at least 2");
            if (p < 1.0) throw std::invalid_argument("star: p must be at least 1");
            const double hub = std::pow(1.0 - 1.0 / m, 1.0 / p);
            std::vector<std::vector<double>> d(m + 1, std::vector<double>(m + 1, 1.0));
            for (int i = 0; i <= m; ++i) d[i][i] = 0.0;
            for (int z = 1; z <= m; ++z) d[0][z] = d[z][0] = hub;
            return MetricSpace::finish(std::move(d), {}, spec, 0.0);
        }
    }
    throw std::invalid_argument("unknown space kind");
}

} // namespace setmeans

#endif
