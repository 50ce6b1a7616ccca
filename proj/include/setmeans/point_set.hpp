#ifndef SETMEANS_POINT_SET_HPP
#define SETMEANS_POINT_SET_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "setmeans/metric_space.hpp"

namespace setmeans {

/// A subset of a space's points, kept sorted and duplicate-free. This is the
/// value type of every set-valued mean and limit. Sets may be empty; the
/// operations that cannot accept an empty set say so explicitly.
class PointSet {
public:
    PointSet() = default;

    PointSet(SpacePtr space, std::vector<std::size_t> indices)
        : space_(std::move(space)), idx_(std::move(indices)) {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
        if (!idx_.empty()) {
            if (!space_) throw std::invalid_argument("point set without a space cannot hold points");
            if (idx_.back() >= space_->size())
                throw std::invalid_argument("point index out of range for space");
        }
    }

    static PointSet full(SpacePtr space) {
        std::vector<std::size_t> all(space->size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return PointSet(std::move(space), std::move(all));
    }

    static PointSet empty_set(SpacePtr space) { return PointSet(std::move(space), {}); }

    bool empty() const { return idx_.empty(); }
    std::size_t size() const { return idx_.size(); }

    bool contains(std::size_t x) const {
        return std::binary_search(idx_.begin(), idx_.end(), x);
    }

    bool subset_of(const PointSet& other) const {
        return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
    }

    const std::vector<std::size_t>& indices() const { return idx_; }
    const SpacePtr& space() const { return space_; }

    friend bool operator==(const PointSet& a, const PointSet& b) { return a.idx_ == b.idx_; }
    friend bool operator!=(const PointSet& a, const PointSet& b) { return !(a == b); }

    friend PointSet set_union(const PointSet& a, const PointSet& b) {
        std::vector<std::size_t> out;
        std::set_union(a.idx_.begin(), a.idx_.end(), b.idx_.begin(), b.idx_.end(),
                       std::back_inserter(out));
        return PointSet(a.space_ ? a.space_ : b.space_, std::move(out));
    }

    friend PointSet set_intersection(const PointSet& a, const PointSet& b) {
        std::vector<std::size_t> out;
        std::set_intersection(a.idx_.begin(), a.idx_.end(), b.idx_.begin(), b.idx_.end(),
                              std::back_inserter(out));
        return PointSet(a.space_ ? a.space_ : b.space_, std::move(out));
    }

private:
    SpacePtr space_;
    std::vector<std::size_t> idx_;
};

} // namespace setmeans

#endif
