#ifndef SETMEANS_ERRORS_HPP
#define SETMEANS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace setmeans {

/// Minimization was requested over an empty candidate set. Kept distinct
/// from generic argument errors so callers can branch on "no domain" vs
/// "bad input".
class EmptyDomainError : public std::runtime_error {
public:
    explicit EmptyDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A set operation (excess/Hausdorff distance) received an empty set where
/// a nonempty one is required.
class EmptySetError : public std::runtime_error {
public:
    explicit EmptySetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace setmeans

#endif
