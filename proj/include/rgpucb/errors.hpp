#pragma once

#include <stdexcept>
#include <string>

namespace rgpucb {

/// Thrown when K + sigma^2 I (or a jittered posterior covariance) cannot be
/// Cholesky-factorised. pivot_index() names the first non-positive pivot.
class IllConditionedKernelError : public std::runtime_error {
public:
    IllConditionedKernelError(const std::string& what, int pivot_index)
        : std::runtime_error(what), pivot_index_(pivot_index) {}

    int pivot_index() const noexcept { return pivot_index_; }

private:
    int pivot_index_;
};

}  // namespace rgpucb
