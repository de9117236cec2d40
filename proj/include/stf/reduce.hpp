#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stf {

/// Fixed-tree pairwise summation. The combination order depends only on the
/// element count, never on thread count, so parallel callers that hand in the
/// same values get bit-identical sums.
double pairwise_sum(std::span<const double> x);

/// Deterministic parallel reduction of `count` terms into `nacc` accumulators:
/// terms are grouped into fixed blocks of 4096, each block is accumulated
/// serially in index order (blocks run in parallel), and the per-block partial
/// sums are combined with a fixed pairwise tree. `term(i, acc)` must write the
/// nacc values of term i into acc.
std::vector<double> blocked_sum(std::size_t count, std::size_t nacc,
                                const std::function<void(std::size_t, double*)>& term);

} // namespace stf
