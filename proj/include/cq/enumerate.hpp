#pragma once

#include <cstdint>
#include <vector>

#include "cq/fq.hpp"
#include "cq/polynomial.hpp"

namespace cq {

// Exact exhaustive counting of common affine zeros over F_q^m.
//
// count_common_zeros is the production kernel: the leading coordinate is
// partitioned across OpenMP threads (integer sum reduction, so totals are
// deterministic for every thread count) and prime fields take a
// table-driven int64 fast path.
//
// count_common_zeros_reference is an independent serial implementation
// kept for testing the kernel against: plain odometer walk in
// lexicographic order through generic field arithmetic.
//
// Both throw BudgetExceeded when q^m exceeds the point budget.
uint64_t count_common_zeros(const std::vector<Polynomial<FqElem>>& polys, int m,
                            uint64_t budget = 100000000ull);

uint64_t count_common_zeros_reference(const std::vector<Polynomial<FqElem>>& polys, int m,
                                      uint64_t budget = 100000000ull);

// number of points q^m when it fits the budget, else throws
uint64_t affine_point_count(const Field& F, int m, uint64_t budget);

} // namespace cq
