#pragma once

#include <vector>

#include "lseries/core.hpp"

namespace lseries::oracle {

struct OracleResult {
    double best_error = 0.0;
    SparseAssignment best_assignment;  // all indices 0..L-1 listed
    std::uint64_t evaluated_count = 0;
};

/// Exact minimum of |sum_{n<L} lambda_n tau^n - w| over every assignment of
/// set elements to the first L indices, by depth-first enumeration in
/// element-index order. Throws BudgetExceeded beyond |set|^L = 2^26.
OracleResult best_prefix_error_direct(const CoefficientSet& lambda, cplx tau, cplx w,
                                      std::uint32_t L);

/// Same minimum via a meet-in-the-middle split at L/2 (sorted half sums,
/// nearest-neighbor sweep). Must agree with the direct route.
OracleResult best_prefix_error_mim(const CoefficientSet& lambda, cplx tau, cplx w,
                                   std::uint32_t L);

/// Dispatcher: direct enumeration while it fits the budget, else
/// meet-in-the-middle, else BudgetExceeded.
OracleResult best_prefix_error(const CoefficientSet& lambda, cplx tau, cplx w, std::uint32_t L);

/// Fraction of a 100x100 grid over the disk's bounding box (restricted to the
/// disk) lying within eps of some point. A measurement, not a proof.
double net_coverage(const std::vector<cplx>& points, double eps, const Disk& region);

}  // namespace lseries::oracle
