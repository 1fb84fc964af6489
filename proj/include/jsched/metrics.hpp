#pragma once

#include <span>

#include "jsched/instance.hpp"

namespace jsched {

/// Percentage relative deviation of `alg` from `ref`. Throws
/// std::invalid_argument unless ref > 0.
double prd(double alg, double ref);

/// Geometric mean of alg[i] / best[i]. Inputs must be positive and of equal
/// length.
double gmr(std::span<const double> alg, std::span<const double> best);

/// Earliness/tardiness cost divided by sum over jobs of w_tardy times the
/// job's total processing time.
double normalized_cost(const Instance& inst, Time cost);

} // namespace jsched
