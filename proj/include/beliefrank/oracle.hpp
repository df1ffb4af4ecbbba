#pragma once

// Reference implementations used only to cross-check the library. They share
// the value types but none of the computational paths they verify.

#include <vector>

#include "beliefrank/evidence.hpp"

namespace beliefrank::oracle {

/// Dempster's rule by exhaustive enumeration of every (B, C) pair of the
/// 2^n x 2^n subset grid, dense arrays, naive summation, no pruning.
evidence::CombinationResult brute_force_combine(const Bpa& m1, const Bpa& m2);

/// det(M - lambda I) by Gaussian elimination with partial pivoting.
double characteristic_value(const std::vector<std::vector<double>>& m, double lambda);

/// Largest real root of det(M - lambda I): scan downward from the Gershgorin
/// row-sum bound for the first sign change, then bisect to 1e-13.
double largest_eigenvalue_bisection(const std::vector<std::vector<double>>& m);

}  // namespace beliefrank::oracle
