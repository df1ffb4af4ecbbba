#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "beliefrank/ahp.hpp"
#include "beliefrank/core.hpp"

namespace beliefrank::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using Rng = std::mt19937_64;
inline constexpr std::uint64_t kSeed = 20240611;

/// Bpa with 1..max_focal focal elements drawn from the non-empty subsets.
Bpa random_bpa(Rng& rng, int max_focal = 6);
/// Reciprocal matrix with upper entries drawn from the 17-value Saaty scale.
ahp::PairwiseMatrix random_saaty_matrix(Rng& rng, int n);
/// a_ij = w_i / w_j for random positive w.
ahp::PairwiseMatrix random_consistent_matrix(Rng& rng, int n);

/// Criteria 1 to 9, each run independently.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_selftest();

std::string format_line(const CriterionResult& r);

}  // namespace beliefrank::selftest
