#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefrank/core.hpp"

namespace beliefrank::evidence {

/// Masses within this of total conflict make Dempster's rule undefined.
inline constexpr double kTotalConflictTolerance = 1e-12;

struct CombinationResult {
  Bpa bpa;
  double conflict_k = 0.0;

  bool operator==(const CombinationResult&) const = default;
};

/// Total product mass on empty intersections, k = sum_{B cap C = empty} m1(B) m2(C).
/// Throws FrameMismatch.
double conflict(const Bpa& m1, const Bpa& m2);

/// Dempster's rule of combination over the focal elements of both inputs.
/// Product masses are summed in sorted order so the rule is exactly
/// commutative. Masses under kPruneThreshold are dropped from the result.
/// Throws TotalConflict when k is within 1e-12 of one.
CombinationResult dempster_combine(const Bpa& m1, const Bpa& m2);

/// Focal-set-wise arithmetic mean. Exactly permutation invariant.
/// Throws EmptyInput or FrameMismatch.
Bpa average_bpas(std::span<const Bpa> bpas);

/// Murphy's rule: average the n inputs, then combine the average with
/// itself n - 1 times. conflict_k is the conflict of the last combination
/// step (zero for a single input).
CombinationResult murphy_combine(std::span<const Bpa> bpas);

/// BetP(l) = sum over focal A containing l of m(A) / |A|, one entry per
/// frame label in grade order.
std::vector<double> pignistic(const Bpa& b);

struct RankEntry {
  std::string indicator;
  double value = 0.0;
  int rank = 0;

  bool operator==(const RankEntry&) const = default;
};

struct RankingReport {
  std::vector<RankEntry> entries;  // rank order
  std::string top;
  std::string bottom;
  std::string method;

  bool operator==(const RankingReport&) const = default;
};

/// Descending by value; ties follow natural indicator id order (B2 before B10).
/// Throws EmptyInput, or InvalidConfig on duplicate ids or non-finite values.
RankingReport rank(const std::vector<std::pair<std::string, double>>& values, std::string method = {});

nlohmann::json to_json(const CombinationResult& r);
nlohmann::json to_json(const RankingReport& r);

}  // namespace beliefrank::evidence
