#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefrank/error.hpp"

namespace beliefrank::ahp {

inline constexpr double kReciprocityTolerance = 1e-9;
inline constexpr double kConsistencyThreshold = 0.1;
inline constexpr double kPowerIterationTolerance = 1e-12;
inline constexpr int kPowerIterationCap = 10'000;

/// Square reciprocal comparison matrix with positive entries, row-major.
class PairwiseMatrix {
 public:
  /// Validates shape (square, order >= 2), positivity, unit diagonal and
  /// reciprocity within 1e-9. Violations throw InvalidMatrix naming the cell
  /// (1-based).
  static PairwiseMatrix make(const std::vector<std::vector<double>>& rows);

  int order() const { return n_; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  std::vector<std::vector<double>> rows() const;

  bool operator==(const PairwiseMatrix&) const = default;

 private:
  PairwiseMatrix(int n, std::vector<double> data) : n_(n), data_(std::move(data)) {}
  int n_ = 0;
  std::vector<double> data_;
};

/// Entrywise geometric mean over experts. Entries where every expert agrees
/// are copied through untouched.
PairwiseMatrix aggregate_geometric(std::span<const PairwiseMatrix> matrices);

/// Dominant eigenvalue by power iteration from the uniform vector. Throws
/// NoConvergenceError (carrying the last estimate) after kPowerIterationCap
/// iterations.
double principal_eigenvalue(const PairwiseMatrix& m);

/// Divisor of (lambda_max - n) in the consistency index. `Order` (n) is the
/// default; `OrderMinusOne` is Saaty's usual n - 1.
enum class CiDenominator { Order, OrderMinusOne };

std::string_view to_string(CiDenominator mode);
/// CLI spelling: "paper" for Order, "standard" for OrderMinusOne.
/// Throws InvalidConfig otherwise.
CiDenominator parse_ci_denominator(std::string_view text);

/// Random consistency indices by matrix order.
class RiTable {
 public:
  /// Saaty indices for orders 1..10.
  static RiTable saaty();

  std::optional<double> lookup(int order) const;
  void set(int order, double ri);
  const std::map<int, double>& entries() const { return entries_; }

  /// Overlays {"11": 1.51, ...} onto this table. Throws ParseError.
  void merge_json(const nlohmann::json& doc);

 private:
  std::map<int, double> entries_;
};

struct ConsistencyReport {
  int order = 0;
  double lambda_max = 0.0;
  double ci = 0.0;
  double ri = 0.0;
  double cr = 0.0;
  bool acceptable = false;
  CiDenominator mode = CiDenominator::Order;

  bool operator==(const ConsistencyReport&) const = default;
};

ConsistencyReport consistency(const PairwiseMatrix& m, const RiTable& ri_table,
                              CiDenominator mode = CiDenominator::Order);

nlohmann::json to_json(const ConsistencyReport& r);

}  // namespace beliefrank::ahp
