#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefrank/error.hpp"

namespace beliefrank::entropy {

/// Dense row-major matrix of non-negative reals.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i * cols + j)]; }
  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i * cols + j)]; }
};

/// Criteria data fed to the weighting: one column per criterion, one row per
/// observation (alternative, expert judgment, or pairwise row).
class DecisionMatrix {
 public:
  /// Requires a rectangular, non-empty block of finite entries >= 0 and one
  /// id per column. Throws InvalidMatrix.
  static DecisionMatrix make(const std::vector<std::vector<double>>& rows, std::vector<std::string> column_ids);

  int rows() const { return values_.rows; }
  int cols() const { return values_.cols; }
  double operator()(int i, int j) const { return values_(i, j); }
  const std::vector<std::string>& column_ids() const { return ids_; }

 private:
  Matrix values_;
  std::vector<std::string> ids_;
};

/// P_ij = a_ij / sum_i a_ij. Throws ZeroColumn.
Matrix column_normalize(const DecisionMatrix& d);

/// E_j = -(1 / ln m) sum_i P_ij ln P_ij with 0 ln 0 = 0, m = P.rows.
/// Throws DegenerateRows for m < 2.
std::vector<double> entropy_values(const Matrix& p);

/// d_j = 1 - E_j.
std::vector<double> divergence(std::span<const double> entropies);

/// W_j = d_j / sum d. Throws AllZeroDivergence.
std::vector<double> entropy_weights(std::span<const double> divergences);

/// W'_j = lambda_j W_j / sum lambda W. Throws DegeneratePriors, and
/// InvalidConfig for negative priors or a length mismatch.
std::vector<double> adjust_weights(std::span<const double> weights, std::span<const double> priors);

struct EntropyRow {
  std::string indicator;
  double e = 0.0;
  double d = 0.0;
  double w = 0.0;
  std::optional<double> lambda;
  std::optional<double> w_adj;

  bool operator==(const EntropyRow&) const = default;
};

using EntropyTable = std::vector<EntropyRow>;

/// d, W (and W' when priors are given) from per-criterion entropies.
EntropyTable table_from_entropies(const std::vector<std::string>& ids, std::span<const double> entropies,
                                  std::optional<std::span<const double>> priors = std::nullopt);

/// Full chain over a decision matrix.
EntropyTable entropy_table(const DecisionMatrix& d, std::optional<std::span<const double>> priors = std::nullopt);

// --- files -------------------------------------------------------------

/// `indicator,lambda` rows in file order.
std::vector<std::pair<std::string, double>> read_priors_csv(std::istream& in, std::string_view source);

/// `indicator,E,d,W,lambda,W_adj` at full precision; absent optionals are empty cells.
void write_table_csv(std::ostream& out, const EntropyTable& table);
EntropyTable read_table_csv(std::istream& in, std::string_view source);

nlohmann::json to_json(const EntropyTable& table);

}  // namespace beliefrank::entropy
