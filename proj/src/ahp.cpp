#include "beliefrank/ahp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace beliefrank::ahp {

namespace {

std::string cell(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

}  // namespace

PairwiseMatrix PairwiseMatrix::make(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw Error(ErrorKind::InvalidMatrix, "pairwise matrix needs order >= 2, got " + std::to_string(n));
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw Error(ErrorKind::InvalidMatrix, "row " + std::to_string(i + 1) + " has " +
                                                std::to_string(rows[i].size()) + " entries, expected " +
                                                std::to_string(n));
    }
    for (int j = 0; j < n; ++j) {
      const double v = rows[i][j];
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "entry " << cell(i, j) << " = " << v << " is not a positive finite number";
        throw Error(ErrorKind::InvalidMatrix, msg.str());
      }
      data.push_back(v);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(data[i * n + i] - 1.0) > kReciprocityTolerance) {
      throw Error(ErrorKind::InvalidMatrix, "diagonal entry " + cell(i, i) + " must be 1");
    }
    for (int j = i + 1; j < n; ++j) {
      const double product = data[i * n + j] * data[j * n + i];
      if (std::abs(product - 1.0) > kReciprocityTolerance) {
        std::ostringstream msg;
        msg << "entries " << cell(i, j) << " = " << data[i * n + j] << " and " << cell(j, i) << " = "
            << data[j * n + i] << " are not reciprocal";
        throw Error(ErrorKind::InvalidMatrix, msg.str());
      }
    }
  }
  return PairwiseMatrix(n, std::move(data));
}

std::vector<std::vector<double>> PairwiseMatrix::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) out[i].assign(data_.begin() + i * n_, data_.begin() + (i + 1) * n_);
  return out;
}

PairwiseMatrix aggregate_geometric(std::span<const PairwiseMatrix> matrices) {
  if (matrices.empty()) throw Error(ErrorKind::EmptyInput, "no pairwise matrices to aggregate");
  const int n = matrices.front().order();
  for (std::size_t l = 1; l < matrices.size(); ++l) {
    if (matrices[l].order() != n) {
      throw Error(ErrorKind::OrderMismatch, "matrix " + std::to_string(l + 1) + " has order " +
                                                std::to_string(matrices[l].order()) + ", expected " +
                                                std::to_string(n));
    }
  }
  if (matrices.size() == 1) return matrices.front();

  const double k = static_cast<double>(matrices.size());
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n), std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double first = matrices.front()(i, j);
      bool unanimous = true;
      double log_sum = 0.0;
      for (const auto& m : matrices) {
        unanimous = unanimous && m(i, j) == first;
        log_sum += std::log(m(i, j));
      }
      // Summing logs keeps the product from overflowing for large panels.
      rows[i][j] = unanimous ? first : std::exp(log_sum / k);
    }
  }
  return PairwiseMatrix::make(rows);
}

double principal_eigenvalue(const PairwiseMatrix& m) {
  const int n = m.order();
  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> w(static_cast<std::size_t>(n));
  double estimate = 0.0;
  for (int iter = 1; iter <= kPowerIterationCap; ++iter) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += m(i, j) * v[j];
      w[i] = acc;
      total += acc;
    }
    // v sums to one, so the growth of the sum is the Rayleigh-style estimate.
    const double next = total;
    for (int i = 0; i < n; ++i) v[i] = w[i] / total;
    // lambda_max >= n holds for every positive reciprocal matrix; only rounding goes below it.
    if (iter > 1 && std::abs(next - estimate) <= kPowerIterationTolerance) return std::max(next, static_cast<double>(n));
    estimate = next;
  }
  throw NoConvergenceError(estimate, kPowerIterationCap);
}

std::string_view to_string(CiDenominator mode) {
  return mode == CiDenominator::Order ? "paper" : "standard";
}

CiDenominator parse_ci_denominator(std::string_view text) {
  if (text == "paper") return CiDenominator::Order;
  if (text == "standard") return CiDenominator::OrderMinusOne;
  throw Error(ErrorKind::InvalidConfig, "ci denominator must be 'paper' or 'standard', got '" + std::string(text) + "'");
}

RiTable RiTable::saaty() {
  RiTable t;
  t.entries_ = {{1, 0.0},  {2, 0.0},  {3, 0.58}, {4, 0.90}, {5, 1.12},
                {6, 1.24}, {7, 1.32}, {8, 1.41}, {9, 1.45}, {10, 1.49}};
  return t;
}

std::optional<double> RiTable::lookup(int order) const {
  auto it = entries_.find(order);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void RiTable::set(int order, double ri) { entries_[order] = ri; }

void RiTable::merge_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "RI table must be a JSON object of order -> index");
  for (const auto& [key, value] : doc.items()) {
    int order = 0;
    try {
      std::size_t used = 0;
      order = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "RI table key '" + key + "' is not an integer order");
    }
    if (order < 1) throw Error(ErrorKind::ParseError, "RI table order must be >= 1, got " + key);
    if (!value.is_number() || value.get<double>() < 0.0) {
      throw Error(ErrorKind::ParseError, "RI table value for order " + key + " must be a non-negative number");
    }
    entries_[order] = value.get<double>();
  }
}

ConsistencyReport consistency(const PairwiseMatrix& m, const RiTable& ri_table, CiDenominator mode) {
  const int n = m.order();
  ConsistencyReport r;
  r.order = n;
  r.mode = mode;
  r.lambda_max = principal_eigenvalue(m);

  const double denominator = mode == CiDenominator::Order ? n : n - 1;
  // A consistent matrix has lambda_max == n; iteration lands within rounding of it.
  const bool at_order = std::abs(r.lambda_max - n) <= 1e-10 * n;
  r.ci = at_order ? 0.0 : (r.lambda_max - n) / denominator;

  if (n <= 2) {
    r.ri = 0.0;
    r.cr = 0.0;
  } else {
    auto ri = ri_table.lookup(n);
    if (!ri) throw Error(ErrorKind::MissingRI, "no random index for order " + std::to_string(n));
    if (*ri <= 0.0) {
      throw Error(ErrorKind::InvalidConfig, "random index for order " + std::to_string(n) + " must be positive");
    }
    r.ri = *ri;
    r.cr = r.ci / r.ri;
  }
  r.acceptable = r.cr < kConsistencyThreshold;
  return r;
}

nlohmann::json to_json(const ConsistencyReport& r) {
  return {{"order", r.order}, {"lambda_max", r.lambda_max}, {"ci", r.ci},
          {"ri", r.ri},       {"cr", r.cr},                 {"acceptable", r.acceptable},
          {"ci_denominator", std::string(to_string(r.mode))}};
}

}  // namespace beliefrank::ahp
