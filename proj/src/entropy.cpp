#include "beliefrank/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "beliefrank/core.hpp"
#include "beliefrank/csv.hpp"

namespace beliefrank::entropy {

DecisionMatrix DecisionMatrix::make(const std::vector<std::vector<double>>& rows, std::vector<std::string> column_ids) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorKind::InvalidMatrix, "decision matrix is empty");
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.front().size());
  if (static_cast<int>(column_ids.size()) != n) {
    throw Error(ErrorKind::InvalidMatrix, std::to_string(column_ids.size()) + " column ids for " + std::to_string(n) +
                                              " columns");
  }
  DecisionMatrix d;
  d.values_ = Matrix{m, n, {}};
  d.values_.data.reserve(static_cast<std::size_t>(m * n));
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw Error(ErrorKind::InvalidMatrix, "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                                " entries, expected " + std::to_string(n));
    }
    for (int j = 0; j < n; ++j) {
      const double v = rows[i][j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "entry (" << i + 1 << "," << j + 1 << ") = " << v << " must be finite and >= 0";
        throw Error(ErrorKind::InvalidMatrix, msg.str());
      }
      d.values_.data.push_back(v);
    }
  }
  d.ids_ = std::move(column_ids);
  return d;
}

Matrix column_normalize(const DecisionMatrix& d) {
  Matrix p{d.rows(), d.cols(), std::vector<double>(static_cast<std::size_t>(d.rows() * d.cols()))};
  for (int j = 0; j < d.cols(); ++j) {
    std::vector<double> column(static_cast<std::size_t>(d.rows()));
    for (int i = 0; i < d.rows(); ++i) column[i] = d(i, j);
    const double total = stable_sum(column);
    if (total <= 0.0) throw Error(ErrorKind::ZeroColumn, "column " + d.column_ids()[j] + " sums to zero");
    for (int i = 0; i < d.rows(); ++i) p(i, j) = d(i, j) / total;
  }
  return p;
}

std::vector<double> entropy_values(const Matrix& p) {
  const int m = p.rows;
  if (m < 2) throw Error(ErrorKind::DegenerateRows, "entropy needs at least 2 rows, got " + std::to_string(m));
  const double k = 1.0 / std::log(static_cast<double>(m));
  std::vector<double> out(static_cast<std::size_t>(p.cols));
  for (int j = 0; j < p.cols; ++j) {
    bool uniform = true;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const double v = p(i, j);
      uniform = uniform && v == p(0, j);
      if (v > 0.0) terms.push_back(v * std::log(v));
    }
    if (uniform) {
      // Maximum entropy; the log sum would only reach 1 up to rounding.
      out[j] = 1.0;
      continue;
    }
    // + 0.0 turns a point mass's -0 into +0.
    out[j] = std::clamp(-k * stable_sum(terms), 0.0, 1.0) + 0.0;
  }
  return out;
}

std::vector<double> divergence(std::span<const double> entropies) {
  std::vector<double> d;
  d.reserve(entropies.size());
  for (double e : entropies) d.push_back(1.0 - e);
  return d;
}

std::vector<double> entropy_weights(std::span<const double> divergences) {
  std::vector<double> values(divergences.begin(), divergences.end());
  const double total = stable_sum(values);
  if (!(total > 0.0)) throw Error(ErrorKind::AllZeroDivergence, "every criterion has zero divergence; weights undefined");
  for (double& v : values) v /= total;
  return values;
}

std::vector<double> adjust_weights(std::span<const double> weights, std::span<const double> priors) {
  if (weights.size() != priors.size()) {
    throw Error(ErrorKind::InvalidConfig, std::to_string(priors.size()) + " priors for " +
                                              std::to_string(weights.size()) + " weights");
  }
  std::vector<double> products(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(priors[j] >= 0.0) || !std::isfinite(priors[j])) {
      throw Error(ErrorKind::InvalidConfig, "prior " + std::to_string(j + 1) + " must be finite and >= 0");
    }
    products[j] = priors[j] * weights[j];
  }
  const double total = stable_sum(products);
  if (!(total > 0.0)) throw Error(ErrorKind::DegeneratePriors, "sum of lambda_j * W_j is zero");
  for (double& v : products) v /= total;
  return products;
}

EntropyTable table_from_entropies(const std::vector<std::string>& ids, std::span<const double> entropies,
                                  std::optional<std::span<const double>> priors) {
  if (ids.size() != entropies.size()) {
    throw Error(ErrorKind::InvalidConfig, std::to_string(ids.size()) + " ids for " +
                                              std::to_string(entropies.size()) + " entropies");
  }
  for (std::size_t j = 0; j < entropies.size(); ++j) {
    if (!(entropies[j] >= 0.0 && entropies[j] <= 1.0)) {
      throw Error(ErrorKind::InvalidConfig, "entropy of " + ids[j] + " is outside [0, 1]");
    }
  }
  const auto d = divergence(entropies);
  const auto w = entropy_weights(d);
  std::vector<double> adjusted;
  if (priors) adjusted = adjust_weights(w, *priors);

  EntropyTable table;
  table.reserve(ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    EntropyRow row{ids[j], entropies[j], d[j], w[j], std::nullopt, std::nullopt};
    if (priors) {
      row.lambda = (*priors)[j];
      row.w_adj = adjusted[j];
    }
    table.push_back(std::move(row));
  }
  return table;
}

EntropyTable entropy_table(const DecisionMatrix& d, std::optional<std::span<const double>> priors) {
  const auto p = column_normalize(d);
  const auto e = entropy_values(p);
  return table_from_entropies(d.column_ids(), e, priors);
}

std::vector<std::pair<std::string, double>> read_priors_csv(std::istream& in, std::string_view source) {
  const auto t = csv::read(in, source);
  csv::expect_header(t, {"indicator", "lambda"}, source);
  std::vector<std::pair<std::string, double>> out;
  for (const auto& row : t.rows) {
    const double lambda = csv::parse_number(row.fields[1], source, row.line, "lambda");
    if (lambda < 0.0) {
      throw Error(ErrorKind::ParseError, std::string(source) + ":" + std::to_string(row.line) + ": lambda must be >= 0");
    }
    for (const auto& [id, _] : out) {
      if (id == row.fields[0]) {
        throw Error(ErrorKind::ParseError, std::string(source) + ":" + std::to_string(row.line) +
                                               ": duplicate indicator " + id);
      }
    }
    out.emplace_back(row.fields[0], lambda);
  }
  return out;
}

namespace {

void put_full(std::ostream& out, double v) { out << csv::shortest(v); }

}  // namespace

void write_table_csv(std::ostream& out, const EntropyTable& table) {
  out << "indicator,E,d,W,lambda,W_adj\n";
  for (const auto& r : table) {
    out << csv::escape(r.indicator) << ',';
    put_full(out, r.e);
    out << ',';
    put_full(out, r.d);
    out << ',';
    put_full(out, r.w);
    out << ',';
    if (r.lambda) put_full(out, *r.lambda);
    out << ',';
    if (r.w_adj) put_full(out, *r.w_adj);
    out << '\n';
  }
}

EntropyTable read_table_csv(std::istream& in, std::string_view source) {
  const auto t = csv::read(in, source);
  csv::expect_header(t, {"indicator", "E", "d", "W", "lambda", "W_adj"}, source);
  EntropyTable table;
  for (const auto& row : t.rows) {
    const auto& f = row.fields;
    EntropyRow r;
    r.indicator = f[0];
    r.e = csv::parse_number(f[1], source, row.line, "E");
    r.d = csv::parse_number(f[2], source, row.line, "d");
    r.w = csv::parse_number(f[3], source, row.line, "W");
    if (!f[4].empty()) r.lambda = csv::parse_number(f[4], source, row.line, "lambda");
    if (!f[5].empty()) r.w_adj = csv::parse_number(f[5], source, row.line, "W_adj");
    table.push_back(std::move(r));
  }
  return table;
}

nlohmann::json to_json(const EntropyTable& table) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : table) {
    nlohmann::json row = {{"indicator", r.indicator}, {"E", r.e}, {"d", r.d}, {"W", r.w}};
    row["lambda"] = r.lambda ? nlohmann::json(*r.lambda) : nlohmann::json(nullptr);
    row["W_adj"] = r.w_adj ? nlohmann::json(*r.w_adj) : nlohmann::json(nullptr);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace beliefrank::entropy
