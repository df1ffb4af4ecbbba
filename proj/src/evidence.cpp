#include "beliefrank/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace beliefrank::evidence {

namespace {

void require_same_frame(const Bpa& a, const Bpa& b) {
  if (a.frame() != b.frame()) {
    throw Error(ErrorKind::FrameMismatch, "frames of size " + std::to_string(a.frame().size()) + " and " +
                                              std::to_string(b.frame().size()) + " cannot be combined");
  }
}

// Order-independent sum: sort, then compensated accumulation.
double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return stable_sum(values);
}

}  // namespace

double conflict(const Bpa& m1, const Bpa& m2) {
  require_same_frame(m1, m2);
  std::vector<double> products;
  for (const auto& [b, mb] : m1.masses()) {
    for (const auto& [c, mc] : m2.masses()) {
      if (intersect(b, c).empty()) products.push_back(mb * mc);
    }
  }
  return sorted_sum(std::move(products));
}

CombinationResult dempster_combine(const Bpa& m1, const Bpa& m2) {
  require_same_frame(m1, m2);
  std::map<Subset, std::vector<double>> products;
  std::vector<double> conflicting;
  for (const auto& [b, mb] : m1.masses()) {
    for (const auto& [c, mc] : m2.masses()) {
      const Subset a = intersect(b, c);
      if (a.empty()) {
        conflicting.push_back(mb * mc);
      } else {
        products[a].push_back(mb * mc);
      }
    }
  }
  const double k = sorted_sum(conflicting);

  MassMap combined;
  std::vector<double> agreeing;
  for (auto& [a, list] : products) {
    const double m = sorted_sum(std::move(list));
    combined[a] = m;
    agreeing.push_back(m);
  }
  // The agreeing mass is 1 - k, but summing it directly stays accurate when k is close to one.
  const double normalizer = sorted_sum(std::move(agreeing));
  if (1.0 - k <= kTotalConflictTolerance || normalizer <= kTotalConflictTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "conflict k = " << k << "; Dempster's rule is undefined";
    throw Error(ErrorKind::TotalConflict, msg.str());
  }
  if (k != 0.0) {
    for (auto& [a, m] : combined) m /= normalizer;
  }
  return {prune_and_validate(combined, m1.frame()), k};
}

Bpa average_bpas(std::span<const Bpa> bpas) {
  if (bpas.empty()) throw Error(ErrorKind::EmptyInput, "no BPAs to average");
  const Frame frame = bpas.front().frame();
  std::map<Subset, std::vector<double>> contributions;
  for (const auto& b : bpas) {
    if (b.frame() != frame) throw Error(ErrorKind::FrameMismatch, "BPAs to average use different frames");
    for (const auto& [s, m] : b.masses()) contributions[s].push_back(m);
  }
  if (bpas.size() == 1) return bpas.front();
  const double n = static_cast<double>(bpas.size());
  MassMap mean;
  for (auto& [s, list] : contributions) mean[s] = sorted_sum(std::move(list)) / n;
  return validate_bpa(mean, frame);
}

CombinationResult murphy_combine(std::span<const Bpa> bpas) {
  if (bpas.empty()) throw Error(ErrorKind::EmptyInput, "no BPAs to combine");
  const Bpa average = average_bpas(bpas);
  CombinationResult result{average, 0.0};
  for (std::size_t i = 1; i < bpas.size(); ++i) result = dempster_combine(result.bpa, average);
  return result;
}

std::vector<double> pignistic(const Bpa& b) {
  const int n = b.frame().size();
  std::vector<std::vector<double>> shares(static_cast<std::size_t>(n));
  for (const auto& [s, m] : b.masses()) {
    const double share = m / s.size();
    for (Label l : s.members()) shares[static_cast<std::size_t>(grade_index(l))].push_back(share);
  }
  std::vector<double> out;
  out.reserve(shares.size());
  for (auto& list : shares) out.push_back(sorted_sum(std::move(list)));
  return out;
}

RankingReport rank(const std::vector<std::pair<std::string, double>>& values, std::string method) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "nothing to rank");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].second)) {
      throw Error(ErrorKind::InvalidConfig, "value for " + values[i].first + " is not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (values[i].first == values[j].first) {
        throw Error(ErrorKind::InvalidConfig, "indicator " + values[i].first + " listed twice");
      }
    }
  }
  auto order = values;
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return indicator_id_less(a.first, b.first);
  });
  RankingReport r;
  r.method = std::move(method);
  for (std::size_t i = 0; i < order.size(); ++i) {
    r.entries.push_back({order[i].first, order[i].second, static_cast<int>(i + 1)});
  }
  r.top = r.entries.front().indicator;
  r.bottom = r.entries.back().indicator;
  return r;
}

nlohmann::json to_json(const CombinationResult& r) {
  auto doc = bpa_to_json(r.bpa);
  nlohmann::json betp = nlohmann::json::object();
  const auto p = pignistic(r.bpa);
  const auto labels = r.bpa.frame().labels();
  for (std::size_t i = 0; i < labels.size(); ++i) betp[std::string(short_name(labels[i]))] = p[i];
  return {{"conflict_k", r.conflict_k}, {"masses", doc.at("masses")}, {"betp", betp}};
}

nlohmann::json to_json(const RankingReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) entries.push_back({{"indicator", e.indicator}, {"value", e.value}, {"rank", e.rank}});
  return {{"method", r.method}, {"top", r.top}, {"bottom", r.bottom}, {"entries", entries}};
}

}  // namespace beliefrank::evidence
