#include "beliefrank/selftest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>

#include "beliefrank/entropy.hpp"
#include "beliefrank/evidence.hpp"
#include "beliefrank/fixtures.hpp"
#include "beliefrank/fuzzy.hpp"
#include "beliefrank/oracle.hpp"
#include "beliefrank/pipeline.hpp"

namespace beliefrank::selftest {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_mass_diff(const Bpa& a, const Bpa& b) {
  double worst = 0.0;
  for (int s = 0; s < a.frame().subset_count(); ++s) {
    const Subset sub = Subset::from_mask(static_cast<std::uint8_t>(s));
    worst = std::max(worst, std::abs(a.mass(sub) - b.mass(sub)));
  }
  return worst;
}

struct CombinationResultOrError {
  std::optional<evidence::CombinationResult> result;
  std::optional<ErrorKind> error;
  bool operator==(const CombinationResultOrError&) const = default;
};

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back((cond ? "" : "FAILED ") + what);
  }
  std::string detail() const {
    std::string out;
    for (const auto& n : notes) out += (out.empty() ? "" : "; ") + n;
    return out;
  }
};

// 1: d = 1 - E on every fixture row.
Check entropy_relation() {
  Check c;
  double worst = 0.0;
  for (const auto& row : fixtures::reference_weights()) worst = std::max(worst, std::abs(row.d - (1.0 - row.e)));
  c.expect(fixtures::reference_weights().size() == 14, "14 rows");
  c.expect(worst <= 5e-4, "max |d - (1 - E)| = " + sci(worst) + " <= 5e-4");
  return c;
}

// 2: average of the fixture window rows against the fixture Average row.
Check window_average() {
  Check c;
  std::vector<Bpa> rows;
  for (const auto& w : fixtures::reference_windows()) rows.push_back(w.bpa);
  const Bpa avg = evidence::average_bpas(rows);
  double worst = 0.0;
  for (const auto& [subset, fixture] : fixtures::reference_average()) {
    worst = std::max(worst, std::abs(avg.mass(subset) - fixture));
  }
  c.expect(rows.size() == 6, "6 window rows");
  c.expect(worst <= 0.005, "max cell deviation = " + sci(worst) + " <= 0.005");
  return c;
}

// 3: ranking claims over the fixture W and W' columns.
Check ranking_claims() {
  Check c;
  std::vector<std::pair<std::string, double>> w;
  std::vector<std::pair<std::string, double>> w_adj;
  for (const auto& row : fixtures::reference_weights()) {
    w.emplace_back(row.indicator, row.w);
    w_adj.emplace_back(row.indicator, row.w_adj.value_or(0.0));
  }
  const auto by_w = evidence::rank(w, "W");
  const auto by_w_adj = evidence::rank(w_adj, "W'");
  c.expect(by_w.top == "B8", "top by W = " + by_w.top);
  c.expect(by_w_adj.bottom == "B6", "bottom by W' = " + by_w_adj.bottom);
  return c;
}

// 4: window 4 / stride 2 over B1..B14 gives the fixture row labels.
Check window_structure() {
  Check c;
  std::vector<std::string> ids;
  for (const auto& ind : indicator_catalog()) ids.push_back(ind.id);
  const auto ranges = pipeline::sliding_windows(static_cast<int>(ids.size()), 4, 2);
  std::vector<std::string> labels;
  for (const auto& r : ranges) labels.push_back(pipeline::window_label(ids, r));
  std::vector<std::string> fixture;
  for (const auto& w : fixtures::reference_windows()) fixture.push_back(w.label);
  c.expect(labels.size() == 6, std::to_string(labels.size()) + " windows");
  c.expect(labels == fixture, "labels match the fixture rows");
  return c;
}

// 5: the fixture W / W' columns do not follow from E and lambda, so they stay
// fixed inputs. The check confirms that the recomputation really differs,
// and that the fixture window rows are only used through their average.
Check non_reproducible() {
  Check c;
  const auto& table = fixtures::reference_weights();
  std::vector<std::string> ids;
  std::vector<double> e;
  std::vector<double> lambda;
  for (const auto& row : table) {
    ids.push_back(row.indicator);
    e.push_back(row.e);
    lambda.push_back(*row.lambda);
  }
  const auto recomputed = entropy::table_from_entropies(ids, e, std::span<const double>(lambda));
  double w_gap = 0.0;
  double w_adj_gap = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    w_gap = std::max(w_gap, std::abs(recomputed[i].w - table[i].w));
    w_adj_gap = std::max(w_adj_gap, std::abs(*recomputed[i].w_adj - *table[i].w_adj));
  }
  double fixture_w_sum = 0.0;
  for (const auto& row : table) fixture_w_sum += row.w;
  c.expect(w_gap > 0.05, "recomputed W differs from fixture W by up to " + sci(w_gap));
  c.expect(w_adj_gap > 0.05, "recomputed W' differs from fixture W' by up to " + sci(w_adj_gap));
  c.expect(std::abs(fixture_w_sum - 1.0) > 0.05, "fixture W sums to " + sci(fixture_w_sum));
  c.expect(recomputed.front().w > 0.0 && std::abs(recomputed[0].w - 0.034 / 0.758) < 1e-3,
           "B1 recomputed W = " + sci(recomputed[0].w));
  return c;
}

// 6: fuzzy partition properties on a 10,001 point grid.
Check fuzzy_properties() {
  Check c;
  constexpr int kPoints = 10'001;
  double worst_sum = 0.0;
  double worst_lipschitz = 0.0;
  bool adjacent = true;
  fuzzy::MembershipVector prev;
  double prev_x = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double x = 10.0 * i / (kPoints - 1);
    const auto mu = fuzzy::membership(x);
    double total = 0.0;
    for (double v : mu.mu) total += v;
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    const auto active = mu.active();
    if (active.empty() || active.size() > 2) adjacent = false;
    if (active.size() == 2 && grade_index(active[1]) - grade_index(active[0]) != 1) adjacent = false;
    if (i > 0) {
      for (std::size_t l = 0; l < mu.mu.size(); ++l) {
        const double slope = std::abs(mu.mu[l] - prev.mu[l]) / (x - prev_x);
        worst_lipschitz = std::max(worst_lipschitz, slope);
      }
    }
    prev = mu;
    prev_x = x;
  }
  Rng rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  double worst_pair = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    if (x == y) continue;
    const auto a = fuzzy::membership(x);
    const auto b = fuzzy::membership(y);
    for (std::size_t l = 0; l < a.mu.size(); ++l) {
      worst_pair = std::max(worst_pair, std::abs(a.mu[l] - b.mu[l]) - 0.4 * std::abs(x - y));
    }
  }
  c.expect(worst_sum <= 1e-12, "max |sum mu - 1| = " + sci(worst_sum));
  c.expect(adjacent, "nonzero labels adjacent");
  c.expect(worst_lipschitz <= 0.4 + 1e-9, "max grid slope = " + sci(worst_lipschitz));
  c.expect(worst_pair <= 1e-12, "random-pair Lipschitz excess = " + sci(worst_pair));
  return c;
}

// 7: Dempster's rule against the dense oracle and its algebraic properties.
Check evidence_properties() {
  Check c;
  Rng rng(kSeed + 7);

  int pairs = 0;
  double oracle_gap = 0.0;
  double commute_gap = 0.0;
  while (pairs < 1000) {
    const Bpa a = random_bpa(rng);
    const Bpa b = random_bpa(rng);
    if (1.0 - evidence::conflict(a, b) <= evidence::kTotalConflictTolerance) continue;
    const auto ab = evidence::dempster_combine(a, b);
    const auto ba = evidence::dempster_combine(b, a);
    const auto brute = oracle::brute_force_combine(a, b);
    oracle_gap = std::max({oracle_gap, max_mass_diff(ab.bpa, brute.bpa), std::abs(ab.conflict_k - brute.conflict_k)});
    commute_gap = std::max({commute_gap, max_mass_diff(ab.bpa, ba.bpa), std::abs(ab.conflict_k - ba.conflict_k)});
    ++pairs;
  }

  int triples = 0;
  double assoc_gap = 0.0;
  while (triples < 500) {
    const Bpa a = random_bpa(rng);
    const Bpa b = random_bpa(rng);
    const Bpa x = random_bpa(rng);
    if (evidence::conflict(a, b) >= 0.99 || evidence::conflict(b, x) >= 0.99 || evidence::conflict(a, x) >= 0.99) {
      continue;
    }
    const Bpa ab = evidence::dempster_combine(a, b).bpa;
    const Bpa bx = evidence::dempster_combine(b, x).bpa;
    if (evidence::conflict(ab, x) >= 0.99 || evidence::conflict(a, bx) >= 0.99) continue;
    const Bpa left = evidence::dempster_combine(ab, x).bpa;
    const Bpa right = evidence::dempster_combine(a, bx).bpa;
    assoc_gap = std::max(assoc_gap, max_mass_diff(left, right));
    ++triples;
  }

  bool identity = true;
  for (int i = 0; i < 200; ++i) {
    const Bpa a = random_bpa(rng);
    const auto left = evidence::dempster_combine(Bpa::vacuous(), a);
    const auto right = evidence::dempster_combine(a, Bpa::vacuous());
    identity = identity && left.bpa == a && right.bpa == a && left.conflict_k == 0.0 && right.conflict_k == 0.0;
  }

  bool total_conflict = false;
  try {
    const Bpa vl = validate_bpa({{Subset::singleton(Label::VeryLow), 1.0}});
    const Bpa vh = validate_bpa({{Subset::singleton(Label::VeryHigh), 1.0}});
    evidence::dempster_combine(vl, vh);
  } catch (const Error& e) {
    total_conflict = e.kind() == ErrorKind::TotalConflict;
  }

  bool permutation = true;
  std::uniform_int_distribution<int> count(2, 6);
  for (int i = 0; i < 100; ++i) {
    std::vector<Bpa> inputs;
    const int n = count(rng);
    for (int j = 0; j < n; ++j) inputs.push_back(random_bpa(rng));
    CombinationResultOrError reference;
    try {
      reference.result = evidence::murphy_combine(inputs);
    } catch (const Error& e) {
      reference.error = e.kind();
    }
    for (int p = 0; p < 5; ++p) {
      std::shuffle(inputs.begin(), inputs.end(), rng);
      CombinationResultOrError other;
      try {
        other.result = evidence::murphy_combine(inputs);
      } catch (const Error& e) {
        other.error = e.kind();
      }
      permutation = permutation && other == reference;
    }
  }

  c.expect(oracle_gap <= 1e-9, std::to_string(pairs) + " pairs, max oracle gap = " + sci(oracle_gap));
  c.expect(commute_gap <= 1e-12, "max commutativity gap = " + sci(commute_gap));
  c.expect(assoc_gap <= 1e-9, std::to_string(triples) + " triples, max associativity gap = " + sci(assoc_gap));
  c.expect(identity, "vacuous identity exact");
  c.expect(total_conflict, "TotalConflict on {VL}:1 vs {VH}:1");
  c.expect(permutation, "murphy_combine permutation invariant");
  return c;
}

// 8: entropy weighting invariances.
Check weighting_properties() {
  Check c;
  Rng rng(kSeed + 8);
  std::uniform_real_distribution<double> value(0.1, 10.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_int_distribution<int> dim(2, 9);

  double scale_gap = 0.0;
  double perm_gap = 0.0;
  double w_sum_gap = 0.0;
  double w_adj_sum_gap = 0.0;
  double uniform_prior_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = dim(rng);
    const int n = dim(rng);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : rows) {
      for (auto& v : row) v = value(rng);
    }
    std::vector<std::string> ids;
    for (int j = 0; j < n; ++j) ids.push_back("C" + std::to_string(j + 1));
    const auto base = entropy::entropy_values(entropy::column_normalize(entropy::DecisionMatrix::make(rows, ids)));

    auto scaled = rows;
    for (int j = 0; j < n; ++j) {
      const double f = scale(rng);
      for (auto& row : scaled) row[static_cast<std::size_t>(j)] *= f;
    }
    const auto e_scaled = entropy::entropy_values(entropy::column_normalize(entropy::DecisionMatrix::make(scaled, ids)));

    auto permuted = rows;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    const auto e_perm = entropy::entropy_values(entropy::column_normalize(entropy::DecisionMatrix::make(permuted, ids)));

    for (int j = 0; j < n; ++j) {
      scale_gap = std::max(scale_gap, std::abs(base[j] - e_scaled[j]));
      perm_gap = std::max(perm_gap, std::abs(base[j] - e_perm[j]));
    }

    const auto d = entropy::divergence(base);
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) continue;
    const auto w = entropy::entropy_weights(d);
    std::vector<double> priors(static_cast<std::size_t>(n));
    for (auto& p : priors) p = value(rng);
    const auto w_adj = entropy::adjust_weights(w, priors);
    const std::vector<double> uniform(static_cast<std::size_t>(n), 1.0 / n);
    const auto w_uniform = entropy::adjust_weights(w, uniform);
    w_sum_gap = std::max(w_sum_gap, std::abs(stable_sum(w) - 1.0));
    w_adj_sum_gap = std::max(w_adj_sum_gap, std::abs(stable_sum(w_adj) - 1.0));
    for (int j = 0; j < n; ++j) uniform_prior_gap = std::max(uniform_prior_gap, std::abs(w_uniform[j] - w[j]));
  }

  const auto edge = entropy::entropy_values(entropy::column_normalize(
      entropy::DecisionMatrix::make({{3.0, 1.0}, {3.0, 0.0}, {3.0, 0.0}, {3.0, 0.0}}, {"uniform", "point"})));

  c.expect(scale_gap <= 1e-12, "column scale gap = " + sci(scale_gap));
  c.expect(perm_gap <= 1e-12, "row permutation gap = " + sci(perm_gap));
  c.expect(w_sum_gap <= 1e-12, "|sum W - 1| = " + sci(w_sum_gap));
  c.expect(w_adj_sum_gap <= 1e-12, "|sum W' - 1| = " + sci(w_adj_sum_gap));
  c.expect(uniform_prior_gap <= 1e-12, "uniform prior gap = " + sci(uniform_prior_gap));
  c.expect(edge[0] == 1.0, "uniform column E = " + sci(edge[0]));
  c.expect(edge[1] == 0.0 && !std::signbit(edge[1]), "point mass E = " + sci(edge[1]));
  return c;
}

// 9: pairwise comparison properties.
Check ahp_properties() {
  Check c;
  Rng rng(kSeed + 9);
  const auto ri = ahp::RiTable::saaty();

  double recip_gap = 0.0;
  std::uniform_int_distribution<int> experts(2, 6);
  std::uniform_int_distribution<int> order(2, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = order(rng);
    std::vector<ahp::PairwiseMatrix> set;
    const int k = experts(rng);
    for (int e = 0; e < k; ++e) set.push_back(random_saaty_matrix(rng, n));
    const auto g = ahp::aggregate_geometric(set);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) recip_gap = std::max(recip_gap, std::abs(g(i, j) * g(j, i) - 1.0));
    }
  }

  bool lambda_bound = true;
  int lambda_checked = 0;
  double worst_shortfall = 0.0;
  double oracle_gap = 0.0;
  for (int n = 3; n <= 9; ++n) {
    for (int t = 0; t < 100; ++t) {
      const auto m = random_saaty_matrix(rng, n);
      const double lambda = ahp::principal_eigenvalue(m);
      if (!(lambda >= n)) {
        lambda_bound = false;
        worst_shortfall = std::max(worst_shortfall, n - lambda);
      }
      ++lambda_checked;
      if (n <= 5) oracle_gap = std::max(oracle_gap, std::abs(lambda - oracle::largest_eigenvalue_bisection(m.rows())));
    }
  }
  const auto example = ahp::PairwiseMatrix::make({{1, 2, 6}, {0.5, 1, 2}, {1.0 / 6, 0.5, 1}});
  const double example_lambda = ahp::principal_eigenvalue(example);
  oracle_gap = std::max(oracle_gap, std::abs(example_lambda - oracle::largest_eigenvalue_bisection(example.rows())));
  const auto example_report = ahp::consistency(example, ri);

  bool consistent_ok = true;
  for (int n = 3; n <= 10; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto r = ahp::consistency(random_consistent_matrix(rng, n), ri);
      consistent_ok = consistent_ok && r.cr == 0.0 && r.acceptable;
    }
  }

  c.expect(recip_gap <= 1e-9, "geometric mean reciprocity gap = " + sci(recip_gap));
  c.expect(lambda_bound, std::to_string(lambda_checked) + " matrices with lambda_max >= n" +
                             (lambda_bound ? "" : " (shortfall " + sci(worst_shortfall) + ")"));
  c.expect(consistent_ok, "consistent matrices give CR = 0 and acceptable");
  c.expect(oracle_gap <= 1e-7, "lambda_max oracle gap (n <= 5) = " + sci(oracle_gap));
  c.expect(example_report.ci >= 0.0, "3x3 example CI = " + sci(example_report.ci));
  return c;
}

}  // namespace

Bpa random_bpa(Rng& rng, int max_focal) {
  const Frame frame;
  std::uniform_int_distribution<int> count(1, max_focal);
  std::uniform_int_distribution<int> mask(1, frame.subset_count() - 1);
  std::uniform_real_distribution<double> weight(0.01, 1.0);
  MassMap raw;
  const int focal = count(rng);
  for (int i = 0; i < focal; ++i) raw[Subset::from_mask(static_cast<std::uint8_t>(mask(rng)))] += weight(rng);
  std::vector<double> values;
  for (const auto& [_, v] : raw) values.push_back(v);
  const double total = stable_sum(values);
  for (auto& [_, v] : raw) v /= total;
  return validate_bpa(raw, frame);
}

ahp::PairwiseMatrix random_saaty_matrix(Rng& rng, int n) {
  static constexpr std::array<double, 17> kScale = {1.0 / 9, 1.0 / 8, 1.0 / 7, 1.0 / 6, 1.0 / 5, 1.0 / 4,
                                                    1.0 / 3, 1.0 / 2, 1,       2,       3,       4,
                                                    5,       6,       7,       8,       9};
  std::uniform_int_distribution<std::size_t> pick(0, kScale.size() - 1);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = kScale[pick(rng)];
      rows[i][j] = v;
      rows[j][i] = 1.0 / v;
    }
  }
  return ahp::PairwiseMatrix::make(rows);
}

ahp::PairwiseMatrix random_consistent_matrix(Rng& rng, int n) {
  std::uniform_real_distribution<double> weight(0.1, 10.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (auto& v : w) v = weight(rng);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      rows[i][j] = w[i] / w[j];
      rows[j][i] = 1.0 / rows[i][j];
    }
  }
  return ahp::PairwiseMatrix::make(rows);
}

CriterionResult run_criterion(int id) {
  static const std::vector<std::pair<std::string, std::function<Check()>>> kCriteria = {
      {"entropy relation d = 1 - E", entropy_relation},
      {"window average row", window_average},
      {"ranking claims", ranking_claims},
      {"window structure", window_structure},
      {"fixture weights not reproducible", non_reproducible},
      {"fuzzy properties", fuzzy_properties},
      {"evidence properties", evidence_properties},
      {"weighting properties", weighting_properties},
      {"ahp properties", ahp_properties},
  };
  if (id < 1 || id > static_cast<int>(kCriteria.size())) {
    throw Error(ErrorKind::InvalidConfig, "no selftest criterion " + std::to_string(id));
  }
  const auto& [name, fn] = kCriteria[static_cast<std::size_t>(id - 1)];
  CriterionResult r{id, name, false, {}, 0.0};
  const auto start = std::chrono::steady_clock::now();
  try {
    const Check c = fn();
    r.passed = c.ok;
    r.detail = c.detail();
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if ((id == 1 || id == 2) && r.seconds >= 1.0) {
    r.passed = false;
    r.detail += "; runtime " + sci(r.seconds) + " s exceeds 1 s";
  }
  return r;
}

std::vector<CriterionResult> run_selftest() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 9; ++id) out.push_back(run_criterion(id));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3f s", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " (" + r.name + ", " +
         timing + "): " + r.detail;
}

}  // namespace beliefrank::selftest
