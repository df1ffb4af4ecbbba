#include <gtest/gtest.h>

#include <algorithm>

#include "beliefrank/evidence.hpp"
#include "beliefrank/fixtures.hpp"
#include "beliefrank/oracle.hpp"
#include "beliefrank/selftest.hpp"

using namespace beliefrank;
using namespace beliefrank::evidence;
using enum Label;

namespace {

const Subset kTheta = Frame{}.theta();
const Subset kH = Subset::singleton(High);

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

double max_gap(const Bpa& a, const Bpa& b) {
  double worst = 0.0;
  for (int s = 0; s < 32; ++s) {
    const Subset sub = Subset::from_mask(static_cast<std::uint8_t>(s));
    worst = std::max(worst, std::abs(a.mass(sub) - b.mass(sub)));
  }
  return worst;
}

Bpa h06() { return validate_bpa({{kH, 0.6}, {kTheta, 0.4}}); }

struct Example {
  Bpa m1;
  Bpa m2;
};

std::vector<Example> worked_examples() {
  return {
      {h06(), Bpa::vacuous()},
      {h06(), h06()},
      {validate_bpa({{Subset::singleton(VeryLow), 0.99}, {Subset::singleton(Low), 0.01}}),
       validate_bpa({{Subset::singleton(Low), 0.01}, {Subset::singleton(VeryHigh), 0.99}})},
      {h06(), validate_bpa({{Subset::singleton(Medium), 0.5}, {kTheta, 0.5}})},
  };
}

}  // namespace

TEST(Conflict, Examples) {
  EXPECT_EQ(conflict(h06(), Bpa::vacuous()), 0.0);
  EXPECT_EQ(conflict(validate_bpa({{Subset::singleton(VeryLow), 1.0}}), validate_bpa({{Subset::singleton(VeryHigh), 1.0}})),
            1.0);
  EXPECT_NEAR(conflict(h06(), validate_bpa({{Subset::singleton(Medium), 0.5}, {kTheta, 0.5}})), 0.3, 1e-15);
}

TEST(Conflict, FrameMismatch) {
  EXPECT_EQ(kind_of([] { conflict(Bpa::vacuous(Frame(3)), Bpa::vacuous()); }), ErrorKind::FrameMismatch);
  EXPECT_EQ(kind_of([] { dempster_combine(Bpa::vacuous(Frame(3)), Bpa::vacuous()); }), ErrorKind::FrameMismatch);
}

TEST(Dempster, Examples) {
  EXPECT_EQ(dempster_combine(h06(), Bpa::vacuous()).bpa, h06());

  const auto same = dempster_combine(h06(), h06());
  EXPECT_NEAR(same.bpa.mass(kH), 0.84, 1e-15);
  EXPECT_NEAR(same.bpa.mass(kTheta), 0.16, 1e-15);
  EXPECT_EQ(same.conflict_k, 0.0);

  const auto zadeh = dempster_combine(validate_bpa({{Subset::singleton(VeryLow), 0.99}, {Subset::singleton(Low), 0.01}}),
                                      validate_bpa({{Subset::singleton(Low), 0.01}, {Subset::singleton(VeryHigh), 0.99}}));
  EXPECT_NEAR(zadeh.conflict_k, 0.9999, 1e-12);
  EXPECT_NEAR(zadeh.bpa.mass(Subset::singleton(Low)), 1.0, 1e-12);
  EXPECT_EQ(zadeh.bpa.focal_elements().size(), 1u);
}

TEST(Dempster, TotalConflict) {
  const Bpa vl = validate_bpa({{Subset::singleton(VeryLow), 1.0}});
  const Bpa vh = validate_bpa({{Subset::singleton(VeryHigh), 1.0}});
  EXPECT_EQ(kind_of([&] { dempster_combine(vl, vh); }), ErrorKind::TotalConflict);
  EXPECT_EQ(kind_of([&] { oracle::brute_force_combine(vl, vh); }), ErrorKind::TotalConflict);
}

TEST(Dempster, OracleAgreesOnWorkedExamples) {
  for (const auto& ex : worked_examples()) {
    const auto fast = dempster_combine(ex.m1, ex.m2);
    const auto brute = oracle::brute_force_combine(ex.m1, ex.m2);
    EXPECT_LE(max_gap(fast.bpa, brute.bpa), 1e-12);
    EXPECT_NEAR(fast.conflict_k, brute.conflict_k, 1e-12);
  }
}

TEST(Dempster, OracleAgreesOnRandomPairs) {
  selftest::Rng rng(13);
  int checked = 0;
  while (checked < 1000) {
    const Bpa a = selftest::random_bpa(rng);
    const Bpa b = selftest::random_bpa(rng);
    if (1.0 - conflict(a, b) <= kTotalConflictTolerance) continue;
    const auto fast = dempster_combine(a, b);
    const auto brute = oracle::brute_force_combine(a, b);
    ASSERT_LE(max_gap(fast.bpa, brute.bpa), 1e-9);
    ++checked;
  }
}

TEST(Dempster, OracleOnSmallerFrames) {
  selftest::Rng rng(14);
  for (int size = 1; size <= 4; ++size) {
    const Frame frame(size);
    std::uniform_int_distribution<int> mask(1, frame.subset_count() - 1);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    for (int t = 0; t < 100; ++t) {
      auto make = [&] {
        MassMap raw;
        for (int i = 0; i < 3; ++i) raw[Subset::from_mask(static_cast<std::uint8_t>(mask(rng)))] += w(rng);
        double total = 0.0;
        for (const auto& [_, v] : raw) total += v;
        for (auto& [_, v] : raw) v /= total;
        return validate_bpa(raw, frame);
      };
      const Bpa a = make();
      const Bpa b = make();
      if (1.0 - conflict(a, b) <= kTotalConflictTolerance) continue;
      EXPECT_LE(max_gap(dempster_combine(a, b).bpa, oracle::brute_force_combine(a, b).bpa), 1e-12);
    }
  }
}

TEST(Dempster, AlgebraicProperties) {
  selftest::Rng rng(15);
  for (int t = 0; t < 500; ++t) {
    const Bpa a = selftest::random_bpa(rng);
    const Bpa b = selftest::random_bpa(rng);
    if (1.0 - conflict(a, b) <= kTotalConflictTolerance) continue;
    const auto ab = dempster_combine(a, b);
    const auto ba = dempster_combine(b, a);
    EXPECT_LE(max_gap(ab.bpa, ba.bpa), 1e-12);
    EXPECT_NEAR(ab.conflict_k, conflict(a, b), 1e-12);
    EXPECT_EQ(dempster_combine(a, Bpa::vacuous()).bpa, a);
    EXPECT_EQ(dempster_combine(Bpa::vacuous(), a).bpa, a);
  }
}

TEST(Dempster, Associativity) {
  selftest::Rng rng(16);
  int checked = 0;
  while (checked < 500) {
    const Bpa a = selftest::random_bpa(rng);
    const Bpa b = selftest::random_bpa(rng);
    const Bpa c = selftest::random_bpa(rng);
    if (conflict(a, b) >= 0.99 || conflict(b, c) >= 0.99 || conflict(a, c) >= 0.99) continue;
    const Bpa ab = dempster_combine(a, b).bpa;
    const Bpa bc = dempster_combine(b, c).bpa;
    if (conflict(ab, c) >= 0.99 || conflict(a, bc) >= 0.99) continue;
    EXPECT_LE(max_gap(dempster_combine(ab, c).bpa, dempster_combine(a, bc).bpa), 1e-9);
    ++checked;
  }
}

TEST(Average, Examples) {
  const std::vector<Bpa> one = {h06()};
  EXPECT_EQ(average_bpas(one), h06());
  const std::vector<Bpa> two = {validate_bpa({{kH, 1.0}}), Bpa::vacuous()};
  const Bpa avg = average_bpas(two);
  EXPECT_EQ(avg.mass(kH), 0.5);
  EXPECT_EQ(avg.mass(kTheta), 0.5);
  EXPECT_EQ(kind_of([] { average_bpas({}); }), ErrorKind::EmptyInput);
  const std::vector<Bpa> mixed = {Bpa::vacuous(), Bpa::vacuous(Frame(3))};
  EXPECT_EQ(kind_of([&] { average_bpas(mixed); }), ErrorKind::FrameMismatch);
}

TEST(Average, PublishedWindowRows) {
  std::vector<Bpa> rows;
  for (const auto& w : fixtures::reference_windows()) rows.push_back(w.bpa);
  const Bpa avg = average_bpas(rows);
  for (const auto& [subset, printed] : fixtures::reference_average()) {
    EXPECT_NEAR(avg.mass(subset), printed, 0.005) << to_string(subset);
  }
  EXPECT_NEAR(avg.mass(Subset::of({VeryLow, Low})), 0.04 / 6, 1e-12);
  EXPECT_NEAR(avg.mass(kH), 0.1, 1e-12);
}

TEST(Murphy, Examples) {
  const std::vector<Bpa> one = {h06()};
  EXPECT_EQ(murphy_combine(one).bpa, h06());
  const std::vector<Bpa> two = {h06(), h06()};
  const auto r = murphy_combine(two);
  EXPECT_NEAR(r.bpa.mass(kH), 0.84, 1e-15);
  EXPECT_NEAR(r.bpa.mass(kTheta), 0.16, 1e-15);
  EXPECT_EQ(kind_of([] { murphy_combine({}); }), ErrorKind::EmptyInput);
}

TEST(Murphy, SelfCombinationCount) {
  selftest::Rng rng(17);
  for (int n = 2; n <= 5; ++n) {
    std::vector<Bpa> inputs;
    for (int i = 0; i < n; ++i) inputs.push_back(selftest::random_bpa(rng));
    const Bpa avg = average_bpas(inputs);
    Bpa expected = avg;
    for (int i = 1; i < n; ++i) expected = oracle::brute_force_combine(expected, avg).bpa;
    EXPECT_LE(max_gap(murphy_combine(inputs).bpa, expected), 1e-9);
  }
}

TEST(Murphy, PermutationInvariantExactly) {
  selftest::Rng rng(18);
  for (int t = 0; t < 50; ++t) {
    std::vector<Bpa> inputs;
    for (int i = 0; i < 5; ++i) inputs.push_back(selftest::random_bpa(rng));
    const auto reference = murphy_combine(inputs);
    std::sort(inputs.begin(), inputs.end(), [](const Bpa& a, const Bpa& b) { return a.masses() < b.masses(); });
    do {
      ASSERT_EQ(murphy_combine(inputs), reference);
    } while (std::next_permutation(inputs.begin(), inputs.end(),
                                   [](const Bpa& a, const Bpa& b) { return a.masses() < b.masses(); }));
  }
}

TEST(Pignistic, Examples) {
  const auto split = pignistic(validate_bpa({{Subset::of({Medium, High}), 1.0}}));
  EXPECT_EQ(split, (std::vector<double>{0, 0, 0.5, 0.5, 0}));
  for (double p : pignistic(Bpa::vacuous())) EXPECT_EQ(p, 0.2);
  const auto betp = pignistic(validate_bpa({{kH, 0.84}, {kTheta, 0.16}}));
  EXPECT_NEAR(betp[3], 0.872, 1e-15);
  for (int i : {0, 1, 2, 4}) EXPECT_NEAR(betp[i], 0.032, 1e-15);
}

TEST(Pignistic, BayesianIsIdentity) {
  selftest::Rng rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    MassMap m;
    double total = 0.0;
    std::array<double, 5> raw{};
    for (auto& v : raw) total += (v = u(rng));
    for (int i = 0; i < 5; ++i) m[Subset::singleton(kLabels[i])] = raw[i] / total;
    const Bpa b = validate_bpa(m);
    const auto p = pignistic(b);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(p[i], b.mass(Subset::singleton(kLabels[i])));
  }
}

TEST(Rank, PublishedColumns) {
  std::vector<std::pair<std::string, double>> w, w_adj;
  for (const auto& row : fixtures::reference_weights()) {
    w.emplace_back(row.indicator, row.w);
    w_adj.emplace_back(row.indicator, *row.w_adj);
  }
  const auto by_w = rank(w, "W");
  EXPECT_EQ(by_w.top, "B8");
  EXPECT_EQ(by_w.entries.front().value, 0.54);
  const auto by_adj = rank(w_adj, "W'");
  EXPECT_EQ(by_adj.bottom, "B6");
  EXPECT_EQ(by_adj.entries.back().value, 0.025);
}

TEST(Rank, TiesFollowIdOrder) {
  std::vector<std::pair<std::string, double>> equal;
  for (const auto& ind : indicator_catalog()) equal.emplace_back(ind.id, 0.5);
  std::reverse(equal.begin(), equal.end());
  const auto r = rank(equal);
  EXPECT_EQ(r.top, "B1");
  EXPECT_EQ(r.bottom, "B14");
  EXPECT_EQ(r.entries[1].indicator, "B2");
  EXPECT_EQ(r.entries[9].indicator, "B10");
  for (std::size_t i = 0; i < r.entries.size(); ++i) EXPECT_EQ(r.entries[i].rank, static_cast<int>(i + 1));
}

TEST(Rank, Errors) {
  EXPECT_EQ(kind_of([] { rank({}); }), ErrorKind::EmptyInput);
  EXPECT_EQ(kind_of([] { rank({{"B1", 1.0}, {"B1", 2.0}}); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { rank({{"B1", std::nan("")}}); }), ErrorKind::InvalidConfig);
}

TEST(CombinationJson, Shape) {
  const auto j = to_json(dempster_combine(h06(), h06()));
  EXPECT_EQ(j["conflict_k"], 0.0);
  ASSERT_TRUE(j["masses"].is_array());
  EXPECT_EQ(j["masses"].size(), 2u);
  for (const char* label : {"VL", "L", "M", "H", "VH"}) EXPECT_TRUE(j["betp"].contains(label));
  EXPECT_NEAR(j["betp"]["H"].get<double>(), 0.872, 1e-15);
}
