#include <gtest/gtest.h>

#include <fstream>

#include "beliefrank/fixtures.hpp"
#include "beliefrank/fuzzy.hpp"
#include "beliefrank/pipeline.hpp"

using namespace beliefrank;
namespace fs = std::filesystem;

namespace {

const fs::path kData = fs::path(BELIEFRANK_DATA_DIR) / "sample";

}  // namespace

TEST(BundledData, EntropyTableMatchesFixture) {
  EXPECT_EQ(pipeline::ingest_entropy_table(kData / "entropy_table.csv"), fixtures::reference_weights());
}

TEST(BundledData, PriorsMatchLambdaColumn) {
  std::vector<std::string> ids;
  for (const auto& ind : indicator_catalog()) ids.push_back(ind.id);
  const auto priors = pipeline::ingest_priors(kData / "priors.csv", ids);
  const auto& table = fixtures::reference_weights();
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(priors[i], *table[i].lambda) << ids[i];
}

TEST(BundledData, ScoresEncodeRatingsAtPeaks) {
  const auto scores = pipeline::ingest_scores(kData / "scores.csv");
  const auto& ratings = fixtures::reference_ratings();
  ASSERT_EQ(scores.size(), ratings.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    EXPECT_EQ(scores[i].indicator, ratings[i].first);
    EXPECT_EQ(scores[i].score.value, fuzzy::peak_score(ratings[i].second));
    EXPECT_EQ(fuzzy::rating_label(fuzzy::membership(scores[i].score)), ratings[i].second);
  }
}

TEST(BundledData, WindowRowsMatchFixture) {
  const auto rows = pipeline::ingest_bpas(kData / "windows.json");
  const auto& expected = fixtures::reference_windows();
  ASSERT_EQ(rows.size(), expected.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].label, expected[i].label);
    for (const auto& [s, m] : expected[i].bpa.masses()) EXPECT_NEAR(rows[i].bpa.mass(s), m, 1e-15);
  }
}

TEST(BundledData, MatricesAreAcceptable) {
  const auto set = pipeline::ingest_matrices(kData / "matrices.json");
  const auto ri = pipeline::load_ri_table(kData / "ri.json");
  EXPECT_GE(set.experts.size(), 2u);
  for (const auto& e : set.experts) {
    EXPECT_EQ(e.matrix.order(), 14);
    EXPECT_TRUE(ahp::consistency(e.matrix, ri).acceptable) << e.expert;
  }
}
