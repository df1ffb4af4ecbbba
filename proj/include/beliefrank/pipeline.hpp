#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefrank/ahp.hpp"
#include "beliefrank/core.hpp"
#include "beliefrank/entropy.hpp"
#include "beliefrank/evidence.hpp"
#include "beliefrank/fuzzy.hpp"

namespace beliefrank::pipeline {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct PipelineConfig {
  std::filesystem::path scores;
  std::filesystem::path matrices;
  std::filesystem::path priors;
  std::optional<std::filesystem::path> bpa_fixtures;
  /// Table in the entropy CSV export layout; its E column replaces the
  /// entropies derived from the aggregated matrix.
  std::optional<std::filesystem::path> entropy_fixture;
  std::optional<std::filesystem::path> ri_table;
  fuzzy::DiscountFactor alpha;
  fuzzy::OverlapMode overlap_mode = fuzzy::OverlapMode::Adjacent;
  ahp::CiDenominator ci_denominator = ahp::CiDenominator::Order;
  int window = 4;
  int stride = 2;
  bool force = false;
};

// --- ingestion ---------------------------------------------------------

struct IndicatorScore {
  std::string indicator;
  Score score;
  int responses = 0;
};

/// `expert_id,indicator,score` rows averaged per indicator, returned in
/// catalog order. Throws ParseError, ScoreOutOfRange, UnknownIndicator,
/// MissingIndicator.
std::vector<IndicatorScore> ingest_scores(const std::filesystem::path& path);

struct ExpertMatrix {
  std::string expert;
  ahp::PairwiseMatrix matrix;
};

struct MatrixSet {
  std::vector<std::string> indicators;
  std::vector<ExpertMatrix> experts;
};

/// {"indicators": [...], "experts": [{"id": ..., "matrix": [[...]]}]}.
/// Entries are numbers or fraction strings such as "1/3".
/// Throws ParseError, InvalidMatrix, OrderMismatch.
MatrixSet ingest_matrices(const std::filesystem::path& path);

struct LabeledBpa {
  std::string label;
  Bpa bpa;
};

/// A single BPA document, or an array of them each with an optional "label".
std::vector<LabeledBpa> ingest_bpas(const std::filesystem::path& path);

/// Priors in catalog order. Throws MissingIndicator / UnknownIndicator.
std::vector<double> ingest_priors(const std::filesystem::path& path, const std::vector<std::string>& ids);

entropy::EntropyTable ingest_entropy_table(const std::filesystem::path& path);

ahp::RiTable load_ri_table(const std::optional<std::filesystem::path>& path);

/// Hex SHA-256 of the file bytes.
std::string file_digest(const std::filesystem::path& path);

// --- orchestration -----------------------------------------------------

/// Index ranges [first, first + window) stepping by `stride`; only full
/// windows are produced. Throws InvalidConfig.
std::vector<std::pair<int, int>> sliding_windows(int count, int window, int stride);

/// "B1, B2, B3, B4".
std::string window_label(const std::vector<std::string>& ids, std::pair<int, int> range);

struct IndicatorRating {
  std::string indicator;
  std::string description;
  double score = 0.0;
  int responses = 0;
  fuzzy::MembershipVector membership;
  Label label = Label::VeryLow;
  Bpa bpa;
};

struct WindowFusion {
  std::string label;
  std::vector<std::string> members;
  evidence::CombinationResult result;
};

struct ExpertConsistency {
  std::string expert;
  ahp::ConsistencyReport report;
};

struct RunManifest {
  std::string tool_version;
  nlohmann::json config;
  std::vector<std::pair<std::string, std::string>> input_digests;  // name -> sha256
  std::vector<std::pair<std::string, double>> timings_ms;

  std::vector<Indicator> catalog;

  std::vector<ExpertConsistency> expert_consistency;
  ahp::ConsistencyReport consistency;
  bool consistency_forced = false;

  std::string entropy_source;  // "matrices" or "fixture"
  entropy::EntropyTable weights;

  std::vector<IndicatorRating> ratings;
  std::vector<WindowFusion> windows;
  Bpa fused = Bpa::vacuous();
  std::vector<double> fused_betp;
  Label verdict = Label::VeryLow;

  std::vector<LabeledBpa> fixture_windows;
  std::optional<Bpa> fixture_average;

  evidence::RankingReport by_weight;
  evidence::RankingReport by_adjusted_weight;
  evidence::RankingReport by_belief;

  std::vector<std::string> notes;
};

/// Stage 1 catalog, stage 2 consistency gate and entropy weighting, stage 3
/// fuzzification, windowed Murphy fusion and ranking. Errors are re-thrown
/// with the stage named; a failed consistency gate throws InconsistentMatrix
/// unless `force` is set.
RunManifest run_pipeline(const PipelineConfig& config);

/// Full manifest. `with_timings = false` drops the only nondeterministic field.
nlohmann::json to_json(const RunManifest& m, bool with_timings = true);

}  // namespace beliefrank::pipeline
