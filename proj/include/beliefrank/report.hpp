#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "beliefrank/pipeline.hpp"

namespace beliefrank::report {

enum class Format { Text, Csv, Json };

std::string_view to_string(Format f);
/// "text", "csv" or "json"; throws InvalidConfig otherwise.
Format parse_format(std::string_view text);

// Renderings. Numbers in text tables are rounded to three decimals; CSV and
// JSON carry full precision.

std::string entropy_text(const entropy::EntropyTable& table);
std::string ratings_text(const std::vector<pipeline::IndicatorRating>& ratings);
std::string ratings_csv(const std::vector<pipeline::IndicatorRating>& ratings);
std::string ranking_text(const evidence::RankingReport& r);
std::string ranking_csv(const std::vector<const evidence::RankingReport*>& reports);

struct FusionRow {
  std::string label;
  Bpa bpa;
};

/// One row per window plus "Average": VL..VH, the four adjacent pairs,
/// theta, and any remaining focal mass under "other".
std::string fusion_csv(const std::vector<FusionRow>& rows, const Bpa& average);
std::string fusion_text(const std::vector<FusionRow>& rows, const Bpa& average);

std::string manifest_text(const pipeline::RunManifest& m);

/// Writes manifest.json plus the renderings for `format` into `out_dir`:
///   text: report.txt
///   csv:  entropy.csv, ratings.csv, fusion.csv, ranking.csv
///   json: report.json
/// Every file is written to a temporary sibling and renamed once all of them
/// succeeded; on failure the temporaries are removed. Returns the final paths.
std::vector<std::filesystem::path> emit_report(const pipeline::RunManifest& m, Format format,
                                               const std::filesystem::path& out_dir);

/// Grouped bar chart, one group per indicator with bars for E, d, W, lambda
/// and W'. Identical manifests produce identical bytes.
std::string chart_svg(const pipeline::RunManifest& m);
void emit_chart(const pipeline::RunManifest& m, const std::filesystem::path& path);

/// Writes `files` (path, contents) all-or-nothing via temporaries and rename.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace beliefrank::report
