#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "beliefrank/ahp.hpp"
#include "beliefrank/entropy.hpp"
#include "beliefrank/evidence.hpp"
#include "beliefrank/pipeline.hpp"
#include "beliefrank/report.hpp"
#include "beliefrank/selftest.hpp"

namespace fs = std::filesystem;
using namespace beliefrank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitGate = 2;
constexpr int kExitIo = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InconsistentMatrix: return kExitGate;
    case ErrorKind::IoError: return kExitIo;
    default: return kExitValidation;
  }
}

struct Options {
  std::string scores;
  std::string matrices;
  std::string priors;
  std::string bpa_fixtures;
  std::string entropy_fixture;
  std::string ri_table;
  double alpha = 1.0;
  std::string overlap_mode = "adjacent";
  std::string ci_denominator = "paper";
  int window = 4;
  int stride = 2;
  std::string out_dir;
  std::string format = "text";
  std::string chart;
  bool force = false;
  int criterion = 0;
};

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorKind::InvalidConfig, std::string(flag) + " is required");
}

int run_evaluate(const Options& o) {
  require(o.scores, "--scores");
  require(o.matrices, "--matrices");
  require(o.priors, "--priors");
  pipeline::PipelineConfig config;
  config.scores = o.scores;
  config.matrices = o.matrices;
  config.priors = o.priors;
  config.bpa_fixtures = optional_path(o.bpa_fixtures);
  config.entropy_fixture = optional_path(o.entropy_fixture);
  config.ri_table = optional_path(o.ri_table);
  config.alpha = fuzzy::DiscountFactor::make(o.alpha);
  config.overlap_mode = fuzzy::parse_overlap_mode(o.overlap_mode);
  config.ci_denominator = ahp::parse_ci_denominator(o.ci_denominator);
  config.window = o.window;
  config.stride = o.stride;
  config.force = o.force;
  const auto format = report::parse_format(o.format);
  if (format == report::Format::Csv && o.out_dir.empty()) {
    throw Error(ErrorKind::InvalidConfig, "--format csv needs --out-dir");
  }

  const auto manifest = pipeline::run_pipeline(config);
  for (const auto& note : manifest.notes) {
    if (note.rfind("warning:", 0) == 0) std::cerr << note << '\n';
  }
  if (!o.out_dir.empty()) {
    for (const auto& p : report::emit_report(manifest, format, o.out_dir)) std::cout << "wrote " << p.string() << '\n';
  } else if (format == report::Format::Json) {
    std::cout << pipeline::to_json(manifest).dump(2) << '\n';
  } else {
    std::cout << report::manifest_text(manifest);
  }
  if (!o.chart.empty()) {
    report::emit_chart(manifest, o.chart);
    std::cout << "wrote " << o.chart << '\n';
  }
  return kExitOk;
}

int run_consistency(const Options& o) {
  require(o.matrices, "--matrices");
  const auto set = pipeline::ingest_matrices(o.matrices);
  const auto ri = pipeline::load_ri_table(optional_path(o.ri_table));
  const auto mode = ahp::parse_ci_denominator(o.ci_denominator);
  const auto format = report::parse_format(o.format);

  std::vector<ahp::PairwiseMatrix> all;
  nlohmann::json experts = nlohmann::json::array();
  for (const auto& e : set.experts) {
    all.push_back(e.matrix);
    auto r = ahp::to_json(ahp::consistency(e.matrix, ri, mode));
    r["expert"] = e.expert;
    experts.push_back(std::move(r));
  }
  const auto aggregated = ahp::consistency(ahp::aggregate_geometric(all), ri, mode);
  if (format == report::Format::Json) {
    std::cout << nlohmann::json{{"experts", experts}, {"aggregated", ahp::to_json(aggregated)}}.dump(2) << '\n';
  } else {
    if (format == report::Format::Csv) std::cout << "matrix,order,lambda_max,ci,ri,cr,acceptable\n";
    auto line = [&](const std::string& name, const nlohmann::json& r) {
      if (format == report::Format::Csv) {
        std::cout << name << ',' << r["order"] << ',' << r["lambda_max"] << ',' << r["ci"] << ',' << r["ri"] << ','
                  << r["cr"] << ',' << r["acceptable"] << '\n';
      } else {
        std::cout << name << ": order " << r["order"] << ", lambda_max " << r["lambda_max"] << ", CI " << r["ci"]
                  << ", RI " << r["ri"] << ", CR " << r["cr"] << (r["acceptable"].get<bool>() ? " acceptable" : " NOT acceptable")
                  << '\n';
      }
    };
    for (const auto& e : experts) line(e["expert"].get<std::string>(), e);
    line("aggregated", ahp::to_json(aggregated));
  }
  return aggregated.acceptable || o.force ? kExitOk : kExitGate;
}

int run_weights(const Options& o) {
  require(o.priors, "--priors");
  if (o.matrices.empty() == o.entropy_fixture.empty()) {
    throw Error(ErrorKind::InvalidConfig, "give exactly one of --matrices or --entropy-fixture");
  }
  std::vector<std::string> ids;
  for (const auto& ind : indicator_catalog()) ids.push_back(ind.id);
  entropy::EntropyTable table;
  if (!o.entropy_fixture.empty()) {
    const auto fixture = pipeline::ingest_entropy_table(o.entropy_fixture);
    ids.clear();
    std::vector<double> e;
    for (const auto& row : fixture) {
      ids.push_back(row.indicator);
      e.push_back(row.e);
    }
    const auto priors = pipeline::ingest_priors(o.priors, ids);
    table = entropy::table_from_entropies(ids, e, std::span<const double>(priors));
  } else {
    const auto set = pipeline::ingest_matrices(o.matrices);
    std::vector<ahp::PairwiseMatrix> all;
    for (const auto& e : set.experts) all.push_back(e.matrix);
    const auto priors = pipeline::ingest_priors(o.priors, set.indicators);
    const auto decision = entropy::DecisionMatrix::make(ahp::aggregate_geometric(all).rows(), set.indicators);
    table = entropy::entropy_table(decision, std::span<const double>(priors));
  }
  switch (report::parse_format(o.format)) {
    case report::Format::Text: std::cout << report::entropy_text(table); break;
    case report::Format::Csv: entropy::write_table_csv(std::cout, table); break;
    case report::Format::Json: std::cout << entropy::to_json(table).dump(2) << '\n'; break;
  }
  return kExitOk;
}

int run_fuse(const Options& o) {
  require(o.bpa_fixtures, "--bpa-fixtures");
  const auto inputs = pipeline::ingest_bpas(o.bpa_fixtures);
  std::vector<Bpa> bpas;
  std::vector<report::FusionRow> rows;
  for (const auto& in : inputs) {
    bpas.push_back(in.bpa);
    rows.push_back({in.label, in.bpa});
  }
  const auto average = evidence::average_bpas(bpas);
  const auto murphy = evidence::murphy_combine(bpas);
  switch (report::parse_format(o.format)) {
    case report::Format::Text:
      std::cout << report::fusion_text(rows, average) << "\nMurphy combination of all inputs\n"
                << evidence::to_json(murphy).dump(2) << '\n';
      break;
    case report::Format::Csv: std::cout << report::fusion_csv(rows, average); break;
    case report::Format::Json: {
      nlohmann::json doc = {{"average", evidence::to_json(evidence::CombinationResult{average, 0.0})},
                            {"murphy", evidence::to_json(murphy)}};
      std::cout << doc.dump(2) << '\n';
      break;
    }
  }
  return kExitOk;
}

int run_selftest(const Options& o) {
  std::vector<selftest::CriterionResult> results;
  if (o.criterion > 0) {
    results.push_back(selftest::run_criterion(o.criterion));
  } else {
    results = selftest::run_selftest();
  }
  bool ok = true;
  for (const auto& r : results) {
    std::cout << selftest::format_line(r) << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-weighted fuzzy evidential evaluation of indicator catalogs"};
  app.set_version_flag("--version", std::string(pipeline::kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto* evaluate = app.add_subcommand("evaluate", "Run the full three-stage pipeline");
  evaluate->add_option("--scores", o.scores, "Expert scores CSV (expert_id,indicator,score)");
  evaluate->add_option("--matrices", o.matrices, "Pairwise comparison matrices JSON");
  evaluate->add_option("--priors", o.priors, "Intellectual weights CSV (indicator,lambda)");
  evaluate->add_option("--bpa-fixtures", o.bpa_fixtures, "BPA rows to average alongside the computed fusion");
  evaluate->add_option("--entropy-fixture", o.entropy_fixture, "Entropy table CSV whose E column drives weighting");
  evaluate->add_option("--alpha", o.alpha, "Discount factor in [0, 1]");
  evaluate->add_option("--overlap-mode", o.overlap_mode, "adjacent or theta");
  evaluate->add_option("--ci-denominator", o.ci_denominator, "paper (n) or standard (n - 1)");
  evaluate->add_option("--ri-table", o.ri_table, "JSON object of order -> random index overrides");
  evaluate->add_option("--window", o.window, "Indicators per fusion window");
  evaluate->add_option("--stride", o.stride, "Step between fusion windows");
  evaluate->add_option("--out-dir", o.out_dir, "Directory for manifest and report files");
  evaluate->add_option("--format", o.format, "text, csv or json");
  evaluate->add_option("--chart", o.chart, "SVG chart output path");
  evaluate->add_flag("--force", o.force, "Continue past a failed consistency gate");

  auto* consistency = app.add_subcommand("consistency", "Consistency of each expert matrix and their aggregate");
  consistency->add_option("--matrices", o.matrices, "Pairwise comparison matrices JSON");
  consistency->add_option("--ri-table", o.ri_table, "JSON object of order -> random index overrides");
  consistency->add_option("--ci-denominator", o.ci_denominator, "paper (n) or standard (n - 1)");
  consistency->add_option("--format", o.format, "text, csv or json");
  consistency->add_flag("--force", o.force, "Exit 0 even when the aggregate is not acceptable");

  auto* weights = app.add_subcommand("weights", "Entropy weights from matrices or an entropy table");
  weights->add_option("--matrices", o.matrices, "Pairwise comparison matrices JSON");
  weights->add_option("--entropy-fixture", o.entropy_fixture, "Entropy table CSV");
  weights->add_option("--priors", o.priors, "Intellectual weights CSV (indicator,lambda)");
  weights->add_option("--format", o.format, "text, csv or json");

  auto* fuse = app.add_subcommand("fuse", "Average and Murphy-combine BPAs from a file");
  fuse->add_option("--bpa-fixtures", o.bpa_fixtures, "BPA JSON document or array");
  fuse->add_option("--format", o.format, "text, csv or json");

  auto* self = app.add_subcommand("selftest", "Oracle and fixture checks");
  self->add_option("--criterion", o.criterion, "Run a single criterion (1-9)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (evaluate->parsed()) return run_evaluate(o);
    if (consistency->parsed()) return run_consistency(o);
    if (weights->parsed()) return run_weights(o);
    if (fuse->parsed()) return run_fuse(o);
    if (self->parsed()) return run_selftest(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
