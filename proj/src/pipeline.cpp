#include "beliefrank/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "beliefrank/csv.hpp"

namespace beliefrank::pipeline {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

nlohmann::json read_json(const fs::path& path) {
  auto in = open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

double parse_matrix_entry(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string text = v.get<std::string>();
    const auto slash = text.find('/');
    if (slash == std::string::npos) return csv::parse_number(text, where, 0, "entry");
    const double num = csv::parse_number(text.substr(0, slash), where, 0, "numerator");
    const double den = csv::parse_number(text.substr(slash + 1), where, 0, "denominator");
    if (den == 0.0) throw Error(ErrorKind::ParseError, where + ": zero denominator in '" + text + "'");
    return num / den;
  }
  throw Error(ErrorKind::ParseError, where + ": entries must be numbers or fraction strings");
}

// Re-throws with the stage prefixed so every error names where it happened.
template <typename F>
decltype(auto) in_stage(std::string_view stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), "[" + std::string(stage) + "] " + e.detail());
  }
}

class StageTimer {
 public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& sink, std::string name)
      : sink_(sink), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    sink_.emplace_back(name_, std::chrono::duration<double, std::milli>(elapsed).count());
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  std::vector<std::pair<std::string, double>>& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& ind : indicator_catalog()) ids.push_back(ind.id);
  return ids;
}

double expected_grade_score(const Bpa& b) {
  const auto p = evidence::pignistic(b);
  const auto labels = b.frame().labels();
  std::vector<double> terms;
  for (std::size_t i = 0; i < labels.size(); ++i) terms.push_back(p[i] * fuzzy::peak_score(labels[i]));
  return stable_sum(terms);
}

}  // namespace

std::vector<IndicatorScore> ingest_scores(const fs::path& path) {
  auto in = open_input(path);
  const std::string source = path.string();
  const auto table = csv::read(in, source);
  csv::expect_header(table, {"expert_id", "indicator", "score"}, source);

  std::map<int, std::vector<double>> by_index;
  for (const auto& row : table.rows) {
    const std::string& id = row.fields[1];
    const int index = catalog_index(id);
    if (index < 0) {
      throw Error(ErrorKind::UnknownIndicator, source + ":" + std::to_string(row.line) + ": indicator '" + id +
                                                   "' is not in the catalog");
    }
    const double value = csv::parse_number(row.fields[2], source, row.line, "score");
    try {
      Score::make(value);
    } catch (const Error& e) {
      throw Error(ErrorKind::ScoreOutOfRange, source + ":" + std::to_string(row.line) + ": " + e.detail());
    }
    by_index[index].push_back(value);
  }

  std::vector<IndicatorScore> out;
  const auto& catalog = indicator_catalog();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    auto it = by_index.find(static_cast<int>(i));
    if (it == by_index.end()) {
      throw Error(ErrorKind::MissingIndicator, source + ": no scores for " + catalog[i].id);
    }
    const double mean = stable_sum(it->second) / static_cast<double>(it->second.size());
    out.push_back({catalog[i].id, Score::make(std::clamp(mean, 0.0, 10.0)), static_cast<int>(it->second.size())});
  }
  return out;
}

MatrixSet ingest_matrices(const fs::path& path) {
  const std::string source = path.string();
  const auto doc = read_json(path);
  if (!doc.is_object() || !doc.contains("indicators") || !doc.at("indicators").is_array()) {
    throw Error(ErrorKind::ParseError, source + ": expected an object with an \"indicators\" array");
  }
  MatrixSet set;
  for (const auto& id : doc.at("indicators")) {
    if (!id.is_string()) throw Error(ErrorKind::ParseError, source + ": indicator ids must be strings");
    set.indicators.push_back(id.get<std::string>());
  }
  if (!doc.contains("experts") || !doc.at("experts").is_array()) {
    throw Error(ErrorKind::ParseError, source + ": expected an \"experts\" array");
  }
  if (doc.at("experts").empty()) throw Error(ErrorKind::ParseError, source + ": EmptyInput: no experts listed");

  const std::size_t n = set.indicators.size();
  std::size_t index = 0;
  for (const auto& expert : doc.at("experts")) {
    const std::string where = source + ": experts[" + std::to_string(index++) + "]";
    if (!expert.is_object() || !expert.contains("matrix") || !expert.at("matrix").is_array()) {
      throw Error(ErrorKind::ParseError, where + " needs a \"matrix\" array");
    }
    std::string id = expert.contains("id") && expert.at("id").is_string() ? expert.at("id").get<std::string>()
                                                                          : "expert" + std::to_string(index);
    const auto& rows_json = expert.at("matrix");
    if (rows_json.size() != n) {
      throw Error(ErrorKind::OrderMismatch, where + " (" + id + ") has " + std::to_string(rows_json.size()) +
                                                " rows for " + std::to_string(n) + " indicators");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rows_json.size(); ++i) {
      const auto& r = rows_json[i];
      if (!r.is_array() || r.size() != n) {
        throw Error(ErrorKind::OrderMismatch, where + " (" + id + ") row " + std::to_string(i + 1) + " must have " +
                                                  std::to_string(n) + " entries");
      }
      std::vector<double> row;
      for (std::size_t j = 0; j < r.size(); ++j) {
        row.push_back(parse_matrix_entry(r[j], where + " (" + id + ") cell (" + std::to_string(i + 1) + "," +
                                                   std::to_string(j + 1) + ")"));
      }
      rows.push_back(std::move(row));
    }
    try {
      set.experts.push_back({id, ahp::PairwiseMatrix::make(rows)});
    } catch (const Error& e) {
      throw Error(e.kind(), where + " (" + id + "): " + e.detail());
    }
  }
  return set;
}

std::vector<LabeledBpa> ingest_bpas(const fs::path& path) {
  const std::string source = path.string();
  const auto doc = read_json(path);
  std::vector<LabeledBpa> out;
  auto one = [&](const nlohmann::json& item, std::size_t i) {
    try {
      std::string label = item.is_object() && item.contains("label") && item.at("label").is_string()
                              ? item.at("label").get<std::string>()
                              : "bpa" + std::to_string(i + 1);
      out.push_back({std::move(label), bpa_from_json(item)});
    } catch (const Error& e) {
      throw Error(e.kind(), source + ": entry " + std::to_string(i + 1) + ": " + e.detail());
    }
  };
  if (doc.is_array()) {
    if (doc.empty()) throw Error(ErrorKind::ParseError, source + ": EmptyInput: no BPAs");
    for (std::size_t i = 0; i < doc.size(); ++i) one(doc[i], i);
  } else {
    one(doc, 0);
  }
  return out;
}

std::vector<double> ingest_priors(const fs::path& path, const std::vector<std::string>& ids) {
  auto in = open_input(path);
  const auto rows = entropy::read_priors_csv(in, path.string());
  std::map<std::string, double> by_id(rows.begin(), rows.end());
  for (const auto& [id, _] : rows) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw Error(ErrorKind::UnknownIndicator, path.string() + ": prior for unknown indicator " + id);
    }
  }
  std::vector<double> out;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorKind::MissingIndicator, path.string() + ": no prior for " + id);
    out.push_back(it->second);
  }
  return out;
}

entropy::EntropyTable ingest_entropy_table(const fs::path& path) {
  auto in = open_input(path);
  return entropy::read_table_csv(in, path.string());
}

ahp::RiTable load_ri_table(const std::optional<fs::path>& path) {
  auto table = ahp::RiTable::saaty();
  if (path) {
    try {
      table.merge_json(read_json(*path));
    } catch (const Error& e) {
      throw Error(e.kind(), path->string() + ": " + e.detail());
    }
  }
  return table;
}

std::string file_digest(const fs::path& path) {
  auto in = open_input(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "sha256 unavailable");
  }
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

std::vector<std::pair<int, int>> sliding_windows(int count, int window, int stride) {
  if (window < 1) throw Error(ErrorKind::InvalidConfig, "window must be >= 1");
  if (stride < 1) throw Error(ErrorKind::InvalidConfig, "stride must be >= 1");
  if (window > count) {
    throw Error(ErrorKind::InvalidConfig, "window " + std::to_string(window) + " exceeds indicator count " +
                                              std::to_string(count));
  }
  std::vector<std::pair<int, int>> out;
  for (int first = 0; first + window <= count; first += stride) out.emplace_back(first, first + window);
  return out;
}

std::string window_label(const std::vector<std::string>& ids, std::pair<int, int> range) {
  std::string label;
  for (int i = range.first; i < range.second; ++i) {
    if (!label.empty()) label += ", ";
    label += ids[static_cast<std::size_t>(i)];
  }
  return label;
}

RunManifest run_pipeline(const PipelineConfig& config) {
  RunManifest m;
  m.tool_version = std::string(kToolVersion);
  m.config = {
      {"scores", config.scores.string()},
      {"matrices", config.matrices.string()},
      {"priors", config.priors.string()},
      {"bpa_fixtures", config.bpa_fixtures ? nlohmann::json(config.bpa_fixtures->string()) : nlohmann::json(nullptr)},
      {"entropy_fixture",
       config.entropy_fixture ? nlohmann::json(config.entropy_fixture->string()) : nlohmann::json(nullptr)},
      {"ri_table", config.ri_table ? nlohmann::json(config.ri_table->string()) : nlohmann::json(nullptr)},
      {"alpha", config.alpha.value()},
      {"overlap_mode", std::string(fuzzy::to_string(config.overlap_mode))},
      {"ci_denominator", std::string(ahp::to_string(config.ci_denominator))},
      {"window", config.window},
      {"stride", config.stride},
      {"force", config.force},
      {"score_aggregation", "arithmetic mean per indicator before fuzzification"},
  };

  in_stage("inputs", [&] {
    m.input_digests.emplace_back("scores", file_digest(config.scores));
    m.input_digests.emplace_back("matrices", file_digest(config.matrices));
    m.input_digests.emplace_back("priors", file_digest(config.priors));
    if (config.bpa_fixtures) m.input_digests.emplace_back("bpa_fixtures", file_digest(*config.bpa_fixtures));
    if (config.entropy_fixture) m.input_digests.emplace_back("entropy_fixture", file_digest(*config.entropy_fixture));
    if (config.ri_table) m.input_digests.emplace_back("ri_table", file_digest(*config.ri_table));
  });

  // Stage 1: criteria.
  {
    StageTimer t(m.timings_ms, "stage1_catalog");
    m.catalog = indicator_catalog();
  }
  const auto ids = catalog_ids();

  // Stage 2: consistency gate, then entropy weighting.
  {
    StageTimer t(m.timings_ms, "stage2_weighting");
    const auto matrices = in_stage("stage 2: consistency", [&] {
      auto set = ingest_matrices(config.matrices);
      if (set.indicators != ids) {
        throw Error(ErrorKind::OrderMismatch,
                    config.matrices.string() + ": \"indicators\" must list the catalog ids B1..B14 in order");
      }
      return set;
    });
    const auto aggregated = in_stage("stage 2: consistency", [&] {
      const auto ri = load_ri_table(config.ri_table);
      std::vector<ahp::PairwiseMatrix> all;
      for (const auto& e : matrices.experts) {
        m.expert_consistency.push_back({e.expert, ahp::consistency(e.matrix, ri, config.ci_denominator)});
        all.push_back(e.matrix);
      }
      auto aggregated = ahp::aggregate_geometric(all);
      m.consistency = ahp::consistency(aggregated, ri, config.ci_denominator);
      if (!m.consistency.acceptable) {
        std::ostringstream msg;
        msg << "aggregated matrix CR = " << m.consistency.cr << " is not below " << ahp::kConsistencyThreshold;
        if (!config.force) throw Error(ErrorKind::InconsistentMatrix, msg.str());
        m.consistency_forced = true;
        m.notes.push_back("warning: " + msg.str() + "; continuing because --force was given");
      }
      return aggregated;
    });
    in_stage("stage 2: weighting", [&] {
      const auto priors = ingest_priors(config.priors, ids);
      if (config.entropy_fixture) {
        const auto fixture = ingest_entropy_table(*config.entropy_fixture);
        std::map<std::string, double> e_by_id;
        for (const auto& row : fixture) e_by_id[row.indicator] = row.e;
        std::vector<double> entropies;
        for (const auto& id : ids) {
          auto it = e_by_id.find(id);
          if (it == e_by_id.end()) {
            throw Error(ErrorKind::MissingIndicator, config.entropy_fixture->string() + ": no entropy for " + id);
          }
          entropies.push_back(it->second);
        }
        m.entropy_source = "fixture";
        m.weights = entropy::table_from_entropies(ids, entropies, std::span<const double>(priors));
        m.notes.push_back("entropies taken from " + config.entropy_fixture->string() +
                          "; d, W and W' recomputed from them");
      } else {
        const auto decision = entropy::DecisionMatrix::make(aggregated.rows(), ids);
        m.entropy_source = "matrices";
        m.weights = entropy::entropy_table(decision, std::span<const double>(priors));
      }
    });
  }

  // Stage 3: fuzzification and evidence fusion.
  {
    StageTimer t(m.timings_ms, "stage3_fusion");
    in_stage("stage 3: fusion", [&] {
      const auto scores = ingest_scores(config.scores);
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto mu = fuzzy::membership(scores[i].score);
        m.ratings.push_back({scores[i].indicator, m.catalog[i].description, scores[i].score.value,
                             scores[i].responses, mu, fuzzy::rating_label(mu),
                             fuzzy::to_bpa(mu, config.alpha, config.overlap_mode)});
      }
      m.notes.push_back("expert scores averaged per indicator before fuzzification");

      std::vector<Bpa> window_results;
      for (const auto& range : sliding_windows(static_cast<int>(ids.size()), config.window, config.stride)) {
        std::vector<Bpa> members;
        WindowFusion w;
        w.label = window_label(ids, range);
        for (int i = range.first; i < range.second; ++i) {
          members.push_back(m.ratings[static_cast<std::size_t>(i)].bpa);
          w.members.push_back(ids[static_cast<std::size_t>(i)]);
        }
        w.result = evidence::murphy_combine(members);
        window_results.push_back(w.result.bpa);
        m.windows.push_back(std::move(w));
      }
      m.fused = evidence::average_bpas(window_results);
      m.fused_betp = evidence::pignistic(m.fused);
      fuzzy::MembershipVector as_vector;
      for (std::size_t i = 0; i < m.fused_betp.size(); ++i) as_vector.mu[i] = m.fused_betp[i];
      m.verdict = fuzzy::rating_label(as_vector);

      if (config.bpa_fixtures) {
        m.fixture_windows = ingest_bpas(*config.bpa_fixtures);
        std::vector<Bpa> bpas;
        for (const auto& f : m.fixture_windows) bpas.push_back(f.bpa);
        m.fixture_average = evidence::average_bpas(bpas);
      }
    });
  }

  {
    StageTimer t(m.timings_ms, "ranking");
    in_stage("ranking", [&] {
      std::vector<std::pair<std::string, double>> w, w_adj, belief;
      for (const auto& row : m.weights) {
        w.emplace_back(row.indicator, row.w);
        if (row.w_adj) w_adj.emplace_back(row.indicator, *row.w_adj);
      }
      for (const auto& r : m.ratings) belief.emplace_back(r.indicator, expected_grade_score(r.bpa));
      m.by_weight = evidence::rank(w, "entropy weight W");
      m.by_adjusted_weight = evidence::rank(w_adj, "adjusted weight W'");
      m.by_belief = evidence::rank(belief, "pignistic expected score of each indicator's evidence");
    });
  }
  return m;
}

namespace {

nlohmann::json membership_json(const fuzzy::MembershipVector& v) {
  nlohmann::json out = nlohmann::json::object();
  for (Label l : kLabels) out[std::string(short_name(l))] = v[l];
  return out;
}

}  // namespace

nlohmann::json to_json(const RunManifest& m, bool with_timings) {
  nlohmann::json doc;
  doc["tool_version"] = m.tool_version;
  doc["config"] = m.config;
  nlohmann::json digests = nlohmann::json::object();
  for (const auto& [name, hex] : m.input_digests) digests[name] = hex;
  doc["input_digests"] = digests;
  if (with_timings) {
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [name, ms] : m.timings_ms) timings[name] = ms;
    doc["timings_ms"] = timings;
  }
  doc["catalog"] = catalog_to_json(m.catalog);

  nlohmann::json experts = nlohmann::json::array();
  for (const auto& e : m.expert_consistency) {
    auto r = ahp::to_json(e.report);
    r["expert"] = e.expert;
    experts.push_back(std::move(r));
  }
  doc["consistency"] = {{"experts", experts},
                        {"aggregated", ahp::to_json(m.consistency)},
                        {"forced", m.consistency_forced}};
  doc["weights"] = {{"source", m.entropy_source}, {"table", entropy::to_json(m.weights)}};

  nlohmann::json ratings = nlohmann::json::array();
  for (const auto& r : m.ratings) {
    ratings.push_back({{"indicator", r.indicator},
                       {"description", r.description},
                       {"score", r.score},
                       {"responses", r.responses},
                       {"membership", membership_json(r.membership)},
                       {"label", std::string(short_name(r.label))},
                       {"bpa", bpa_to_json(r.bpa)}});
  }
  doc["ratings"] = ratings;

  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : m.windows) {
    windows.push_back({{"label", w.label}, {"members", w.members}, {"result", evidence::to_json(w.result)}});
  }
  nlohmann::json betp = nlohmann::json::object();
  for (std::size_t i = 0; i < m.fused_betp.size(); ++i) betp[std::string(short_name(kLabels[i]))] = m.fused_betp[i];
  doc["fusion"] = {{"windows", windows},
                   {"average", bpa_to_json(m.fused)},
                   {"betp", betp},
                   {"verdict", std::string(short_name(m.verdict))}};

  if (!m.fixture_windows.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& f : m.fixture_windows) rows.push_back({{"label", f.label}, {"bpa", bpa_to_json(f.bpa)}});
    doc["fixture_fusion"] = {{"windows", rows}, {"average", bpa_to_json(*m.fixture_average)}};
  }

  doc["rankings"] = {{"by_weight", evidence::to_json(m.by_weight)},
                     {"by_adjusted_weight", evidence::to_json(m.by_adjusted_weight)},
                     {"by_belief", evidence::to_json(m.by_belief)}};
  doc["notes"] = m.notes;
  return doc;
}

}  // namespace beliefrank::pipeline
