#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "beliefrank/csv.hpp"
#include "beliefrank/fixtures.hpp"
#include "beliefrank/pipeline.hpp"
#include "beliefrank/report.hpp"

using namespace beliefrank;
using namespace beliefrank::pipeline;
namespace fs = std::filesystem;

namespace {

const fs::path kData = fs::path(BELIEFRANK_DATA_DIR) / "sample";

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("beliefrank_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p) << contents;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string full_scores(const std::string& skip = "") {
  std::string out = "expert_id,indicator,score\n";
  for (const auto& ind : indicator_catalog()) {
    if (ind.id != skip) out += "e1," + ind.id + ",5\n";
  }
  return out;
}

PipelineConfig sample_config() {
  PipelineConfig c;
  c.scores = kData / "scores.csv";
  c.matrices = kData / "matrices.json";
  c.priors = kData / "priors.csv";
  c.ri_table = kData / "ri.json";
  c.bpa_fixtures = kData / "windows.json";
  c.entropy_fixture = kData / "entropy_table.csv";
  return c;
}

std::string identity_matrix_json(int n, const std::string& ids) {
  std::string rows;
  for (int i = 0; i < n; ++i) {
    rows += (i ? "," : "") + std::string("[");
    for (int j = 0; j < n; ++j) rows += (j ? "," : "") + std::string("1");
    rows += "]";
  }
  return R"({"indicators": )" + ids + R"(, "experts": [{"id": "a", "matrix": [)" + rows + "]}]}";
}

std::string catalog_ids_json() {
  std::string out = "[";
  for (const auto& ind : indicator_catalog()) out += (out.size() > 1 ? ",\"" : "\"") + ind.id + "\"";
  return out + "]";
}

}  // namespace

TEST(IngestScores, MeanPerIndicator) {
  TempDir dir;
  std::string text = full_scores("B1") + "e1,B1,5.0\ne2,B1,7.0\n";
  const auto scores = ingest_scores(dir.write("s.csv", text));
  ASSERT_EQ(scores.size(), 14u);
  EXPECT_EQ(scores[0].indicator, "B1");
  EXPECT_EQ(scores[0].score.value, 6.0);
  EXPECT_EQ(scores[0].responses, 2);
  EXPECT_EQ(scores[13].indicator, "B14");
}

TEST(IngestScores, Errors) {
  TempDir dir;
  const auto high = dir.write("high.csv", full_scores() + "e2,B3,11\n");
  const std::string msg = error_text([&] { ingest_scores(high); });
  EXPECT_NE(msg.find("ScoreOutOfRange"), std::string::npos);
  EXPECT_NE(msg.find("high.csv:16"), std::string::npos) << msg;

  try {
    ingest_scores(dir.write("missing.csv", full_scores("B14")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingIndicator);
    EXPECT_NE(e.detail().find("B14"), std::string::npos);
  }
  EXPECT_EQ(kind_of([&] { ingest_scores(dir.write("u.csv", full_scores() + "e1,B99,3\n")); }),
            ErrorKind::UnknownIndicator);
  EXPECT_EQ(kind_of([&] { ingest_scores(dir.write("n.csv", full_scores() + "e1,B2,abc\n")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { ingest_scores(dir.write("h.csv", "who,what\n")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { ingest_scores(dir.path() / "absent.csv"); }), ErrorKind::IoError);
}

TEST(IngestScores, QuotedFieldsAndBlankLines) {
  TempDir dir;
  const auto scores = ingest_scores(dir.write("q.csv", full_scores("B2") + "\n\"e 2\",\"B2\",\" 2.5 \"\n"));
  EXPECT_EQ(scores[1].score.value, 2.5);
}

TEST(IngestMatrices, Examples) {
  TempDir dir;
  const auto set = ingest_matrices(dir.write("m.json", identity_matrix_json(14, catalog_ids_json())));
  EXPECT_EQ(set.experts.size(), 1u);
  EXPECT_EQ(set.experts[0].matrix.order(), 14);

  const auto bad = dir.write("bad.json", R"({"indicators": ["B1","B2"], "experts": [{"id": "x", "matrix": [[1, 2], [0.4, 1]]}]})");
  try {
    ingest_matrices(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidMatrix);
    EXPECT_NE(e.detail().find("(1,2)"), std::string::npos);
    EXPECT_NE(e.detail().find("(2,1)"), std::string::npos);
    EXPECT_NE(e.detail().find("x"), std::string::npos);
  }

  const std::string empty = error_text([&] {
    ingest_matrices(dir.write("empty.json", R"({"indicators": ["B1","B2"], "experts": []})"));
  });
  EXPECT_NE(empty.find("ParseError"), std::string::npos);
  EXPECT_NE(empty.find("EmptyInput"), std::string::npos);
}

TEST(IngestMatrices, FractionsAndErrors) {
  TempDir dir;
  const auto set = ingest_matrices(
      dir.write("f.json", R"({"indicators": ["a","b"], "experts": [{"matrix": [["1", "1/3"], ["3", 1]]}]})"));
  EXPECT_NEAR(set.experts[0].matrix(0, 1), 1.0 / 3, 1e-16);
  EXPECT_EQ(set.experts[0].expert, "expert1");
  EXPECT_EQ(kind_of([&] {
              ingest_matrices(dir.write("o.json", R"({"indicators": ["a","b","c"], "experts": [{"matrix": [[1, 1], [1, 1]]}]})"));
            }),
            ErrorKind::OrderMismatch);
  EXPECT_EQ(kind_of([&] {
              ingest_matrices(dir.write("z.json", R"({"indicators": ["a","b"], "experts": [{"matrix": [["1", "1/0"], [1, 1]]}]})"));
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { ingest_matrices(dir.write("j.json", "{not json")); }), ErrorKind::ParseError);
}

TEST(IngestBpas, SingleAndArray) {
  TempDir dir;
  const auto one = ingest_bpas(dir.write("one.json", R"({"frame": ["VL","L","M","H","VH"],
      "masses": [{"subset": ["H"], "mass": 0.6}, {"subset": ["VL","L","M","H","VH"], "mass": 0.4}]})"));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].bpa.mass(Subset::singleton(Label::High)), 0.6);
  const auto rows = ingest_bpas(kData / "windows.json");
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].label, "B1, B2, B3, B4");
  EXPECT_EQ(kind_of([&] { ingest_bpas(dir.write("bad.json", R"([{"frame": ["VL"], "masses": []}])")); }),
            ErrorKind::MassSumInvalid);
}

TEST(IngestPriors, Errors) {
  TempDir dir;
  const std::vector<std::string> ids = {"B1", "B2"};
  EXPECT_EQ(ingest_priors(dir.write("p.csv", "indicator,lambda\nB2,2\nB1,1\n"), ids), (std::vector<double>{1, 2}));
  EXPECT_EQ(kind_of([&] { ingest_priors(dir.write("m.csv", "indicator,lambda\nB1,1\n"), ids); }),
            ErrorKind::MissingIndicator);
  EXPECT_EQ(kind_of([&] { ingest_priors(dir.write("u.csv", "indicator,lambda\nB1,1\nB2,1\nB3,1\n"), ids); }),
            ErrorKind::UnknownIndicator);
}

TEST(RiOverrides, MergeOntoDefaults) {
  const auto t = load_ri_table(kData / "ri.json");
  EXPECT_EQ(t.lookup(14), 1.57);
  EXPECT_EQ(t.lookup(3), 0.58);
  EXPECT_FALSE(load_ri_table(std::nullopt).lookup(14));
}

TEST(FileDigest, Sha256) {
  TempDir dir;
  EXPECT_EQ(file_digest(dir.write("abc.txt", "abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(kind_of([&] { file_digest(dir.path() / "none"); }), ErrorKind::IoError);
}

TEST(Windows, DefaultGrouping) {
  std::vector<std::string> ids;
  for (const auto& ind : indicator_catalog()) ids.push_back(ind.id);
  const auto w = sliding_windows(14, 4, 2);
  ASSERT_EQ(w.size(), 6u);
  EXPECT_EQ(window_label(ids, w.front()), "B1, B2, B3, B4");
  EXPECT_EQ(window_label(ids, w.back()), "B11, B12, B13, B14");
  EXPECT_EQ(sliding_windows(14, 14, 1).size(), 1u);
  EXPECT_EQ(sliding_windows(14, 1, 1).size(), 14u);
  EXPECT_EQ(sliding_windows(14, 5, 4).size(), 3u);
  EXPECT_EQ(kind_of([] { sliding_windows(14, 15, 1); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { sliding_windows(14, 0, 1); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { sliding_windows(14, 4, 0); }), ErrorKind::InvalidConfig);
}

TEST(RunPipeline, SampleFixture) {
  const auto m = run_pipeline(sample_config());
  EXPECT_EQ(m.by_weight.top, "B8");
  EXPECT_EQ(m.by_adjusted_weight.bottom, "B6");
  ASSERT_EQ(m.windows.size(), 6u);
  EXPECT_EQ(m.windows[2].label, "B5, B6, B7, B8");
  EXPECT_EQ(m.entropy_source, "fixture");
  EXPECT_TRUE(m.consistency.acceptable);
  EXPECT_EQ(m.expert_consistency.size(), 3u);
  ASSERT_EQ(m.ratings.size(), 14u);
  for (std::size_t i = 0; i < m.ratings.size(); ++i) {
    EXPECT_EQ(m.ratings[i].label, fixtures::reference_ratings()[i].second) << m.ratings[i].indicator;
  }
  ASSERT_TRUE(m.fixture_average);
  for (const auto& [subset, printed] : fixtures::reference_average()) {
    EXPECT_NEAR(m.fixture_average->mass(subset), printed, 0.005);
  }
  double total = 0.0;
  for (double p : m.fused_betp) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(RunPipeline, EntropyFromMatrices) {
  auto c = sample_config();
  c.entropy_fixture.reset();
  c.bpa_fixtures.reset();
  const auto m = run_pipeline(c);
  EXPECT_EQ(m.entropy_source, "matrices");
  ASSERT_EQ(m.weights.size(), 14u);
  double total = 0.0;
  for (const auto& r : m.weights) total += r.w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_FALSE(m.fixture_average);
}

TEST(RunPipeline, Deterministic) {
  const auto a = to_json(run_pipeline(sample_config()), false).dump();
  const auto b = to_json(run_pipeline(sample_config()), false).dump();
  EXPECT_EQ(a, b);
  const auto with = to_json(run_pipeline(sample_config()));
  EXPECT_TRUE(with.contains("timings_ms"));
  EXPECT_FALSE(nlohmann::json::parse(a).contains("timings_ms"));
}

TEST(RunPipeline, ManifestEchoesConfigAndDigests) {
  auto c = sample_config();
  c.alpha = fuzzy::DiscountFactor::make(0.8);
  const auto j = to_json(run_pipeline(c));
  EXPECT_EQ(j["config"]["alpha"], 0.8);
  EXPECT_EQ(j["config"]["ci_denominator"], "paper");
  EXPECT_EQ(j["config"]["window"], 4);
  EXPECT_EQ(j["input_digests"]["scores"], file_digest(c.scores));
  EXPECT_EQ(j["input_digests"].size(), 6u);
  EXPECT_EQ(j["tool_version"], std::string(kToolVersion));
}

TEST(RunPipeline, ConsistencyGate) {
  TempDir dir;
  // Intransitive judgments over the catalog: each indicator strongly beats the next.
  std::string rows;
  for (int i = 0; i < 14; ++i) {
    rows += (i ? "," : "") + std::string("[");
    for (int j = 0; j < 14; ++j) {
      std::string v = "1";
      if ((j - i + 14) % 14 == 1) v = "9";
      if ((i - j + 14) % 14 == 1) v = "1/9";
      rows += (j ? "," : "") + ("\"" + v + "\"");
    }
    rows += "]";
  }
  auto c = sample_config();
  c.matrices = dir.write("bad.json", R"({"indicators": )" + catalog_ids_json() + R"(, "experts": [{"id": "x", "matrix": [)" +
                                         rows + "]}]}");
  try {
    run_pipeline(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InconsistentMatrix);
    EXPECT_NE(e.detail().find("stage 2"), std::string::npos);
    EXPECT_NE(e.detail().find("CR"), std::string::npos);
  }
  c.force = true;
  const auto m = run_pipeline(c);
  EXPECT_TRUE(m.consistency_forced);
  EXPECT_FALSE(m.consistency.acceptable);
  EXPECT_FALSE(m.notes.empty());
}

TEST(RunPipeline, StageNamedInErrors) {
  TempDir dir;
  auto c = sample_config();
  c.scores = dir.write("s.csv", full_scores("B7"));
  const std::string msg = error_text([&] { run_pipeline(c); });
  EXPECT_NE(msg.find("MissingIndicator"), std::string::npos);
  EXPECT_NE(msg.find("[stage 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("s.csv"), std::string::npos);

  auto d = sample_config();
  d.matrices = dir.write("m.json", identity_matrix_json(2, R"(["B1","B2"])"));
  EXPECT_EQ(kind_of([&] { run_pipeline(d); }), ErrorKind::OrderMismatch);

  auto e = sample_config();
  e.ri_table.reset();
  EXPECT_EQ(kind_of([&] { run_pipeline(e); }), ErrorKind::MissingRI);

  auto f = sample_config();
  f.window = 15;
  EXPECT_EQ(kind_of([&] { run_pipeline(f); }), ErrorKind::InvalidConfig);
}

TEST(Report, CsvExportsReparse) {
  TempDir dir;
  const auto m = run_pipeline(sample_config());
  const auto files = report::emit_report(m, report::Format::Csv, dir.path());
  EXPECT_EQ(files.size(), 5u);
  std::ifstream entropy_in(dir.path() / "entropy.csv");
  EXPECT_EQ(entropy::read_table_csv(entropy_in, "entropy.csv"), m.weights);

  std::ifstream fusion_in(dir.path() / "fusion.csv");
  const auto fusion = csv::read(fusion_in, "fusion.csv");
  ASSERT_EQ(fusion.rows.size(), m.windows.size() + 1);
  EXPECT_EQ(fusion.rows.back().fields[0], "Average");
  EXPECT_EQ(fusion.rows.front().fields[0], "B1, B2, B3, B4");
  EXPECT_EQ(fusion.header.size(), 12u);
  for (const auto& row : fusion.rows) {
    double total = 0.0;
    for (std::size_t i = 1; i < row.fields.size(); ++i) total += csv::parse_number(row.fields[i], "fusion", row.line, "m");
    EXPECT_NEAR(total, 1.0, 1e-12);
  }

  std::ifstream ranking_in(dir.path() / "ranking.csv");
  EXPECT_EQ(csv::read(ranking_in, "ranking.csv").rows.size(), 42u);
  std::ifstream ratings_in(dir.path() / "ratings.csv");
  EXPECT_EQ(csv::read(ratings_in, "ratings.csv").rows.size(), 14u);
  EXPECT_FALSE(fs::exists(dir.path() / "entropy.csv.tmp"));
}

TEST(Report, JsonExportSchema) {
  TempDir dir;
  const auto m = run_pipeline(sample_config());
  report::emit_report(m, report::Format::Json, dir.path());
  const auto doc = nlohmann::json::parse(read_file(dir.path() / "report.json"));
  EXPECT_EQ(doc["schema"], "beliefrank.report/1");
  for (const char* key : {"tool_version", "consistency", "entropy", "ratings", "fusion", "verdict", "rankings"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["entropy"].size(), 14u);
  for (const auto& row : doc["entropy"]) {
    for (const char* key : {"indicator", "E", "d", "W", "lambda", "W_adj"}) EXPECT_TRUE(row.contains(key)) << key;
  }
  EXPECT_EQ(doc["fusion"]["windows"].size(), 6u);
  EXPECT_EQ(doc["fusion"]["columns"].size(), 11u);
  for (const auto& w : doc["fusion"]["windows"]) {
    EXPECT_TRUE(w["label"].is_string());
    EXPECT_TRUE(w["conflict_k"].is_number());
    EXPECT_EQ(w["masses"].size(), 11u);
  }
  EXPECT_EQ(doc["fusion"]["betp"].size(), 5u);
  EXPECT_TRUE(doc.contains("fixture_fusion"));
  for (const char* key : {"by_weight", "by_adjusted_weight", "by_belief"}) {
    EXPECT_EQ(doc["rankings"][key]["entries"].size(), 14u);
  }
  const auto manifest = nlohmann::json::parse(read_file(dir.path() / "manifest.json"));
  EXPECT_EQ(manifest["rankings"]["by_weight"]["top"], "B8");
}

TEST(Report, TextLayouts) {
  const auto m = run_pipeline(sample_config());
  const auto text = report::manifest_text(m);
  EXPECT_NE(text.find("Average"), std::string::npos);
  EXPECT_NE(text.find("B11, B12, B13, B14"), std::string::npos);
  EXPECT_NE(text.find("Pattern/Motif recognition"), std::string::npos);
  const auto entropy = report::entropy_text(m.weights);
  EXPECT_EQ(std::count(entropy.begin(), entropy.end(), '\n'), 15);
  std::vector<report::FusionRow> rows;
  for (const auto& w : fixtures::reference_windows()) rows.push_back({w.label, w.bpa});
  const auto fusion = report::fusion_text(rows, fixtures::reference_windows().front().bpa);
  EXPECT_EQ(std::count(fusion.begin(), fusion.end(), '\n'), 8);
}

TEST(Report, FormatParse) {
  EXPECT_EQ(report::parse_format("csv"), report::Format::Csv);
  EXPECT_EQ(report::to_string(report::Format::Json), "json");
  EXPECT_EQ(kind_of([] { report::parse_format("xml"); }), ErrorKind::InvalidConfig);
}

TEST(Report, NoPartialOutputOnFailure) {
  TempDir dir;
  fs::create_directories(dir.path() / "blocked");
  // The second target is an existing directory, so its rename fails.
  EXPECT_EQ(kind_of([&] {
              report::write_files_atomically({{dir.path() / "a.txt", "a"}, {dir.path() / "blocked", "b"}});
            }),
            ErrorKind::IoError);
  EXPECT_FALSE(fs::exists(dir.path() / "a.txt.tmp"));
  EXPECT_FALSE(fs::exists(dir.path() / "blocked.tmp"));
  EXPECT_EQ(kind_of([&] {
              report::write_files_atomically({{dir.path() / "missing" / "x" / "a.txt", "a"}});
            }),
            ErrorKind::IoError);
}

TEST(Chart, SeventyBarsAndDeterministic) {
  TempDir dir;
  const auto a = run_pipeline(sample_config());
  const auto b = run_pipeline(sample_config());
  const auto svg = report::chart_svg(a);
  EXPECT_EQ(svg, report::chart_svg(b));
  const std::regex bar("<rect class=\"bar\"");
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), bar), std::sregex_iterator()), 70);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
  report::emit_chart(a, dir.path() / "out" / "chart.svg");
  EXPECT_EQ(read_file(dir.path() / "out" / "chart.svg"), svg);
}
