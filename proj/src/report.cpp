#include "beliefrank/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "beliefrank/csv.hpp"
#include "beliefrank/fixtures.hpp"

namespace beliefrank::report {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string column_name(Subset s) {
  std::string out;
  for (Label l : s.members()) out += (out.empty() ? "" : ",") + std::string(short_name(l));
  return out;
}

// Masses in fusion-table column order, then theta, then everything else.
std::vector<double> fusion_cells(const Bpa& b) {
  const auto& columns = fixtures::fusion_columns();
  std::vector<double> cells;
  double listed = 0.0;
  for (Subset s : columns) {
    cells.push_back(b.mass(s));
    listed += b.mass(s);
  }
  const double theta = b.mass(b.frame().theta());
  cells.push_back(theta);
  std::vector<double> rest;
  for (const auto& [s, m] : b.masses()) {
    if (s == b.frame().theta() || std::find(columns.begin(), columns.end(), s) != columns.end()) continue;
    rest.push_back(m);
  }
  cells.push_back(stable_sum(rest));
  return cells;
}

std::vector<std::string> fusion_header() {
  std::vector<std::string> h;
  for (Subset s : fixtures::fusion_columns()) h.push_back(column_name(s));
  h.emplace_back("theta");
  h.emplace_back("other");
  return h;
}

nlohmann::json report_json(const pipeline::RunManifest& m) {
  nlohmann::json ratings = nlohmann::json::array();
  for (const auto& r : m.ratings) {
    ratings.push_back({{"indicator", r.indicator}, {"score", r.score}, {"label", std::string(short_name(r.label))}});
  }
  const auto header = fusion_header();
  auto cells_json = [&](const Bpa& b) {
    nlohmann::json row = nlohmann::json::object();
    const auto cells = fusion_cells(b);
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    return row;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& w : m.windows) {
    rows.push_back({{"label", w.label}, {"conflict_k", w.result.conflict_k}, {"masses", cells_json(w.result.bpa)}});
  }
  nlohmann::json betp = nlohmann::json::object();
  for (std::size_t i = 0; i < m.fused_betp.size(); ++i) betp[std::string(short_name(kLabels[i]))] = m.fused_betp[i];
  nlohmann::json doc = {
      {"schema", "beliefrank.report/1"},
      {"tool_version", m.tool_version},
      {"consistency", ahp::to_json(m.consistency)},
      {"entropy", entropy::to_json(m.weights)},
      {"ratings", ratings},
      {"fusion", {{"columns", header}, {"windows", rows}, {"average", cells_json(m.fused)}, {"betp", betp}}},
      {"verdict", std::string(short_name(m.verdict))},
      {"rankings",
       {{"by_weight", evidence::to_json(m.by_weight)},
        {"by_adjusted_weight", evidence::to_json(m.by_adjusted_weight)},
        {"by_belief", evidence::to_json(m.by_belief)}}},
  };
  if (m.fixture_average) {
    nlohmann::json fixture_rows = nlohmann::json::array();
    for (const auto& f : m.fixture_windows) fixture_rows.push_back({{"label", f.label}, {"masses", cells_json(f.bpa)}});
    doc["fixture_fusion"] = {{"windows", fixture_rows}, {"average", cells_json(*m.fixture_average)}};
  }
  return doc;
}

}  // namespace

std::string_view to_string(Format f) {
  switch (f) {
    case Format::Text: return "text";
    case Format::Csv: return "csv";
    case Format::Json: return "json";
  }
  return "text";
}

Format parse_format(std::string_view text) {
  if (text == "text") return Format::Text;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw Error(ErrorKind::InvalidConfig, "format must be text, csv or json, got '" + std::string(text) + "'");
}

std::string entropy_text(const entropy::EntropyTable& table) {
  std::ostringstream out;
  out << pad_right("Indicator", 10) << pad("E", 8) << pad("d", 8) << pad("W", 8) << pad("lambda", 8) << pad("W'", 8)
      << '\n';
  for (const auto& r : table) {
    out << pad_right(r.indicator, 10) << pad(fixed(r.e), 8) << pad(fixed(r.d), 8) << pad(fixed(r.w), 8)
        << pad(r.lambda ? fixed(*r.lambda, 4) : "-", 8) << pad(r.w_adj ? fixed(*r.w_adj) : "-", 8) << '\n';
  }
  return out.str();
}

std::string ratings_text(const std::vector<pipeline::IndicatorRating>& ratings) {
  std::ostringstream out;
  out << pad_right("Indicator", 10) << pad_right("Description", 50) << pad("Score", 7) << "  Rating\n";
  for (const auto& r : ratings) {
    out << pad_right(r.indicator, 10) << pad_right(r.description, 50) << pad(fixed(r.score, 2), 7) << "  "
        << short_name(r.label) << '\n';
  }
  return out.str();
}

std::string ratings_csv(const std::vector<pipeline::IndicatorRating>& ratings) {
  std::ostringstream out;
  out << "indicator,score,label\n";
  for (const auto& r : ratings) out << csv::escape(r.indicator) << ',' << csv::shortest(r.score) << ',' << short_name(r.label) << '\n';
  return out.str();
}

std::string ranking_text(const evidence::RankingReport& r) {
  std::ostringstream out;
  out << "Ranking by " << r.method << " (top " << r.top << ", bottom " << r.bottom << ")\n";
  for (const auto& e : r.entries) out << pad(std::to_string(e.rank), 4) << "  " << pad_right(e.indicator, 6) << fixed(e.value, 4) << '\n';
  return out.str();
}

std::string ranking_csv(const std::vector<const evidence::RankingReport*>& reports) {
  std::ostringstream out;
  out << "method,rank,indicator,value\n";
  for (const auto* r : reports) {
    for (const auto& e : r->entries) {
      out << csv::escape(r->method) << ',' << e.rank << ',' << csv::escape(e.indicator) << ',' << csv::shortest(e.value)
          << '\n';
    }
  }
  return out.str();
}

std::string fusion_csv(const std::vector<FusionRow>& rows, const Bpa& average) {
  std::ostringstream out;
  out << "combination";
  for (const auto& h : fusion_header()) out << ',' << csv::escape(h);
  out << '\n';
  auto line = [&](const std::string& label, const Bpa& b) {
    out << csv::escape(label);
    for (double v : fusion_cells(b)) out << ',' << csv::shortest(v);
    out << '\n';
  };
  for (const auto& r : rows) line(r.label, r.bpa);
  line("Average", average);
  return out.str();
}

std::string fusion_text(const std::vector<FusionRow>& rows, const Bpa& average) {
  std::ostringstream out;
  out << pad_right("Evidence combination", 22);
  for (const auto& h : fusion_header()) out << pad(h, 7);
  out << '\n';
  auto line = [&](const std::string& label, const Bpa& b) {
    out << pad_right(label, 22);
    for (double v : fusion_cells(b)) out << pad(fixed(v, 2), 7);
    out << '\n';
  };
  for (const auto& r : rows) line(r.label, r.bpa);
  line("Average", average);
  return out.str();
}

std::string manifest_text(const pipeline::RunManifest& m) {
  std::ostringstream out;
  out << "beliefrank " << m.tool_version << "\n\n";
  out << "Consistency (aggregated, CI denominator " << ahp::to_string(m.consistency.mode) << ")\n";
  out << "  lambda_max " << fixed(m.consistency.lambda_max, 6) << "  CI " << fixed(m.consistency.ci, 6) << "  RI "
      << fixed(m.consistency.ri, 2) << "  CR " << fixed(m.consistency.cr, 6) << "  "
      << (m.consistency.acceptable ? "acceptable" : "NOT acceptable") << (m.consistency_forced ? " (forced)" : "")
      << "\n";
  for (const auto& e : m.expert_consistency) {
    out << "  expert " << e.expert << ": CR " << fixed(e.report.cr, 6) << (e.report.acceptable ? "" : " (not acceptable)")
        << '\n';
  }
  out << "\nCriterion weights (entropy source: " << m.entropy_source << ")\n" << entropy_text(m.weights);
  out << "\nIndicator ratings\n" << ratings_text(m.ratings);

  std::vector<FusionRow> rows;
  for (const auto& w : m.windows) rows.push_back({w.label, w.result.bpa});
  out << "\nEvidence fusion per window (Murphy)\n" << fusion_text(rows, m.fused);
  out << "Pignistic:";
  for (std::size_t i = 0; i < m.fused_betp.size(); ++i) out << ' ' << short_name(kLabels[i]) << '=' << fixed(m.fused_betp[i]);
  out << "  verdict " << short_name(m.verdict) << '\n';

  if (m.fixture_average) {
    std::vector<FusionRow> fixture_rows;
    for (const auto& f : m.fixture_windows) fixture_rows.push_back({f.label, f.bpa});
    out << "\nFixture fusion rows\n" << fusion_text(fixture_rows, *m.fixture_average);
  }

  out << '\n' << ranking_text(m.by_weight) << '\n' << ranking_text(m.by_adjusted_weight) << '\n' << ranking_text(m.by_belief);
  if (!m.notes.empty()) {
    out << "\nNotes\n";
    for (const auto& n : m.notes) out << "  - " << n << '\n';
  }
  return out.str();
}

void write_files_atomically(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, contents] : files) {
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) temps.push_back(tmp);
    if (!out || !(out << contents) || !(out.flush())) {
      cleanup();
      throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw Error(ErrorKind::IoError, "cannot move " + temps[i].string() + " into place: " + ec.message());
    }
  }
}

std::vector<fs::path> emit_report(const pipeline::RunManifest& m, Format format, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out_dir / "manifest.json", pipeline::to_json(m).dump(2) + "\n");
  switch (format) {
    case Format::Text:
      files.emplace_back(out_dir / "report.txt", manifest_text(m));
      break;
    case Format::Csv: {
      std::ostringstream entropy_csv;
      entropy::write_table_csv(entropy_csv, m.weights);
      files.emplace_back(out_dir / "entropy.csv", entropy_csv.str());
      files.emplace_back(out_dir / "ratings.csv", ratings_csv(m.ratings));
      std::vector<FusionRow> rows;
      for (const auto& w : m.windows) rows.push_back({w.label, w.result.bpa});
      files.emplace_back(out_dir / "fusion.csv", fusion_csv(rows, m.fused));
      files.emplace_back(out_dir / "ranking.csv",
                         ranking_csv({&m.by_weight, &m.by_adjusted_weight, &m.by_belief}));
      break;
    }
    case Format::Json:
      files.emplace_back(out_dir / "report.json", report_json(m).dump(2) + "\n");
      break;
  }
  write_files_atomically(files);
  std::vector<fs::path> paths;
  for (const auto& [p, _] : files) paths.push_back(p);
  return paths;
}

std::string chart_svg(const pipeline::RunManifest& m) {
  constexpr int kBarWidth = 9;
  constexpr int kGroupGap = 16;
  constexpr int kLeft = 50;
  constexpr int kTop = 40;
  constexpr int kPlotHeight = 240;
  constexpr std::array<const char*, 5> kSeries = {"E", "d", "W", "lambda", "W_adj"};
  constexpr std::array<const char*, 5> kColors = {"#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#e15759"};

  const int groups = static_cast<int>(m.weights.size());
  const int group_width = static_cast<int>(kSeries.size()) * kBarWidth + kGroupGap;
  const int width = kLeft + groups * group_width + 20;
  const int height = kTop + kPlotHeight + 60;

  auto values_of = [](const entropy::EntropyRow& r) {
    return std::array<double, 5>{r.e, r.d, r.w, r.lambda.value_or(0.0), r.w_adj.value_or(0.0)};
  };
  double max_value = 0.0;
  for (const auto& r : m.weights) {
    for (double v : values_of(r)) max_value = std::max(max_value, v);
  }
  if (max_value <= 0.0) max_value = 1.0;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<title>Criterion weighting per indicator</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  const int baseline = kTop + kPlotHeight;
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << baseline << "\" x2=\"" << width - 10 << "\" y2=\"" << baseline
      << "\" stroke=\"#333333\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = max_value * tick / 4.0;
    const double y = baseline - kPlotHeight * tick / 4.0;
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(y + 4, 1) << "\" font-size=\"10\" text-anchor=\"end\">"
        << fixed(v, 2) << "</text>\n";
  }
  for (int g = 0; g < groups; ++g) {
    const auto& row = m.weights[static_cast<std::size_t>(g)];
    const auto values = values_of(row);
    const int x0 = kLeft + g * group_width + kGroupGap / 2;
    for (std::size_t s = 0; s < kSeries.size(); ++s) {
      const double h = kPlotHeight * values[s] / max_value;
      svg << "<rect class=\"bar\" data-indicator=\"" << row.indicator << "\" data-series=\"" << kSeries[s]
          << "\" x=\"" << x0 + static_cast<int>(s) * kBarWidth << "\" y=\"" << fixed(baseline - h, 3)
          << "\" width=\"" << kBarWidth - 1 << "\" height=\"" << fixed(h, 3) << "\" fill=\"" << kColors[s]
          << "\"/>\n";
    }
    svg << "<text x=\"" << x0 + static_cast<int>(kSeries.size()) * kBarWidth / 2 << "\" y=\"" << baseline + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << row.indicator << "</text>\n";
  }
  for (std::size_t s = 0; s < kSeries.size(); ++s) {
    const int x = kLeft + static_cast<int>(s) * 90;
    svg << "<rect class=\"legend\" x=\"" << x << "\" y=\"12\" width=\"12\" height=\"12\" fill=\"" << kColors[s]
        << "\"/>\n"
        << "<text x=\"" << x + 16 << "\" y=\"22\" font-size=\"11\">" << kSeries[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_chart(const pipeline::RunManifest& m, const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  write_files_atomically({{path, chart_svg(m)}});
}

}  // namespace beliefrank::report
