#include "beliefrank/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace beliefrank {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MassOutOfRange: return "MassOutOfRange";
    case ErrorKind::MassSumInvalid: return "MassSumInvalid";
    case ErrorKind::NonzeroEmptySet: return "NonzeroEmptySet";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::MissingRI: return "MissingRI";
    case ErrorKind::InconsistentMatrix: return "InconsistentMatrix";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::DegenerateRows: return "DegenerateRows";
    case ErrorKind::AllZeroDivergence: return "AllZeroDivergence";
    case ErrorKind::DegeneratePriors: return "DegeneratePriors";
    case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorKind::InvalidAlpha: return "InvalidAlpha";
    case ErrorKind::TotalConflict: return "TotalConflict";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingIndicator: return "MissingIndicator";
    case ErrorKind::UnknownIndicator: return "UnknownIndicator";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

constexpr std::array<std::string_view, kLabelCount> kShortNames = {"VL", "L", "M", "H", "VH"};
constexpr std::array<std::string_view, kLabelCount> kLongNames = {"Very Low", "Low", "Medium", "High",
                                                                  "Very High"};

// Deviations from 1 below this are floating-point noise, not modeling error.
constexpr double kRenormalizeFloor = 1e-14;

}  // namespace

std::string_view short_name(Label l) { return kShortNames[grade_index(l)]; }
std::string_view long_name(Label l) { return kLongNames[grade_index(l)]; }

Label parse_label(std::string_view text) {
  for (Label l : kLabels) {
    if (short_name(l) == text) return l;
  }
  throw Error(ErrorKind::ParseError, "unknown label '" + std::string(text) + "' (expected VL, L, M, H or VH)");
}

std::vector<Label> Subset::members() const {
  std::vector<Label> out;
  for (Label l : kLabels) {
    if (contains(l)) out.push_back(l);
  }
  return out;
}

std::string to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (Label l : s.members()) {
    if (!first) out += ',';
    out += short_name(l);
    first = false;
  }
  return out + "}";
}

Frame::Frame(int size) : size_(size) {
  if (size < 1 || size > kLabelCount) {
    throw Error(ErrorKind::FrameMismatch, "frame size must be in 1.." + std::to_string(kLabelCount));
  }
}

std::vector<Label> Frame::labels() const { return theta().members(); }

Bpa Bpa::vacuous(Frame frame) { return Bpa(frame, MassMap{{frame.theta(), 1.0}}); }

double Bpa::mass(Subset s) const {
  auto it = masses_.find(s);
  return it == masses_.end() ? 0.0 : it->second;
}

std::vector<Subset> Bpa::focal_elements() const {
  std::vector<Subset> out;
  out.reserve(masses_.size());
  for (const auto& [s, m] : masses_) out.push_back(s);
  return out;
}

double Bpa::total() const {
  std::vector<double> v;
  v.reserve(masses_.size());
  for (const auto& [s, m] : masses_) v.push_back(m);
  return stable_sum(v);
}

double stable_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

Bpa validate_bpa(const MassMap& masses, Frame frame) {
  MassMap kept;
  std::vector<double> values;
  for (const auto& [s, m] : masses) {
    if (!frame.contains(s)) {
      throw Error(ErrorKind::FrameMismatch, "subset " + to_string(s) + " lies outside a frame of size " +
                                                std::to_string(frame.size()));
    }
    if (!(m >= 0.0 && m <= 1.0 + kMassSumTolerance)) {
      std::ostringstream msg;
      msg << "mass " << m << " on " << to_string(s) << " is outside [0, 1]";
      throw Error(ErrorKind::MassOutOfRange, msg.str());
    }
    if (s.empty()) {
      if (m != 0.0) {
        std::ostringstream msg;
        msg << "empty set carries mass " << m;
        throw Error(ErrorKind::NonzeroEmptySet, msg.str());
      }
      continue;
    }
    if (m == 0.0) continue;
    kept.emplace(s, std::min(m, 1.0));
    values.push_back(std::min(m, 1.0));
  }

  const double sum = stable_sum(values);
  const double drift = std::abs(sum - 1.0);
  if (!(drift <= kMassSumTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "masses sum to " << sum << ", expected 1 within " << kMassSumTolerance;
    throw Error(ErrorKind::MassSumInvalid, msg.str());
  }
  if (drift > kRenormalizeFloor) {
    for (auto& [s, m] : kept) m /= sum;
  }
  return Bpa(frame, std::move(kept));
}

Bpa validate_bpa(const Bpa& b) { return validate_bpa(b.masses(), b.frame()); }

Bpa prune_and_validate(const MassMap& masses, Frame frame) {
  MassMap kept;
  for (const auto& [s, m] : masses) {
    if (m >= kPruneThreshold) kept.emplace(s, m);
  }
  return validate_bpa(kept, frame);
}

Score Score::make(double value) {
  if (!(value >= 0.0 && value <= 10.0)) {
    std::ostringstream msg;
    msg << "score " << value << " is outside [0, 10]";
    throw Error(ErrorKind::ScoreOutOfRange, msg.str());
  }
  return Score{value};
}

const std::vector<Indicator>& indicator_catalog() {
  static const std::vector<Indicator> catalog = {
      {"B1", "Align Sequences"},
      {"B2", "Feature selection"},
      {"B3", "Find Genes"},
      {"B4", "Find t RNA"},
      {"B5", "Find Transcriptional elements"},
      {"B6", "Online primer design sites"},
      {"B7", "ORF identification"},
      {"B8", "Pattern/Motif recognition"},
      {"B9", "PCR oligonucleotide resources"},
      {"B10", "PCR primer selection"},
      {"B11", "PCR primers software"},
      {"B12", "Restriction, Detect repeats & unusual Patterns"},
      {"B13", "Transmembrane domain Identification"},
      {"B14", "Other Tools"},
  };
  return catalog;
}

int catalog_index(std::string_view id) {
  const auto& catalog = indicator_catalog();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

bool indicator_id_less(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    return std::pair{s.substr(0, i), s.substr(i)};
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (pa != pb) return pa < pb;
  // Compare digit runs numerically without overflow: shorter (after leading zeros) is smaller.
  auto strip = [](std::string_view d) {
    while (d.size() > 1 && d.front() == '0') d.remove_prefix(1);
    return d;
  };
  auto da = strip(na);
  auto db = strip(nb);
  if (da.size() != db.size()) return da.size() < db.size();
  if (da != db) return da < db;
  return a < b;
}

nlohmann::json bpa_to_json(const Bpa& b) {
  nlohmann::json frame = nlohmann::json::array();
  for (Label l : b.frame().labels()) frame.push_back(std::string(short_name(l)));
  nlohmann::json masses = nlohmann::json::array();
  for (const auto& [s, m] : b.masses()) {
    nlohmann::json subset = nlohmann::json::array();
    for (Label l : s.members()) subset.push_back(std::string(short_name(l)));
    masses.push_back({{"subset", subset}, {"mass", m}});
  }
  return {{"frame", frame}, {"masses", masses}};
}

namespace {

Subset subset_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, "\"subset\" must be an array of labels");
  std::uint8_t mask = 0;
  for (const auto& item : arr) {
    if (!item.is_string()) throw Error(ErrorKind::ParseError, "subset members must be label strings");
    Label l = parse_label(item.get<std::string>());
    const auto bit = static_cast<std::uint8_t>(1u << grade_index(l));
    if (mask & bit) {
      throw Error(ErrorKind::ParseError, "label " + item.get<std::string>() + " repeated in subset");
    }
    mask |= bit;
  }
  return Subset::from_mask(mask);
}

}  // namespace

Bpa bpa_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "BPA document must be a JSON object");
  if (!doc.contains("frame") || !doc.at("frame").is_array()) {
    throw Error(ErrorKind::ParseError, "BPA document needs a \"frame\" array");
  }
  const auto& frame_arr = doc.at("frame");
  if (frame_arr.empty() || frame_arr.size() > kLabelCount) {
    throw Error(ErrorKind::ParseError, "\"frame\" must list between 1 and 5 labels");
  }
  for (std::size_t i = 0; i < frame_arr.size(); ++i) {
    if (!frame_arr[i].is_string() || frame_arr[i].get<std::string>() != short_name(kLabels[i])) {
      throw Error(ErrorKind::ParseError, "\"frame\" must list labels in grade order VL, L, M, H, VH");
    }
  }
  Frame frame(static_cast<int>(frame_arr.size()));

  if (!doc.contains("masses") || !doc.at("masses").is_array()) {
    throw Error(ErrorKind::ParseError, "BPA document needs a \"masses\" array");
  }
  MassMap masses;
  std::size_t index = 0;
  for (const auto& entry : doc.at("masses")) {
    const std::string where = "masses[" + std::to_string(index++) + "]";
    if (!entry.is_object() || !entry.contains("subset") || !entry.contains("mass")) {
      throw Error(ErrorKind::ParseError, where + " needs \"subset\" and \"mass\"");
    }
    if (!entry.at("mass").is_number()) throw Error(ErrorKind::ParseError, where + ".mass must be a number");
    Subset s = subset_from_json(entry.at("subset"));
    if (masses.contains(s)) throw Error(ErrorKind::ParseError, where + " repeats subset " + to_string(s));
    masses.emplace(s, entry.at("mass").get<double>());
  }
  return validate_bpa(masses, frame);
}

nlohmann::json catalog_to_json(const std::vector<Indicator>& catalog) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& ind : catalog) out.push_back({{"id", ind.id}, {"description", ind.description}});
  return out;
}

std::vector<Indicator> catalog_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "catalog must be a JSON array");
  std::vector<Indicator> out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("id") || !item.contains("description") ||
        !item.at("id").is_string() || !item.at("description").is_string()) {
      throw Error(ErrorKind::ParseError, "catalog entries need string \"id\" and \"description\"");
    }
    Indicator ind{item.at("id").get<std::string>(), item.at("description").get<std::string>()};
    for (const auto& existing : out) {
      if (existing.id == ind.id) throw Error(ErrorKind::ParseError, "duplicate indicator id " + ind.id);
    }
    out.push_back(std::move(ind));
  }
  return out;
}

}  // namespace beliefrank
