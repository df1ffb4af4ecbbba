#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefrank/error.hpp"

namespace beliefrank {

/// Linguistic grades of the evaluation frame, in grade order.
enum class Label : std::uint8_t { VeryLow = 0, Low, Medium, High, VeryHigh };

inline constexpr int kLabelCount = 5;
inline constexpr std::array<Label, kLabelCount> kLabels = {Label::VeryLow, Label::Low, Label::Medium,
                                                           Label::High, Label::VeryHigh};

constexpr int grade_index(Label l) { return static_cast<int>(l); }

/// "VL", "L", "M", "H", "VH".
std::string_view short_name(Label l);
/// "Very Low" ... "Very High".
std::string_view long_name(Label l);
/// Inverse of short_name; throws ParseError on anything else.
Label parse_label(std::string_view text);

/// A set of labels, stored as a bitmask over the first `Frame::size` grades
/// (bit i = grade i). Ordered by cardinality, then by mask, so singletons
/// iterate in grade order ahead of pairs and the full frame sorts last.
class Subset {
 public:
  constexpr Subset() = default;

  static constexpr Subset from_mask(std::uint8_t mask) { return Subset(mask); }
  static constexpr Subset singleton(Label l) { return Subset(static_cast<std::uint8_t>(1u << grade_index(l))); }
  static constexpr Subset of(std::initializer_list<Label> labels) {
    std::uint8_t m = 0;
    for (Label l : labels) m |= static_cast<std::uint8_t>(1u << grade_index(l));
    return Subset(m);
  }
  /// The first `size` grades.
  static constexpr Subset first(int size) { return Subset(static_cast<std::uint8_t>((1u << size) - 1u)); }

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(Label l) const { return (mask_ >> grade_index(l)) & 1u; }
  constexpr int size() const { return __builtin_popcount(mask_); }
  constexpr bool is_subset_of(Subset other) const { return (mask_ & ~other.mask_) == 0; }

  /// Members in grade order.
  std::vector<Label> members() const;

  constexpr bool operator==(const Subset&) const = default;
  constexpr std::strong_ordering operator<=>(const Subset& other) const {
    if (auto c = size() <=> other.size(); c != 0) return c;
    return mask_ <=> other.mask_;
  }

 private:
  constexpr explicit Subset(std::uint8_t mask) : mask_(mask) {}
  std::uint8_t mask_ = 0;
};

constexpr Subset intersect(Subset a, Subset b) { return Subset::from_mask(a.mask() & b.mask()); }
constexpr Subset unite(Subset a, Subset b) { return Subset::from_mask(a.mask() | b.mask()); }
constexpr int cardinality(Subset a) { return a.size(); }

/// "{M,H}", "{}" for the empty set.
std::string to_string(Subset s);

/// Frame of discernment. The public pipeline always uses the five-grade
/// frame; smaller frames exist so the algebra can be exercised exhaustively.
class Frame {
 public:
  constexpr Frame() = default;
  explicit Frame(int size);

  constexpr int size() const { return size_; }
  constexpr Subset theta() const { return Subset::first(size_); }
  constexpr bool contains(Subset s) const { return s.is_subset_of(theta()); }
  /// Number of subsets, 2^size.
  constexpr int subset_count() const { return 1 << size_; }
  std::vector<Label> labels() const;

  constexpr bool operator==(const Frame&) const = default;

 private:
  int size_ = kLabelCount;
};

/// Unvalidated focal-element masses, as read from input or produced mid-computation.
using MassMap = std::map<Subset, double>;

inline constexpr double kMassSumTolerance = 1e-9;
inline constexpr double kPruneThreshold = 1e-12;

/// A basic probability assignment. Instances only come out of validate_bpa,
/// so every Bpa satisfies: masses in [0,1], no empty-set mass, sum 1.
class Bpa {
 public:
  /// The vacuous assignment on the five-grade frame.
  Bpa() : masses_{{Frame{}.theta(), 1.0}} {}
  /// m(theta) = 1.
  static Bpa vacuous(Frame frame = Frame{});

  const MassMap& masses() const { return masses_; }
  Frame frame() const { return frame_; }
  /// Mass of `s`, zero when `s` is not focal.
  double mass(Subset s) const;
  std::vector<Subset> focal_elements() const;
  double total() const;

  bool operator==(const Bpa&) const = default;

 private:
  friend Bpa validate_bpa(const MassMap& masses, Frame frame);
  Bpa(Frame frame, MassMap masses) : frame_(frame), masses_(std::move(masses)) {}

  Frame frame_;
  MassMap masses_;
};

/// Checks every Bpa invariant. Zero entries are dropped. A sum within 1e-9
/// of one is rescaled proportionally; deviations under 1e-14 are rounding
/// noise and left alone, which keeps the function idempotent bit-for-bit.
Bpa validate_bpa(const MassMap& masses, Frame frame = Frame{});
Bpa validate_bpa(const Bpa& b);

/// Drops entries below kPruneThreshold, then validates.
Bpa prune_and_validate(const MassMap& masses, Frame frame);

/// Neumaier-compensated sum.
double stable_sum(const std::vector<double>& values);

struct Score {
  double value = 0.0;

  /// Throws ScoreOutOfRange unless 0 <= value <= 10.
  static Score make(double value);
};

struct Indicator {
  std::string id;
  std::string description;

  bool operator==(const Indicator&) const = default;
};

/// The fourteen evaluated tool categories, B1..B14.
const std::vector<Indicator>& indicator_catalog();
/// Position in the catalog, or -1.
int catalog_index(std::string_view id);
/// Natural order on ids: "B2" < "B10".
bool indicator_id_less(std::string_view a, std::string_view b);

// --- JSON ---------------------------------------------------------------

/// {"frame": ["VL",...], "masses": [{"subset": ["M","H"], "mass": 0.05}, ...]}
nlohmann::json bpa_to_json(const Bpa& b);
/// Throws ParseError on malformed documents, then validate_bpa errors.
Bpa bpa_from_json(const nlohmann::json& doc);

nlohmann::json catalog_to_json(const std::vector<Indicator>& catalog);
std::vector<Indicator> catalog_from_json(const nlohmann::json& doc);

}  // namespace beliefrank
