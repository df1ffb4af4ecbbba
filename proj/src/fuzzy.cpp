#include "beliefrank/fuzzy.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace beliefrank::fuzzy {

namespace {

// One segment of the piecewise-linear family: on [lo, hi] the falling edge of
// `down` is a - 0.4x and the rising edge of `down + 1` is 0.4x - (a - 1).
struct Segment {
  double lo;
  double hi;
  Label down;
  double intercept;
};

constexpr std::array<Segment, 4> kSegments = {{
    {0.0, 2.5, Label::VeryLow, 1.0},
    {2.5, 5.0, Label::Low, 2.0},
    {5.0, 7.5, Label::Medium, 3.0},
    {7.5, 10.0, Label::High, 4.0},
}};

constexpr double kSlope = 0.4;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0) + 0.0; }

}  // namespace

std::vector<Label> MembershipVector::active() const {
  std::vector<Label> out;
  for (Label l : kLabels) {
    if ((*this)[l] > 0.0) out.push_back(l);
  }
  return out;
}

DiscountFactor DiscountFactor::make(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "discount factor " << alpha << " is outside [0, 1]";
    throw Error(ErrorKind::InvalidAlpha, msg.str());
  }
  return DiscountFactor(alpha);
}

std::string_view to_string(OverlapMode mode) { return mode == OverlapMode::Adjacent ? "adjacent" : "theta"; }

OverlapMode parse_overlap_mode(std::string_view text) {
  if (text == "adjacent") return OverlapMode::Adjacent;
  if (text == "theta") return OverlapMode::Theta;
  throw Error(ErrorKind::InvalidConfig, "overlap mode must be 'adjacent' or 'theta', got '" + std::string(text) + "'");
}

MembershipVector membership(double x) {
  Score::make(x);
  MembershipVector v;
  for (const auto& seg : kSegments) {
    if (x <= seg.hi) {
      const auto lower = static_cast<std::size_t>(grade_index(seg.down));
      v.mu[lower] = clamp01(seg.intercept - kSlope * x);
      v.mu[lower + 1] = clamp01(kSlope * x - (seg.intercept - 1.0));
      break;
    }
  }
  return v;
}

Label rating_label(const MembershipVector& v) {
  Label best = Label::VeryLow;
  for (Label l : kLabels) {
    if (v[l] > v[best]) best = l;  // strict: ties keep the lower grade
  }
  return best;
}

Bpa to_bpa(const MembershipVector& v, DiscountFactor alpha, OverlapMode mode) {
  const Frame frame;
  const double a = alpha.value();
  MassMap masses;
  std::vector<double> singles;
  Subset activated;
  for (Label l : v.active()) {
    const double m = a * v[l];
    activated = unite(activated, Subset::singleton(l));
    if (m > 0.0) {
      masses[Subset::singleton(l)] = m;
      singles.push_back(m);
    }
  }
  const double remainder = 1.0 - stable_sum(singles);
  Subset target = frame.theta();
  if (remainder >= kPruneThreshold) {
    target = (mode == OverlapMode::Adjacent && activated.size() == 2) ? activated : frame.theta();
    masses[target] += remainder;
  } else {
    target = masses.begin()->first;
    for (const auto& [s, m] : masses) {
      if (m > masses[target]) target = s;
    }
  }
  // Fold rounding residue into one element until the sum is exact.
  for (int i = 0; i < 4; ++i) {
    std::vector<double> parts;
    for (const auto& [s, m] : masses) parts.push_back(m);
    const double total = stable_sum(parts);
    if (total == 1.0) break;
    masses[target] += 1.0 - total;
  }
  return validate_bpa(masses, frame);
}

Bpa discount(const Bpa& b, DiscountFactor alpha) {
  const double a = alpha.value();
  const Subset theta = b.frame().theta();
  MassMap out;
  for (const auto& [s, m] : b.masses()) {
    if (s != theta) out[s] = a * m;
  }
  out[theta] = 1.0 - a + a * b.mass(theta);
  return prune_and_validate(out, b.frame());
}

double peak_score(Label l) { return 2.5 * grade_index(l); }

}  // namespace beliefrank::fuzzy
