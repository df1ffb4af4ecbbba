#pragma once

#include <array>
#include <string_view>

#include "beliefrank/core.hpp"

namespace beliefrank::fuzzy {

/// Membership grade of a score in each of the five linguistic sets.
struct MembershipVector {
  std::array<double, kLabelCount> mu{};

  double operator[](Label l) const { return mu[static_cast<std::size_t>(grade_index(l))]; }
  /// Labels with nonzero membership, in grade order.
  std::vector<Label> active() const;

  bool operator==(const MembershipVector&) const = default;
};

/// Evidence reliability alpha in [0, 1]; 1 - alpha is the discount rate.
class DiscountFactor {
 public:
  constexpr DiscountFactor() = default;
  /// Throws InvalidAlpha outside [0, 1].
  static DiscountFactor make(double alpha);

  constexpr double value() const { return alpha_; }

 private:
  constexpr explicit DiscountFactor(double a) : alpha_(a) {}
  double alpha_ = 1.0;
};

/// Where the discounted remainder 1 - alpha lands in to_bpa.
enum class OverlapMode {
  Adjacent,  // on the pair of activated neighbours, or theta if only one is active
  Theta,     // always on theta (plain discounting)
};

std::string_view to_string(OverlapMode mode);
/// "adjacent" or "theta"; throws InvalidConfig otherwise.
OverlapMode parse_overlap_mode(std::string_view text);

/// Triangular memberships on [0, 10] with peaks at 0, 2.5, 5, 7.5 and 10;
/// neighbouring sets cross at 0.5 and the five grades sum to one everywhere.
/// Throws ScoreOutOfRange.
MembershipVector membership(double x);
inline MembershipVector membership(Score s) { return membership(s.value); }

/// Grade with the highest membership, ties to the lower grade.
Label rating_label(const MembershipVector& v);

/// Singleton masses alpha * mu(A); the remainder goes according to `mode`.
Bpa to_bpa(const MembershipVector& v, DiscountFactor alpha, OverlapMode mode = OverlapMode::Adjacent);

/// m'(A) = alpha m(A) for A != theta, m'(theta) = 1 - alpha + alpha m(theta).
Bpa discount(const Bpa& b, DiscountFactor alpha);

/// Score whose membership in `l` is exactly one: 0, 2.5, 5, 7.5, 10.
double peak_score(Label l);

}  // namespace beliefrank::fuzzy
