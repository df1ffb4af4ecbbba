#include "beliefrank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace beliefrank::oracle {

evidence::CombinationResult brute_force_combine(const Bpa& m1, const Bpa& m2) {
  if (m1.frame() != m2.frame()) throw Error(ErrorKind::FrameMismatch, "oracle inputs use different frames");
  const Frame frame = m1.frame();
  const int count = frame.subset_count();

  std::vector<double> a(static_cast<std::size_t>(count), 0.0);
  std::vector<double> b(static_cast<std::size_t>(count), 0.0);
  for (int s = 0; s < count; ++s) {
    a[s] = m1.mass(Subset::from_mask(static_cast<std::uint8_t>(s)));
    b[s] = m2.mass(Subset::from_mask(static_cast<std::uint8_t>(s)));
  }

  std::vector<double> joint(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) joint[i & j] += a[i] * b[j];
  }
  const double k = joint[0];
  if (std::abs(1.0 - k) <= evidence::kTotalConflictTolerance) {
    throw Error(ErrorKind::TotalConflict, "oracle: total conflict");
  }

  MassMap out;
  for (int s = 1; s < count; ++s) {
    if (joint[s] != 0.0) out[Subset::from_mask(static_cast<std::uint8_t>(s))] = joint[s] / (1.0 - k);
  }
  return {validate_bpa(out, frame), k};
}

double characteristic_value(const std::vector<std::vector<double>>& m, double lambda) {
  const std::size_t n = m.size();
  auto a = m;
  for (std::size_t i = 0; i < n; ++i) a[i][i] -= lambda;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

double largest_eigenvalue_bisection(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  double bound = 0.0;
  for (const auto& row : m) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    bound = std::max(bound, s);
  }
  double hi = bound + 1.0;
  const bool sign_hi = std::signbit(characteristic_value(m, hi));
  const double step = (bound + 1.0) / (2000.0 * static_cast<double>(n));
  double lo = hi;
  while (lo > -bound - 1.0) {
    lo = hi - step;
    const double v = characteristic_value(m, lo);
    if (v == 0.0) return lo;
    if (std::signbit(v) != sign_hi) break;
    hi = lo;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double v = characteristic_value(m, mid);
    if (v == 0.0) return mid;
    if (std::signbit(v) == sign_hi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace beliefrank::oracle
