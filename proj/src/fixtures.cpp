#include "beliefrank/fixtures.hpp"

#include <array>

namespace beliefrank::fixtures {

namespace {

using enum Label;

constexpr Subset kVL = Subset::singleton(VeryLow);
constexpr Subset kL = Subset::singleton(Low);
constexpr Subset kM = Subset::singleton(Medium);
constexpr Subset kH = Subset::singleton(High);
constexpr Subset kVH = Subset::singleton(VeryHigh);
constexpr Subset kVL_L = Subset::of({VeryLow, Low});
constexpr Subset kL_M = Subset::of({Low, Medium});
constexpr Subset kM_H = Subset::of({Medium, High});
constexpr Subset kH_VH = Subset::of({High, VeryHigh});

// Printed masses per row in fusion_columns() order.
struct PrintedRow {
  const char* label;
  std::array<double, 9> masses;
};

constexpr std::array<PrintedRow, 6> kWindowRows = {{
    {"B1, B2, B3, B4", {0, 0, 0, 0, 0, 0, 0.01, 0.02, 0.03}},
    {"B3, B4, B5, B6", {0, 0, 0, 0, 0, 0, 0.01, 0.02, 0.01}},
    {"B5, B6, B7, B8", {0, 0, 0, 0.2, 0, 0, 0.01, 0.11, 0.11}},
    {"B7, B8, B9, B10", {0, 0, 0, 0.2, 0, 0, 0, 0.08, 0.08}},
    {"B9, B10, B11, B12", {0, 0, 0, 0.1, 0, 0.02, 0.01, 0.04, 0.04}},
    {"B11, B12, B13, B14", {0, 0, 0, 0.1, 0, 0.02, 0.01, 0.03, 0.03}},
}};

}  // namespace

const entropy::EntropyTable& reference_weights() {
  static const entropy::EntropyTable table = {
      {"B1", 0.966, 0.034, 0.245, 0.2333, 0.313},   {"B2", 0.963, 0.037, 0.263, 0.2333, 0.336},
      {"B3", 0.985, 0.015, 0.106, 0.2333, 0.135},   {"B4", 0.982, 0.018, 0.13, 0.1834, 0.13},
      {"B5", 0.977, 0.023, 0.166, 0.0667, 0.061},   {"B6", 0.987, 0.013, 0.091, 0.05, 0.025},
      {"B7", 0.856, 0.144, 0.0293, 0.4, 0.355},     {"B8", 0.735, 0.265, 0.54, 0.3, 0.492},
      {"B9", 0.918, 0.082, 0.167, 0.3, 0.152},      {"B10", 0.996, 0.004, 0.024, 0.1667, 0.27},
      {"B11", 0.965, 0.035, 0.184, 0.1333, 0.17},   {"B12", 0.975, 0.025, 0.13, 0.15, 0.136},
      {"B13", 0.992, 0.008, 0.043, 0.15, 0.045},    {"B14", 0.945, 0.055, 0.129, 0.1833, 0.372},
  };
  return table;
}

const std::vector<std::pair<std::string, Label>>& reference_ratings() {
  static const std::vector<std::pair<std::string, Label>> ratings = {
      {"B1", Medium}, {"B2", VeryHigh}, {"B3", High},     {"B4", Medium},   {"B5", Medium},
      {"B6", VeryHigh}, {"B7", High},   {"B8", High},     {"B9", High},     {"B10", VeryLow},
      {"B11", VeryLow}, {"B12", Low},   {"B13", VeryLow}, {"B14", High},
  };
  return ratings;
}

const std::vector<Subset>& fusion_columns() {
  static const std::vector<Subset> columns = {kVL, kL, kM, kH, kVH, kVL_L, kL_M, kM_H, kH_VH};
  return columns;
}

const std::vector<PublishedWindow>& reference_windows() {
  static const std::vector<PublishedWindow> windows = [] {
    std::vector<PublishedWindow> out;
    const auto& columns = fusion_columns();
    const Frame frame;
    for (const auto& row : kWindowRows) {
      MassMap masses;
      double listed = 0.0;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (row.masses[c] > 0.0) masses[columns[c]] = row.masses[c];
        listed += row.masses[c];
      }
      masses[frame.theta()] = 1.0 - listed;
      out.push_back({row.label, validate_bpa(masses, frame)});
    }
    return out;
  }();
  return windows;
}

const MassMap& reference_average() {
  static const MassMap average = {
      {kVL, 0.0}, {kL, 0.0}, {kM, 0.0}, {kH, 0.1}, {kVH, 0.0},
      {kVL_L, 0.01}, {kL_M, 0.01}, {kM_H, 0.05}, {kH_VH, 0.05},
  };
  return average;
}

}  // namespace beliefrank::fixtures
