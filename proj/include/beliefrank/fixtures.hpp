#pragma once

// Published reference values for the fourteen-indicator study: the entropy
// weighting table, the per-indicator linguistic ratings, and the windowed
// evidence-fusion table with its average row.

#include <string>
#include <utility>
#include <vector>

#include "beliefrank/core.hpp"
#include "beliefrank/entropy.hpp"

namespace beliefrank::fixtures {

/// E, d, W, lambda and W' per indicator exactly as printed (three or four
/// decimals). The W and W' columns do not follow from E and lambda; they are
/// reference values only.
const entropy::EntropyTable& reference_weights();

/// One linguistic rating per indicator.
const std::vector<std::pair<std::string, Label>>& reference_ratings();

struct PublishedWindow {
  std::string label;  // "B1, B2, B3, B4"
  Bpa bpa;            // printed masses, residual on theta
};

/// The six window rows of the fusion table.
const std::vector<PublishedWindow>& reference_windows();

/// The printed "Average" row (theta not printed).
const MassMap& reference_average();

/// Column order of the fusion table: five singletons, then the four
/// adjacent pairs.
const std::vector<Subset>& fusion_columns();

}  // namespace beliefrank::fixtures
