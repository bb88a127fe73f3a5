#pragma once

// Seeded random tables. All draws go through the helpers below rather than
// <random> distributions so sequences are identical across standard libraries.

#include "vhb/geometry.hpp"

#include <cstdint>
#include <random>

namespace vhb {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);
/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

struct PolyominoOptions {
    int grid = 4;             ///< cells per axis of the underlying grid
    int min_cells = 3;
    int max_cells = 9;
    int max_holes = 1;
    double hole_probability = 0.3;
    std::int64_t max_denominator = 6;  ///< column widths / row heights are k/den
};

/// Random simply connected polyomino boundary with random rational column
/// widths and row heights, plus optional rectangular holes placed strictly
/// inside single cells.
VHTable random_polyomino_table(Rng& rng, const PolyominoOptions& opts = {});

/// Rejection-samples positive lengths k/denominator (1 <= k <= max_units) for
/// `word`, repairing closure and rejecting self-intersecting outcomes.
VHPolygon random_polygon_for_word(const CombinatoricsWord& word, Rng& rng, std::int64_t denominator,
                                  std::int64_t max_units, int max_attempts = 10000);

}  // namespace vhb
