#pragma once

#include <array>
#include <cstdint>

#include "actin/state.hpp"

namespace actin {

// Census of the 3x3 space-time windows (3 sites wide, 3 steps tall) that
// lie fully inside one chain's n x (tau+1) matrix and contain at least one
// excited cell. Keys are 9-bit row-major patterns, top-left cell in the
// most significant bit. The all-zero pattern is excluded by construction,
// so counts[0] == 0 and the counts sum to eta.
struct WindowHistogram {
    std::array<std::uint32_t, 512> counts{};
    std::uint64_t eta = 0;

    int distinct() const;
};

// Throws std::domain_error unless n >= 3 and tau >= 2.
WindowHistogram window_histogram(const SpaceTimeRecord& rec, Chain chain);

double shannon_entropy(const WindowHistogram& hist);    // nats, 0 when eta == 0
double simpson_diversity(const WindowHistogram& hist);  // 0 when eta == 0
double richness(const WindowHistogram& hist);           // distinct / 512

// Fraction of cells whose 3x3 space-time neighbourhood (clipped at the
// matrix edges) contains at least one excited cell.
double space_filling(const SpaceTimeRecord& rec, Chain chain);

// Mean excited fraction of the chain over all n*(tau+1) cells.
double activity(const SpaceTimeRecord& rec, Chain chain);

// |sum x - sum y| / (n*(tau+1)).
double incoherence(const SpaceTimeRecord& rec);

// Reciprocal of the deflate-compressed size of the chain serialized
// row-major, one byte per cell, zlib level 6.
double compressibility(const SpaceTimeRecord& rec, Chain chain = Chain::x);

struct MetricsRecord {
    double H = 0;  // Shannon entropy of window patterns
    double D = 0;  // Simpson diversity
    double P = 0;  // space filling
    double R = 0;  // morphological richness
    double A = 0;  // activity
    double I = 0;  // incoherence between chains
    double Z = 0;  // compressibility
};

// H, D, P, R, A and Z on the chosen chain; I always uses both chains.
MetricsRecord compute_all(const SpaceTimeRecord& rec, Chain chain = Chain::x);

// Research variant: window census merged over both chains, P/A averaged.
MetricsRecord compute_all_stacked(const SpaceTimeRecord& rec);

} // namespace actin
