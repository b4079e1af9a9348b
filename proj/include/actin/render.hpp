#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "actin/state.hpp"

namespace actin {

// Space-time diagram, one pixel per cell: width = n, height = tau + 1,
// row t is the state at step t. Resting maps to byte 0, excited to 255.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    std::uint8_t at(int col, int row) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }

    bool operator==(const ImageBuffer&) const = default;
};

ImageBuffer render_chain(const SpaceTimeRecord& rec, Chain chain);

// Pixel 255 where the chains disagree at (i, t).
ImageBuffer render_incoherence(const SpaceTimeRecord& rec);

// Binary PGM (P5), maxval 255; byte-deterministic.
void write_pgm(const ImageBuffer& img, const std::filesystem::path& path);

} // namespace actin
