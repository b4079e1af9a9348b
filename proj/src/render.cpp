#include "actin/render.hpp"

#include <fstream>
#include <stdexcept>

namespace actin {

ImageBuffer render_chain(const SpaceTimeRecord& rec, Chain chain) {
    ImageBuffer img;
    img.width = rec.n;
    img.height = rec.tau + 1;
    img.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
    const auto& rows = chain == Chain::x ? rec.rows_x : rec.rows_y;
    for (const ChainState& row : rows) {
        for (std::uint8_t cell : row.cells) {
            img.pixels.push_back(cell ? 255 : 0);
        }
    }
    return img;
}

ImageBuffer render_incoherence(const SpaceTimeRecord& rec) {
    ImageBuffer img;
    img.width = rec.n;
    img.height = rec.tau + 1;
    img.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
    for (int t = 0; t <= rec.tau; ++t) {
        const auto& xr = rec.rows_x[t].cells;
        const auto& yr = rec.rows_y[t].cells;
        for (int i = 0; i < rec.n; ++i) {
            img.pixels.push_back(xr[i] != yr[i] ? 255 : 0);
        }
    }
    return img;
}

void write_pgm(const ImageBuffer& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

} // namespace actin
