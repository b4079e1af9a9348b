#include "actin/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <zlib.h>

namespace actin {

namespace {

constexpr int deflate_level = 6;

void accumulate_windows(const SpaceTimeRecord& rec, Chain chain, WindowHistogram& h) {
    const int rows = rec.tau + 1;
    const int cols = rec.n;
    for (int r = 0; r + 3 <= rows; ++r) {
        const auto& a = rec.row(chain, r).cells;
        const auto& b = rec.row(chain, r + 1).cells;
        const auto& c = rec.row(chain, r + 2).cells;
        unsigned key = (a[0] << 8) | (a[1] << 7) | (a[2] << 6) |
                       (b[0] << 5) | (b[1] << 4) | (b[2] << 3) |
                       (c[0] << 2) | (c[1] << 1) | c[2];
        for (int s = 0;;) {
            if (key != 0) {
                ++h.counts[key];
                ++h.eta;
            }
            if (++s + 3 > cols) break;
            key = ((key & 0xDBu) << 1) | (a[s + 2] << 6) | (b[s + 2] << 3) | c[s + 2];
        }
    }
}

long cell_sum(const SpaceTimeRecord& rec, Chain chain) {
    long total = 0;
    const auto& rows = chain == Chain::x ? rec.rows_x : rec.rows_y;
    for (const ChainState& row : rows) {
        for (std::uint8_t v : row.cells) total += v;
    }
    return total;
}

std::vector<std::uint8_t> serialize_chain(const SpaceTimeRecord& rec, Chain chain) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<std::size_t>(rec.n) * (rec.tau + 1));
    const auto& rows = chain == Chain::x ? rec.rows_x : rec.rows_y;
    for (const ChainState& row : rows) {
        bytes.insert(bytes.end(), row.cells.begin(), row.cells.end());
    }
    return bytes;
}

long marked_cell_count(const SpaceTimeRecord& rec, Chain chain) {
    const int rows = rec.tau + 1;
    const int cols = rec.n;
    long marked = 0;
    for (int t = 0; t < rows; ++t) {
        const int t0 = t > 0 ? t - 1 : 0;
        const int t1 = t + 1 < rows ? t + 1 : rows - 1;
        for (int i = 0; i < cols; ++i) {
            const int i0 = i > 0 ? i - 1 : 0;
            const int i1 = i + 1 < cols ? i + 1 : cols - 1;
            bool hit = false;
            for (int tt = t0; tt <= t1 && !hit; ++tt) {
                const auto& row = rec.row(chain, tt).cells;
                for (int ii = i0; ii <= i1; ++ii) {
                    if (row[ii]) {
                        hit = true;
                        break;
                    }
                }
            }
            if (hit) ++marked;
        }
    }
    return marked;
}

} // namespace

int WindowHistogram::distinct() const {
    int d = 0;
    for (std::uint32_t c : counts) {
        if (c) ++d;
    }
    return d;
}

WindowHistogram window_histogram(const SpaceTimeRecord& rec, Chain chain) {
    if (rec.n < 3 || rec.tau < 2) {
        throw std::domain_error("space-time matrix too small for 3x3 windows");
    }
    WindowHistogram h;
    accumulate_windows(rec, chain, h);
    return h;
}

double shannon_entropy(const WindowHistogram& hist) {
    if (hist.eta == 0) return 0.0;
    const double eta = static_cast<double>(hist.eta);
    double H = 0.0;
    for (std::uint32_t c : hist.counts) {
        if (c == 0) continue;
        const double p = c / eta;
        H -= p * std::log(p);
    }
    return H;
}

double simpson_diversity(const WindowHistogram& hist) {
    if (hist.eta == 0) return 0.0;
    const double eta = static_cast<double>(hist.eta);
    double sum = 0.0;
    for (std::uint32_t c : hist.counts) {
        if (c == 0) continue;
        const double p = c / eta;
        sum += p * p;
    }
    return 1.0 - sum;
}

double richness(const WindowHistogram& hist) {
    return hist.distinct() / 512.0;
}

double space_filling(const SpaceTimeRecord& rec, Chain chain) {
    const double cells = static_cast<double>(rec.n) * (rec.tau + 1);
    return marked_cell_count(rec, chain) / cells;
}

double activity(const SpaceTimeRecord& rec, Chain chain) {
    const double cells = static_cast<double>(rec.n) * (rec.tau + 1);
    return cell_sum(rec, chain) / cells;
}

double incoherence(const SpaceTimeRecord& rec) {
    const double cells = static_cast<double>(rec.n) * (rec.tau + 1);
    const long diff = cell_sum(rec, Chain::x) - cell_sum(rec, Chain::y);
    return (diff < 0 ? -diff : diff) / cells;
}

double compressibility(const SpaceTimeRecord& rec, Chain chain) {
    const std::vector<std::uint8_t> bytes = serialize_chain(rec, chain);
    uLongf out_size = compressBound(static_cast<uLong>(bytes.size()));
    std::vector<std::uint8_t> out(out_size);
    const int rc = compress2(out.data(), &out_size, bytes.data(),
                             static_cast<uLong>(bytes.size()), deflate_level);
    if (rc != Z_OK) {
        throw std::runtime_error("deflate failed");
    }
    return 1.0 / static_cast<double>(out_size);
}

MetricsRecord compute_all(const SpaceTimeRecord& rec, Chain chain) {
    const WindowHistogram hist = window_histogram(rec, chain);
    MetricsRecord m;
    m.H = shannon_entropy(hist);
    m.D = simpson_diversity(hist);
    m.P = space_filling(rec, chain);
    m.R = richness(hist);
    m.A = activity(rec, chain);
    m.I = incoherence(rec);
    m.Z = compressibility(rec, chain);
    return m;
}

MetricsRecord compute_all_stacked(const SpaceTimeRecord& rec) {
    if (rec.n < 3 || rec.tau < 2) {
        throw std::domain_error("space-time matrix too small for 3x3 windows");
    }
    WindowHistogram hist;
    accumulate_windows(rec, Chain::x, hist);
    accumulate_windows(rec, Chain::y, hist);
    MetricsRecord m;
    m.H = shannon_entropy(hist);
    m.D = simpson_diversity(hist);
    m.R = richness(hist);
    m.P = 0.5 * (space_filling(rec, Chain::x) + space_filling(rec, Chain::y));
    m.A = 0.5 * (activity(rec, Chain::x) + activity(rec, Chain::y));
    m.I = incoherence(rec);
    m.Z = compressibility(rec, Chain::x);
    return m;
}

} // namespace actin
