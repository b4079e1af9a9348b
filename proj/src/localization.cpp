#include "actin/localization.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "actin/stepper.hpp"

namespace actin {

std::string seed_bits(std::uint8_t pattern) {
    std::string out(5, '0');
    for (int k = 0; k < 5; ++k) {
        if ((pattern >> (4 - k)) & 1) out[static_cast<std::size_t>(k)] = '1';
    }
    return out;
}

std::vector<Seed> enumerate_seeds(int n) {
    if (n < 20) {
        throw std::domain_error("chain too short for seed placement");
    }
    std::vector<Seed> seeds;
    seeds.reserve(1024);
    const int place = n / 2 - 2;
    for (int sx = 0; sx < 32; ++sx) {
        for (int sy = 0; sy < 32; ++sy) {
            seeds.push_back({static_cast<std::uint8_t>(sx), static_cast<std::uint8_t>(sy), place});
        }
    }
    return seeds;
}

AutomatonState seed_state(const Seed& seed, int n) {
    if (seed.placement < 0 || seed.placement + 5 > n) {
        throw std::domain_error("seed placement out of range");
    }
    AutomatonState s = make_resting_state(n);
    for (int k = 0; k < 5; ++k) {
        s.x.cells[seed.placement + k] = (seed.sx >> (4 - k)) & 1;
        s.y.cells[seed.placement + k] = (seed.sy >> (4 - k)) & 1;
    }
    return s;
}

const char* to_string(LocalizationKind k) {
    switch (k) {
        case LocalizationKind::stationary: return "stationary";
        case LocalizationKind::travelling: return "travelling";
        default: return "none";
    }
}

namespace {

// b == a shifted by d sites (d > 0 towards higher indices)?
bool shifted_equal(const std::uint64_t* a, const std::uint64_t* b, int d, int words,
                   std::uint64_t tail_mask) {
    const int mag = d < 0 ? -d : d;
    const int q = mag / 64;
    const int r = mag % 64;
    for (int w = 0; w < words; ++w) {
        std::uint64_t shifted;
        if (d >= 0) {
            const std::uint64_t lo = w - q >= 0 ? a[w - q] : 0;
            const std::uint64_t lo2 = w - q - 1 >= 0 ? a[w - q - 1] : 0;
            shifted = r == 0 ? lo : (lo << r) | (lo2 >> (64 - r));
        } else {
            const std::uint64_t hi = w + q < words ? a[w + q] : 0;
            const std::uint64_t hi2 = w + q + 1 < words ? a[w + q + 1] : 0;
            shifted = r == 0 ? hi : (hi >> r) | (hi2 << (64 - r));
        }
        if (w == words - 1) shifted &= tail_mask;
        if (shifted != b[w]) return false;
    }
    return true;
}

// Fixed-capacity ring of packed (x, y) snapshots for the periodicity probe.
class FrameRing {
public:
    FrameRing(int capacity, int words)
        : capacity_(capacity), words_(words),
          data_(static_cast<std::size_t>(capacity) * words * 2), min_index_(capacity) {}

    void push(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y,
              int min_index) {
        const int slot = size_ < capacity_ ? size_ : head_;
        std::uint64_t* dst = data_.data() + static_cast<std::size_t>(slot) * words_ * 2;
        std::copy(x.begin(), x.end(), dst);
        std::copy(y.begin(), y.end(), dst + words_);
        min_index_[slot] = min_index;
        if (size_ < capacity_) {
            ++size_;
        } else {
            head_ = (head_ + 1) % capacity_;
        }
    }

    int size() const { return size_; }
    // s = 0 is the oldest retained frame.
    const std::uint64_t* x_at(int s) const { return frame(s); }
    const std::uint64_t* y_at(int s) const { return frame(s) + words_; }
    int min_index_at(int s) const { return min_index_[slot(s)]; }

private:
    int slot(int s) const { return size_ < capacity_ ? s : (head_ + s) % capacity_; }
    const std::uint64_t* frame(int s) const {
        return data_.data() + static_cast<std::size_t>(slot(s)) * words_ * 2;
    }

    int capacity_;
    int words_;
    int size_ = 0;
    int head_ = 0;
    std::vector<std::uint64_t> data_;
    std::vector<int> min_index_;
};

// Smallest period p <= max_period with a common shift d such that every
// frame in the ring repeats p steps later displaced by d.
std::optional<std::pair<int, int>> find_shift_period(const FrameRing& ring, int max_period,
                                                     int words, std::uint64_t tail_mask) {
    const int count = ring.size();
    for (int p = 1; p <= max_period && p < count; ++p) {
        const int d = ring.min_index_at(p) - ring.min_index_at(0);
        bool ok = true;
        for (int s = 0; s + p < count; ++s) {
            if (ring.min_index_at(s + p) - ring.min_index_at(s) != d ||
                !shifted_equal(ring.x_at(s), ring.x_at(s + p), d, words, tail_mask) ||
                !shifted_equal(ring.y_at(s), ring.y_at(s + p), d, words, tail_mask)) {
                ok = false;
                break;
            }
        }
        if (ok) return std::make_pair(p, d);
    }
    return std::nullopt;
}

} // namespace

namespace {

struct StepTrace {
    std::vector<int> count;  // excited cells, both chains, per step
    std::vector<int> lo;     // lowest excited index per step, -1 when resting
    std::vector<int> hi;
};

// Verdict for a run whose cumulative activity blew through the band: the
// pattern exploded at some point, but the paper's travelling rules routinely
// spawn a clean localization first (a glider reaching the chain end ignites
// the background). The longest phase of bounded per-step activity decides:
// support growth or net drift beyond the stationary span reads travelling,
// a static support reads stationary, no phase long enough reads none.
LocalizationKind classify_localized_phase(const StepTrace& trace, int steps, int tau,
                                          const ClassifierConfig& cfg) {
    const int phase_cap = cfg.max_step_count;
    const int min_len = std::min(cfg.probe_window, std::max(2, (tau + 1) / 4));
    int best_begin = 0, best_len = 0;
    for (int t = 0; t < steps;) {
        if (trace.count[t] < 1 || trace.count[t] > phase_cap) {
            ++t;
            continue;
        }
        int b = t;
        while (t < steps && trace.count[t] >= 1 && trace.count[t] <= phase_cap) ++t;
        if (t - b > best_len) {
            best_begin = b;
            best_len = t - b;
        }
    }
    if (best_len < min_len) {
        return LocalizationKind::none;
    }

    const int probe = std::min(20, best_len / 4 + 1);
    int lo_a = trace.lo[best_begin], hi_a = trace.hi[best_begin];
    double mid_a = 0, mid_b = 0;
    for (int t = best_begin; t < best_begin + probe; ++t) {
        lo_a = std::min(lo_a, trace.lo[t]);
        hi_a = std::max(hi_a, trace.hi[t]);
        mid_a += 0.5 * (trace.lo[t] + trace.hi[t]);
    }
    const int tail = best_begin + best_len - probe;
    int lo_b = trace.lo[tail], hi_b = trace.hi[tail];
    for (int t = tail; t < best_begin + best_len; ++t) {
        lo_b = std::min(lo_b, trace.lo[t]);
        hi_b = std::max(hi_b, trace.hi[t]);
        mid_b += 0.5 * (trace.lo[t] + trace.hi[t]);
    }
    const double drift = (mid_b - mid_a) / probe;
    const int growth = (hi_b - lo_b) - (hi_a - lo_a);
    if (growth > cfg.stationary_span || std::abs(drift) > cfg.stationary_span) {
        return LocalizationKind::travelling;
    }
    return LocalizationKind::stationary;
}

} // namespace

LocalizationVerdict classify_seed(const Rule& rule, const Seed& seed, int n, int tau,
                                  const ClassifierConfig& cfg) {
    if (tau < 100) {
        throw std::domain_error("tau must be >= 100 for localization classification");
    }
    // The activity band is defined on a single chain's accumulated count. The
    // verdict diagnostic sums both chains, so the bounds double; this keeps
    // the test symmetric under chain exchange where counting chain x alone
    // would not be.
    const long ceiling = 2 * cfg.activity_max_per_tau * static_cast<long>(tau);
    const long floor = 2 * cfg.activity_min;
    const bool can_die = rule.f[0][0] == 0;  // resting background is a fixed point
    const int window = std::min(cfg.probe_window, tau);
    const int words = (n + 63) / 64;

    PackedAutomaton engine(rule, seed_state(seed, n));
    FrameRing ring(window, words);
    StepTrace trace;
    trace.count.reserve(tau + 1);
    trace.lo.reserve(tau + 1);
    trace.hi.reserve(tau + 1);

    LocalizationVerdict v;
    int count = engine.excited_count();
    v.total_activity = count;
    bool alive_all = count > 0;
    int max_step_count = count;
    int lo = engine.min_excited_index();
    int hi = engine.max_excited_index();
    ring.push(engine.x_words(), engine.y_words(), lo);
    trace.count.push_back(count);
    trace.lo.push_back(lo);
    trace.hi.push_back(hi);

    int steps_recorded = 1;
    for (int t = 1; t <= tau; ++t) {
        engine.step_once();
        count = engine.excited_count();
        v.total_activity += count;
        int mn = -1, mx = -1;
        if (count == 0) {
            alive_all = false;
            if (can_die) break;
        } else {
            mn = engine.min_excited_index();
            mx = engine.max_excited_index();
            if (lo < 0 || mn < lo) lo = mn;
            if (mx > hi) hi = mx;
            if (count > max_step_count) max_step_count = count;
        }
        ring.push(engine.x_words(), engine.y_words(), mn);
        trace.count.push_back(count);
        trace.lo.push_back(mn);
        trace.hi.push_back(mx);
        ++steps_recorded;
    }

    v.persisted = alive_all;
    v.support_span = lo >= 0 ? hi - lo + 1 : 0;

    // A run that left the band did not stay a localization to the end, but it
    // may well have produced one first: a glider can blow up the background
    // when it reaches the chain end, or be absorbed there and die. Either way
    // the verdict comes from the longest bounded phase of the trace.
    if (v.total_activity > ceiling || !alive_all) {
        v.kind = classify_localized_phase(trace, steps_recorded, tau, cfg);
        return v;
    }
    if (v.total_activity < floor) {
        return v;
    }

    if (v.support_span <= cfg.stationary_span) {
        v.kind = LocalizationKind::stationary;
        return v;
    }
    if (v.support_span > cfg.travelling_span && max_step_count <= cfg.max_step_count) {
        v.kind = LocalizationKind::travelling;
        return v;
    }

    // Middle band, or a wide span with activity spikes: decide by the
    // shift-periodicity of the final window.
    const auto pd = find_shift_period(ring, cfg.max_period, words, engine.tail_mask());
    if (pd) {
        v.period = pd->first;
        v.shift = pd->second;
        v.kind = pd->second == 0 ? LocalizationKind::stationary : LocalizationKind::travelling;
    }
    return v;
}

RuleLocalizationCounts count_localizations(const Rule& rule, int n, int tau,
                                           const ClassifierConfig& cfg) {
    RuleLocalizationCounts out{rule.code0, rule.code1, 0, 0};
    if (rule.f[0][0]) {
        return out;  // background ignites everywhere: no seed can stay in the band
    }
    for (const Seed& seed : enumerate_seeds(n)) {
        const LocalizationVerdict v = classify_seed(rule, seed, n, tau, cfg);
        if (v.kind == LocalizationKind::travelling) {
            ++out.travelling;
        } else if (v.kind == LocalizationKind::stationary) {
            ++out.stationary;
        }
    }
    return out;
}

} // namespace actin
