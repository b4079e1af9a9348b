#include "actin/stepper.hpp"

#include <bit>
#include <stdexcept>

namespace actin {

namespace {

inline int cell_or_zero(const ChainState& c, int i) {
    return (i < 0 || i >= c.size()) ? 0 : c.cells[static_cast<std::size_t>(i)];
}

} // namespace

int neighbor_sum(const AutomatonState& s, Chain chain, int i) {
    const int n = s.size();
    if (i < 0 || i >= n) {
        throw std::domain_error("site index out of range");
    }
    if (chain == Chain::x) {
        return cell_or_zero(s.x, i - 1) + cell_or_zero(s.x, i + 1) +
               cell_or_zero(s.y, i) + cell_or_zero(s.y, i - 1);
    }
    return cell_or_zero(s.y, i - 1) + cell_or_zero(s.y, i + 1) +
           cell_or_zero(s.x, i) + cell_or_zero(s.x, i + 1);
}

AutomatonState step(const AutomatonState& s, const Rule& rule) {
    const int n = s.size();
    AutomatonState next = make_resting_state(n);
    next.t = s.t + 1;
    for (int i = 0; i < n; ++i) {
        next.x.cells[i] = rule.f[s.x.cells[i]][neighbor_sum(s, Chain::x, i)];
        next.y.cells[i] = rule.f[s.y.cells[i]][neighbor_sum(s, Chain::y, i)];
    }
    return next;
}

PackedAutomaton::PackedAutomaton(const Rule& rule, const AutomatonState& initial)
    : n_(initial.size()), t_(initial.t) {
    if (n_ < 1) {
        throw std::domain_error("chain length must be positive");
    }
    words_ = (n_ + 63) / 64;
    const int rem = n_ % 64;
    tail_mask_ = rem == 0 ? ~0ull : ((1ull << rem) - 1);
    for (int s = 0; s < 2; ++s) {
        for (int j = 0; j < 5; ++j) {
            m_[s][j] = rule.f[s][j] ? ~0ull : 0ull;
        }
    }
    x_.assign(words_, 0);
    y_.assign(words_, 0);
    nx_.assign(words_, 0);
    ny_.assign(words_, 0);
    for (int i = 0; i < n_; ++i) {
        if (initial.x.cells[i]) x_[i / 64] |= 1ull << (i % 64);
        if (initial.y.cells[i]) y_[i / 64] |= 1ull << (i % 64);
    }
}

// Bit-sliced evaluation of f[v][a+b+c+d] on 64 sites at once. The four
// neighbour masks are summed into three bits (s0, u0, u1); u1 set means
// the sum is exactly 4.
std::uint64_t PackedAutomaton::transition(std::uint64_t v, std::uint64_t a, std::uint64_t b,
                                          std::uint64_t c, std::uint64_t d) const {
    const std::uint64_t t0 = a ^ b, c0 = a & b;
    const std::uint64_t t1 = c ^ d, c1 = c & d;
    const std::uint64_t s0 = t0 ^ t1, c2 = t0 & t1;
    const std::uint64_t u0 = c0 ^ c1 ^ c2;
    const std::uint64_t u1 = (c0 & c1) | (c0 & c2) | (c1 & c2);

    const std::uint64_t e0 = ~s0 & ~u0 & ~u1;
    const std::uint64_t e1 = s0 & ~u0 & ~u1;
    const std::uint64_t e2 = ~s0 & u0 & ~u1;
    const std::uint64_t e3 = s0 & u0 & ~u1;
    const std::uint64_t e4 = u1;

    const std::uint64_t from0 = (m_[0][0] & e0) | (m_[0][1] & e1) | (m_[0][2] & e2) |
                                (m_[0][3] & e3) | (m_[0][4] & e4);
    const std::uint64_t from1 = (m_[1][0] & e0) | (m_[1][1] & e1) | (m_[1][2] & e2) |
                                (m_[1][3] & e3) | (m_[1][4] & e4);
    return (~v & from0) | (v & from1);
}

void PackedAutomaton::step_once() {
    const int W = words_;
    for (int w = 0; w < W; ++w) {
        const std::uint64_t x = x_[w];
        const std::uint64_t y = y_[w];
        const std::uint64_t x_lo = w > 0 ? x_[w - 1] : 0;
        const std::uint64_t x_hi = w + 1 < W ? x_[w + 1] : 0;
        const std::uint64_t y_lo = w > 0 ? y_[w - 1] : 0;
        const std::uint64_t y_hi = w + 1 < W ? y_[w + 1] : 0;

        const std::uint64_t x_left = (x << 1) | (x_lo >> 63);   // x[i-1]
        const std::uint64_t x_right = (x >> 1) | (x_hi << 63);  // x[i+1]
        const std::uint64_t y_left = (y << 1) | (y_lo >> 63);   // y[i-1]
        const std::uint64_t y_right = (y >> 1) | (y_hi << 63);  // y[i+1]

        nx_[w] = transition(x, x_left, x_right, y, y_left);
        ny_[w] = transition(y, y_left, y_right, x, x_right);
    }
    nx_[W - 1] &= tail_mask_;
    ny_[W - 1] &= tail_mask_;
    x_.swap(nx_);
    y_.swap(ny_);
    ++t_;
}

int PackedAutomaton::excited_count() const {
    int total = 0;
    for (int w = 0; w < words_; ++w) {
        total += std::popcount(x_[w]) + std::popcount(y_[w]);
    }
    return total;
}

bool PackedAutomaton::any_excited() const {
    for (int w = 0; w < words_; ++w) {
        if (x_[w] | y_[w]) return true;
    }
    return false;
}

int PackedAutomaton::min_excited_index() const {
    for (int w = 0; w < words_; ++w) {
        const std::uint64_t m = x_[w] | y_[w];
        if (m) return w * 64 + std::countr_zero(m);
    }
    return -1;
}

int PackedAutomaton::max_excited_index() const {
    for (int w = words_ - 1; w >= 0; --w) {
        const std::uint64_t m = x_[w] | y_[w];
        if (m) return w * 64 + 63 - std::countl_zero(m);
    }
    return -1;
}

ChainState PackedAutomaton::unpack_chain(Chain c) const {
    const std::vector<std::uint64_t>& words = c == Chain::x ? x_ : y_;
    ChainState out(n_);
    for (int i = 0; i < n_; ++i) {
        out.cells[i] = (words[i / 64] >> (i % 64)) & 1;
    }
    return out;
}

AutomatonState PackedAutomaton::unpack() const {
    AutomatonState s;
    s.x = unpack_chain(Chain::x);
    s.y = unpack_chain(Chain::y);
    s.t = t_;
    return s;
}

SpaceTimeRecord run(const Rule& rule, const AutomatonState& initial, int tau) {
    if (tau < 1) {
        throw std::domain_error("tau must be >= 1");
    }
    SpaceTimeRecord rec;
    rec.rule = rule;
    rec.n = initial.size();
    rec.tau = tau;
    rec.rows_x.reserve(static_cast<std::size_t>(tau) + 1);
    rec.rows_y.reserve(static_cast<std::size_t>(tau) + 1);
    rec.rows_x.push_back(initial.x);
    rec.rows_y.push_back(initial.y);
    PackedAutomaton engine(rule, initial);
    for (int t = 1; t <= tau; ++t) {
        engine.step_once();
        rec.rows_x.push_back(engine.unpack_chain(Chain::x));
        rec.rows_y.push_back(engine.unpack_chain(Chain::y));
    }
    return rec;
}

SpaceTimeRecord run_reference(const Rule& rule, const AutomatonState& initial, int tau) {
    if (tau < 1) {
        throw std::domain_error("tau must be >= 1");
    }
    SpaceTimeRecord rec;
    rec.rule = rule;
    rec.n = initial.size();
    rec.tau = tau;
    rec.rows_x.push_back(initial.x);
    rec.rows_y.push_back(initial.y);
    AutomatonState s = initial;
    for (int t = 1; t <= tau; ++t) {
        s = step(s, rule);
        rec.rows_x.push_back(s.x);
        rec.rows_y.push_back(s.y);
    }
    return rec;
}

} // namespace actin
