#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "actin/rule.hpp"
#include "actin/state.hpp"

namespace actin {

// Count of excited neighbours of site i on the given chain, 0..4.
// Out-of-range neighbours read as permanently resting.
int neighbor_sum(const AutomatonState& s, Chain chain, int i);

// Reference per-site synchronous stepper. This is the oracle every
// optimised path is tested against.
AutomatonState step(const AutomatonState& s, const Rule& rule);

// Word-parallel engine: each chain lives in 64-bit words, one bit per
// site, bit i of word i/64. Semantics are identical to step().
class PackedAutomaton {
public:
    PackedAutomaton(const Rule& rule, const AutomatonState& initial);

    void step_once();

    int n() const { return n_; }
    long time() const { return t_; }

    // Excited cells at the current step, both chains.
    int excited_count() const;
    bool any_excited() const;
    // Lowest/highest excited site index over both chains, -1 when resting.
    int min_excited_index() const;
    int max_excited_index() const;

    ChainState unpack_chain(Chain c) const;
    AutomatonState unpack() const;

    int words() const { return words_; }
    std::uint64_t tail_mask() const { return tail_mask_; }
    const std::vector<std::uint64_t>& x_words() const { return x_; }
    const std::vector<std::uint64_t>& y_words() const { return y_; }

private:
    std::uint64_t transition(std::uint64_t v, std::uint64_t a, std::uint64_t b,
                             std::uint64_t c, std::uint64_t d) const;

    int n_ = 0;
    int words_ = 0;
    long t_ = 0;
    std::uint64_t tail_mask_ = 0;
    std::array<std::array<std::uint64_t, 5>, 2> m_{};  // f[s][j] as full-word masks
    std::vector<std::uint64_t> x_, y_, nx_, ny_;
};

// Evolves tau synchronous steps from the initial state using the packed
// engine and records every snapshot. Throws std::domain_error for tau < 1.
SpaceTimeRecord run(const Rule& rule, const AutomatonState& initial, int tau);

// Same contract via the reference stepper; used as the oracle in tests.
SpaceTimeRecord run_reference(const Rule& rule, const AutomatonState& initial, int tau);

} // namespace actin
