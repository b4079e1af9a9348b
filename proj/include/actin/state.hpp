#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "actin/rule.hpp"

namespace actin {

enum class Chain { x, y };

// One chain at one time step, one byte per site, values 0 (resting) or
// 1 (excited).
struct ChainState {
    std::vector<std::uint8_t> cells;

    ChainState() = default;
    explicit ChainState(int n) : cells(static_cast<std::size_t>(n), 0) {}

    int size() const { return static_cast<int>(cells.size()); }

    bool operator==(const ChainState&) const = default;
};

struct AutomatonState {
    ChainState x;
    ChainState y;
    long t = 0;

    int size() const { return x.size(); }

    bool operator==(const AutomatonState&) const = default;
};

AutomatonState make_resting_state(int n);

// Mirror both chains around the filament midpoint and exchange them:
// x'[i] = y[n-1-i], y'[i] = x[n-1-i]. An involution that commutes with
// the update rule.
AutomatonState reflect_swap(const AutomatonState& s);

// Full history of one run: tau + 1 snapshots per chain, rows_*[0] being
// the initial condition.
struct SpaceTimeRecord {
    Rule rule;
    int n = 0;
    int tau = 0;
    std::vector<ChainState> rows_x;
    std::vector<ChainState> rows_y;

    const ChainState& row(Chain c, int t) const {
        return (c == Chain::x) ? rows_x[static_cast<std::size_t>(t)]
                               : rows_y[static_cast<std::size_t>(t)];
    }
    std::uint8_t at(Chain c, int i, int t) const {
        return row(c, t).cells[static_cast<std::size_t>(i)];
    }

    bool operator==(const SpaceTimeRecord&) const = default;
};

// ASCII debug dump: one comment header line, then tau+1 rows of '0'/'1'
// for chain x followed by tau+1 rows for chain y.
void dump_record(const SpaceTimeRecord& rec, std::ostream& out);
SpaceTimeRecord parse_record(std::istream& in);

} // namespace actin
