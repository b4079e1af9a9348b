#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

namespace actin {

// Semi-totalistic transition table for the two-chain automaton. f[s][sigma]
// is the next state of a node that is in state s and has sigma excited
// neighbours. The decimal codes are the two rows read MSB-first:
// code0 = sum_j f[0][j] * 2^(4-j), so position sigma=0 is the top bit.
struct Rule {
    std::array<std::array<std::uint8_t, 5>, 2> f{};
    int code0 = 0;
    int code1 = 0;

    bool operator==(const Rule&) const = default;
};

// Expands a (code0, code1) pair into the transition matrix.
// Throws std::domain_error if either code is outside 0..31.
Rule decode_rule(int code0, int code1);

std::pair<int, int> encode_rule(const Rule& rule);

// Builds a rule from its binary rows as printed in rule tables,
// e.g. rule_from_rows("00111", "10100") == decode_rule(7, 20).
Rule rule_from_rows(const std::string& row0, const std::string& row1);

// The s-th row as a 5-character binary string, MSB first.
std::string row_string(const Rule& rule, int s);

// Flat index code0 * 32 + code1, 0..1023.
int rule_index(const Rule& rule);
Rule rule_at(int index);

} // namespace actin
