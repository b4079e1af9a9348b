#include "actin/rule.hpp"

#include <stdexcept>

namespace actin {

Rule decode_rule(int code0, int code1) {
    if (code0 < 0 || code0 > 31 || code1 < 0 || code1 > 31) {
        throw std::domain_error("rule code out of range 0..31: (" + std::to_string(code0) +
                                "," + std::to_string(code1) + ")");
    }
    Rule r;
    r.code0 = code0;
    r.code1 = code1;
    for (int j = 0; j < 5; ++j) {
        r.f[0][j] = static_cast<std::uint8_t>((code0 >> (4 - j)) & 1);
        r.f[1][j] = static_cast<std::uint8_t>((code1 >> (4 - j)) & 1);
    }
    return r;
}

std::pair<int, int> encode_rule(const Rule& rule) {
    int c0 = 0;
    int c1 = 0;
    for (int j = 0; j < 5; ++j) {
        c0 |= (rule.f[0][j] & 1) << (4 - j);
        c1 |= (rule.f[1][j] & 1) << (4 - j);
    }
    return {c0, c1};
}

Rule rule_from_rows(const std::string& row0, const std::string& row1) {
    if (row0.size() != 5 || row1.size() != 5) {
        throw std::domain_error("rule row must be 5 binary digits");
    }
    Rule r;
    for (int j = 0; j < 5; ++j) {
        const char a = row0[static_cast<std::size_t>(j)];
        const char b = row1[static_cast<std::size_t>(j)];
        if ((a != '0' && a != '1') || (b != '0' && b != '1')) {
            throw std::domain_error("rule row must be 5 binary digits");
        }
        r.f[0][j] = a == '1';
        r.f[1][j] = b == '1';
    }
    const auto codes = encode_rule(r);
    r.code0 = codes.first;
    r.code1 = codes.second;
    return r;
}

std::string row_string(const Rule& rule, int s) {
    std::string out(5, '0');
    for (int j = 0; j < 5; ++j) {
        out[static_cast<std::size_t>(j)] = rule.f[s][j] ? '1' : '0';
    }
    return out;
}

int rule_index(const Rule& rule) {
    return rule.code0 * 32 + rule.code1;
}

Rule rule_at(int index) {
    if (index < 0 || index > 1023) {
        throw std::domain_error("rule index out of range 0..1023");
    }
    return decode_rule(index / 32, index % 32);
}

} // namespace actin
