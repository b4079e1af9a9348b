#include "actin/state.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace actin {

AutomatonState make_resting_state(int n) {
    if (n < 1) {
        throw std::domain_error("chain length must be positive");
    }
    AutomatonState s;
    s.x = ChainState(n);
    s.y = ChainState(n);
    return s;
}

AutomatonState reflect_swap(const AutomatonState& s) {
    const int n = s.size();
    AutomatonState out = make_resting_state(n);
    out.t = s.t;
    for (int i = 0; i < n; ++i) {
        out.x.cells[i] = s.y.cells[n - 1 - i];
        out.y.cells[i] = s.x.cells[n - 1 - i];
    }
    return out;
}

namespace {

void dump_rows(const std::vector<ChainState>& rows, std::ostream& out) {
    std::string line;
    for (const ChainState& row : rows) {
        line.assign(row.cells.size(), '0');
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            if (row.cells[i]) line[i] = '1';
        }
        out << line << '\n';
    }
}

ChainState parse_row(const std::string& line, int n) {
    if (static_cast<int>(line.size()) != n) {
        throw std::runtime_error("record row has wrong length");
    }
    ChainState row(n);
    for (int i = 0; i < n; ++i) {
        const char c = line[static_cast<std::size_t>(i)];
        if (c != '0' && c != '1') {
            throw std::runtime_error("record row holds a character other than 0/1");
        }
        row.cells[i] = c == '1';
    }
    return row;
}

} // namespace

void dump_record(const SpaceTimeRecord& rec, std::ostream& out) {
    out << "# actin record rule " << rec.rule.code0 << ' ' << rec.rule.code1
        << " n " << rec.n << " tau " << rec.tau << '\n';
    dump_rows(rec.rows_x, out);
    dump_rows(rec.rows_y, out);
}

SpaceTimeRecord parse_record(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# actin record rule ", 0) != 0) {
        throw std::runtime_error("missing record header");
    }
    std::istringstream hs(header.substr(20));
    int code0 = 0, code1 = 0, n = 0, tau = 0;
    std::string kw_n, kw_tau;
    if (!(hs >> code0 >> code1 >> kw_n >> n >> kw_tau >> tau) || kw_n != "n" || kw_tau != "tau") {
        throw std::runtime_error("malformed record header");
    }

    SpaceTimeRecord rec;
    rec.rule = decode_rule(code0, code1);
    rec.n = n;
    rec.tau = tau;
    rec.rows_x.reserve(static_cast<std::size_t>(tau) + 1);
    rec.rows_y.reserve(static_cast<std::size_t>(tau) + 1);
    std::string line;
    for (int t = 0; t <= tau; ++t) {
        if (!std::getline(in, line)) throw std::runtime_error("record truncated in chain x");
        rec.rows_x.push_back(parse_row(line, n));
    }
    for (int t = 0; t <= tau; ++t) {
        if (!std::getline(in, line)) throw std::runtime_error("record truncated in chain y");
        rec.rows_y.push_back(parse_row(line, n));
    }
    return rec;
}

} // namespace actin
