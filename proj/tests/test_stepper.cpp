#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>

#include "actin/rule.hpp"
#include "actin/state.hpp"
#include "actin/stepper.hpp"

using namespace actin;

namespace {

AutomatonState random_state(int n, std::mt19937_64& rng) {
    AutomatonState s = make_resting_state(n);
    for (int i = 0; i < n; ++i) {
        s.x.cells[i] = rng() & 1;
        s.y.cells[i] = rng() & 1;
    }
    return s;
}

} // namespace

TEST_CASE("neighbor_sum on hand states") {
    const AutomatonState resting = make_resting_state(12);
    for (int i = 0; i < 12; ++i) {
        CHECK(neighbor_sum(resting, Chain::x, i) == 0);
        CHECK(neighbor_sum(resting, Chain::y, i) == 0);
    }

    AutomatonState s = make_resting_state(12);
    s.x.cells[5] = 1;
    CHECK(neighbor_sum(s, Chain::x, 4) == 1);   // x[5] is the right neighbour of x[4]
    CHECK(neighbor_sum(s, Chain::x, 6) == 1);
    CHECK(neighbor_sum(s, Chain::y, 5) == 1);   // u(y_5) contains x_5
    CHECK(neighbor_sum(s, Chain::y, 4) == 1);   // u(y_4) contains x_5
    CHECK(neighbor_sum(s, Chain::x, 5) == 0);   // own state is not a neighbour

    AutomatonState ones = make_resting_state(8);
    for (int i = 0; i < 8; ++i) {
        ones.x.cells[i] = 1;
        ones.y.cells[i] = 1;
    }
    for (int i = 1; i < 7; ++i) {
        CHECK(neighbor_sum(ones, Chain::x, i) == 4);
        CHECK(neighbor_sum(ones, Chain::y, i) == 4);
    }
    // Chain ends see only the in-range part of the neighbourhood.
    CHECK(neighbor_sum(ones, Chain::x, 0) == 2);  // x[1], y[0]
    CHECK(neighbor_sum(ones, Chain::y, 0) == 3);  // y[1], x[0], x[1]
    CHECK(neighbor_sum(ones, Chain::x, 7) == 3);  // x[6], y[7], y[6]
    CHECK(neighbor_sum(ones, Chain::y, 7) == 2);  // y[6], x[7]
}

TEST_CASE("neighbor_sum bounds") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 4 + static_cast<int>(rng() % 40);
        const AutomatonState s = random_state(n, rng);
        for (int i = 0; i < n; ++i) {
            for (Chain c : {Chain::x, Chain::y}) {
                const int sum = neighbor_sum(s, c, i);
                CHECK(sum >= 0);
                CHECK(sum <= 4);
            }
        }
    }
    const AutomatonState s = make_resting_state(5);
    CHECK_THROWS_AS(neighbor_sum(s, Chain::x, -1), std::domain_error);
    CHECK_THROWS_AS(neighbor_sum(s, Chain::y, 5), std::domain_error);
}

TEST_CASE("rule (0,0) clears everything") {
    std::mt19937_64 rng(5);
    const AutomatonState s = random_state(30, rng);
    const AutomatonState next = step(s, decode_rule(0, 0));
    CHECK(next == [&] {
        AutomatonState r = make_resting_state(30);
        r.t = s.t + 1;
        return r;
    }());
}

TEST_CASE("rule (31,31) ignites the resting background") {
    const AutomatonState next = step(make_resting_state(10), decode_rule(31, 31));
    for (int i = 0; i < 10; ++i) {
        CHECK(next.x.cells[i] == 1);
        CHECK(next.y.cells[i] == 1);
    }
}

TEST_CASE("quiescence: resting state is fixed whenever f[0][0] = 0") {
    const AutomatonState resting = make_resting_state(16);
    for (int c0 = 0; c0 < 16; ++c0) {  // code0 < 16 <=> f[0][0] = 0
        for (int c1 = 0; c1 < 32; ++c1) {
            const AutomatonState next = step(resting, decode_rule(c0, c1));
            CHECK(next.x == resting.x);
            CHECK(next.y == resting.y);
        }
    }
}

TEST_CASE("rule (8,0) single excited x-cell, hand-derived") {
    const int n = 21, i = 10;
    AutomatonState s = make_resting_state(n);
    s.x.cells[i] = 1;
    const AutomatonState next = step(s, decode_rule(8, 0));
    for (int k = 0; k < n; ++k) {
        CHECK(next.x.cells[k] == ((k == i - 1 || k == i + 1) ? 1 : 0));
        CHECK(next.y.cells[k] == ((k == i - 1 || k == i) ? 1 : 0));
    }
}

TEST_CASE("step commutes with reflect_swap") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 5 + static_cast<int>(rng() % 76);
        const Rule rule = rule_at(static_cast<int>(rng() % 1024));
        const AutomatonState s = random_state(n, rng);
        const AutomatonState a = step(reflect_swap(s), rule);
        const AutomatonState b = reflect_swap(step(s, rule));
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
}

TEST_CASE("packed stepper equals the reference on all 1024 rules") {
    std::mt19937_64 rng(23);
    for (int index = 0; index < 1024; ++index) {
        const Rule rule = rule_at(index);
        const int n = 40 + static_cast<int>(rng() % 30);
        AutomatonState s = random_state(n, rng);
        PackedAutomaton engine(rule, s);
        for (int t = 0; t < 12; ++t) {
            engine.step_once();
            s = step(s, rule);
        }
        const AutomatonState fast = engine.unpack();
        CHECK(fast.x == s.x);
        CHECK(fast.y == s.y);
    }
}

TEST_CASE("packed stepper equals the reference across word boundaries") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 200);  // 1..200 sites, 1..4 words
        const Rule rule = rule_at(static_cast<int>(rng() % 1024));
        AutomatonState s = random_state(n, rng);
        PackedAutomaton engine(rule, s);
        for (int t = 0; t < 30; ++t) {
            engine.step_once();
            s = step(s, rule);
            const AutomatonState fast = engine.unpack();
            REQUIRE(fast.x == s.x);
            REQUIRE(fast.y == s.y);
        }
    }
}

TEST_CASE("packed occupancy helpers") {
    AutomatonState s = make_resting_state(150);
    s.x.cells[3] = 1;
    s.y.cells[130] = 1;
    const PackedAutomaton engine(decode_rule(0, 0), s);
    CHECK(engine.excited_count() == 2);
    CHECK(engine.min_excited_index() == 3);
    CHECK(engine.max_excited_index() == 130);
    CHECK(engine.any_excited());

    const PackedAutomaton empty(decode_rule(0, 0), make_resting_state(70));
    CHECK(empty.excited_count() == 0);
    CHECK(empty.min_excited_index() == -1);
    CHECK(empty.max_excited_index() == -1);
    CHECK(!empty.any_excited());
}

TEST_CASE("run records initial plus tau rows") {
    std::mt19937_64 rng(31);
    const AutomatonState init = random_state(25, rng);
    const Rule rule = decode_rule(8, 0);

    const SpaceTimeRecord rec = run(rule, init, 1);
    REQUIRE(rec.rows_x.size() == 2);
    CHECK(rec.rows_x[0] == init.x);
    const AutomatonState one = step(init, rule);
    CHECK(rec.rows_x[1] == one.x);
    CHECK(rec.rows_y[1] == one.y);

    const SpaceTimeRecord rec2 = run(rule, init, 2);
    const AutomatonState two = step(one, rule);
    CHECK(rec2.rows_x[2] == two.x);
    CHECK(rec2.rows_y[2] == two.y);

    CHECK_THROWS_AS(run(rule, init, 0), std::domain_error);
}

TEST_CASE("rule (0,0) record goes blank after the first row") {
    std::mt19937_64 rng(37);
    const SpaceTimeRecord rec = run(decode_rule(0, 0), random_state(18, rng), 5);
    const ChainState blank(18);
    for (int t = 1; t <= 5; ++t) {
        CHECK(rec.rows_x[t] == blank);
        CHECK(rec.rows_y[t] == blank);
    }
}

TEST_CASE("run is deterministic and matches the reference runner") {
    std::mt19937_64 rng(41);
    const AutomatonState init = random_state(64, rng);
    const Rule rule = decode_rule(10, 10);
    const SpaceTimeRecord a = run(rule, init, 40);
    const SpaceTimeRecord b = run(rule, init, 40);
    CHECK(a == b);
    CHECK(a == run_reference(rule, init, 40));
}
