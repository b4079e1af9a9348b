#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "actin/analysis.hpp"

using namespace actin;

namespace {

// Printed rows of the 14 strongest travelling rules.
const std::vector<std::pair<const char*, const char*>> travelling_rows = {
    {"00111", "10100"}, {"00101", "11010"}, {"00100", "11010"}, {"00101", "11001"},
    {"00110", "10100"}, {"01000", "00000"}, {"00111", "10101"}, {"01000", "00001"},
    {"01000", "11000"}, {"00111", "01110"}, {"01000", "10000"}, {"00111", "00101"},
    {"00110", "10101"}, {"01001", "00000"},
};

// Printed rows of the seven rules strong in both kinds.
const std::vector<std::pair<const char*, const char*>> both_rows = {
    {"00100", "11010"}, {"00101", "11001"}, {"00111", "00100"}, {"00101", "11010"},
    {"00110", "10101"}, {"00111", "00101"}, {"00111", "10101"},
};

std::vector<Rule> rules_of(const std::vector<std::pair<const char*, const char*>>& rows) {
    std::vector<Rule> rules;
    for (const auto& [r0, r1] : rows) rules.push_back(rule_from_rows(r0, r1));
    return rules;
}

} // namespace

TEST_CASE("entropy classes partition the rule set") {
    std::vector<RuleEntropy> rules;
    for (int i = 0; i < 1024; ++i) {
        rules.push_back({i / 32, i % 32, 0.0});
    }
    auto classes = entropy_classes(rules);
    CHECK(classes[0].members.size() == 1024);
    for (int z = 1; z < 50; ++z) CHECK(classes[z].members.empty());

    std::mt19937_64 rng(301);
    std::vector<RuleEntropy> random_rules;
    for (int i = 0; i < 1024; ++i) {
        random_rules.push_back({i / 32, i % 32, (rng() % 70) / 10.0});
    }
    classes = entropy_classes(random_rules);
    std::size_t total = 0;
    for (const auto& cls : classes) total += cls.members.size();
    CHECK(total == 1024);
}

TEST_CASE("entropy class boundaries") {
    std::vector<RuleEntropy> rules = {{0, 1, 0.95}, {0, 2, 5.2}, {0, 3, 4.85}, {0, 4, 0.0}};
    const auto classes = entropy_classes(rules);
    CHECK(classes[9].members == std::vector<std::pair<int, int>>{{0, 1}});   // class 10
    CHECK(classes[49].members == std::vector<std::pair<int, int>>{{0, 2}});  // clamped
    CHECK(classes[48].members == std::vector<std::pair<int, int>>{{0, 3}});  // [4.8, 4.9)
    CHECK(classes[0].members == std::vector<std::pair<int, int>>{{0, 4}});
}

TEST_CASE("frequency vectors of singleton and pair") {
    const auto [g0, g1] = group_frequency_vectors({decode_rule(10, 4)});
    CHECK(g0.values == std::array<double, 5>{0, 1, 0, 1, 0});
    CHECK(g1.values == std::array<double, 5>{0, 0, 1, 0, 0});
    CHECK(g0.basis_size == 1);

    const auto [p0, p1] = group_frequency_vectors({decode_rule(0, 0), decode_rule(31, 31)});
    for (int j = 0; j < 5; ++j) {
        CHECK(p0.values[j] == 0.5);
        CHECK(p1.values[j] == 0.5);
    }

    CHECK_THROWS_AS(group_frequency_vectors({}), std::domain_error);
}

TEST_CASE("travelling-group vectors match the published fractions") {
    const auto [v0, v1] = group_frequency_vectors(rules_of(travelling_rows));
    CHECK(v0.basis_size == 14);
    CHECK(v0.values == std::array<double, 5>{0.0, 5.0 / 14, 9.0 / 14, 6.0 / 14, 7.0 / 14});
    CHECK(v1.values ==
          std::array<double, 5>{9.0 / 14, 5.0 / 14, 6.0 / 14, 3.0 / 14, 5.0 / 14});

    CHECK(threshold_simplify(v0) == std::array<int, 5>{0, 0, 1, 0, 1});
    CHECK(threshold_simplify(v1) == std::array<int, 5>{1, 0, 0, 0, 0});
}

TEST_CASE("both-group vectors match the published fractions") {
    const auto [v0, v1] = group_frequency_vectors(rules_of(both_rows));
    CHECK(v0.values == std::array<double, 5>{0.0, 0.0, 1.0, 4.0 / 7, 5.0 / 7});
    CHECK(v1.values == std::array<double, 5>{5.0 / 7, 3.0 / 7, 4.0 / 7, 2.0 / 7, 4.0 / 7});

    CHECK(threshold_simplify(v0) == std::array<int, 5>{0, 0, 1, 1, 1});
    CHECK(threshold_simplify(v1) == std::array<int, 5>{1, 0, 1, 0, 1});
}

TEST_CASE("stationary-group simplified vectors from published fractions") {
    FrequencyVector v0{{0.0, 0.0, 15.0 / 39, 20.0 / 39, 19.0 / 39}, 39};
    FrequencyVector v1{{27.0 / 39, 27.0 / 39, 30.0 / 39, 21.0 / 39, 19.0 / 39}, 39};
    CHECK(threshold_simplify(v0) == std::array<int, 5>{0, 0, 0, 1, 0});
    CHECK(threshold_simplify(v1) == std::array<int, 5>{1, 1, 1, 1, 0});
}

TEST_CASE("threshold_simplify is monotone in the cutoff") {
    std::mt19937_64 rng(307);
    for (int rep = 0; rep < 100; ++rep) {
        FrequencyVector v;
        for (double& x : v.values) x = (rng() % 1000) / 999.0;
        const double c1 = (rng() % 100) / 100.0;
        const double c2 = c1 + (rng() % 50) / 100.0;
        const auto b1 = threshold_simplify(v, c1);
        const auto b2 = threshold_simplify(v, c2);
        for (int j = 0; j < 5; ++j) {
            CHECK(b2[j] <= b1[j]);
        }
    }
}

TEST_CASE("dominating positions") {
    CHECK(dominating_positions({FrequencyVector{{0, 0, 1, 0, 0}, 1}})[0].position == 2);
    CHECK(!dominating_positions({FrequencyVector{{0, 0, 1, 0, 0}, 1}})[0].tie);

    const auto tied = dominating_positions({FrequencyVector{{0.5, 0.5, 0, 0, 0}, 2}});
    CHECK(tied[0].position == 0);
    CHECK(tied[0].tie);

    const std::vector<FrequencyVector> vectors = {
        FrequencyVector{{0, 0, 1, 0, 0}, 1},
        FrequencyVector{{0.1, 0.9, 0.3, 0, 0}, 10},
        FrequencyVector{{0, 0, 0, 0, 1}, 1},
    };
    CHECK(dominating_string(dominating_positions(vectors)) == "214");
}

TEST_CASE("class frequency vectors decode members") {
    EntropyClass cls;
    cls.z = 1;
    cls.members = {{10, 4}};
    const auto [g0, g1] = class_frequency_vectors(cls);
    CHECK(g0.values == std::array<double, 5>{0, 1, 0, 1, 0});

    EntropyClass empty;
    CHECK_THROWS_AS(class_frequency_vectors(empty), std::domain_error);
}

TEST_CASE("group statistics") {
    MetricsRecord a{1.0, 0.5, 0.2, 0.1, 0.4, 0.3, 1e-5};
    const GroupStats same = group_statistics("same", {a, a, a});
    CHECK(same.H.mean == 1.0);
    CHECK(same.H.stddev == 0.0);
    CHECK(same.count == 3);

    MetricsRecord b = a;
    b.H = 3.0;
    const GroupStats two = group_statistics("two", {a, b});
    CHECK(two.H.mean == doctest::Approx(2.0));
    CHECK(two.H.stddev == doctest::Approx(1.0));  // population std

    CHECK_THROWS_AS(group_statistics("empty", {}), std::domain_error);
}

TEST_CASE("polynomial fit recovers exact data") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 10; ++i) {
        const double x = 0.3 * i;
        xs.push_back(x);
        ys.push_back(2.0 - 1.5 * x);
    }
    const FitResult line = fit_polynomial(xs, ys, 1);
    CHECK(line.coefficients[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(line.coefficients[1] == doctest::Approx(-1.5).epsilon(1e-10));
    CHECK(line.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    ys.clear();
    for (double x : xs) ys.push_back(1.0 + 0.5 * x - 0.25 * x * x);
    const FitResult quad = fit_polynomial(xs, ys, 2);
    CHECK(quad.coefficients[2] == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(quad.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant target has r_squared zero by convention") {
    const std::vector<double> xs = {1, 2, 3, 4};
    const std::vector<double> ys = {2.5, 2.5, 2.5, 2.5};
    CHECK(fit_polynomial(xs, ys, 1).r_squared == 0.0);
}

TEST_CASE("logarithmic fit recovers exact data") {
    std::vector<double> xs, ys;
    for (int i = 1; i <= 20; ++i) {
        const double x = 0.25 * i;
        xs.push_back(x);
        ys.push_back(0.6 + 0.3 * std::log(x));
    }
    const FitResult fit = fit_logarithmic(xs, ys);
    CHECK(fit.coefficients[0] == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(fit.coefficients[1] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.evaluate(1.0) == doctest::Approx(0.6).epsilon(1e-10));

    CHECK_THROWS_AS(fit_logarithmic({0.0, 1.0}, {1.0, 2.0}), std::domain_error);
    CHECK_THROWS_AS(fit_logarithmic({-1.0, 1.0}, {1.0, 2.0}), std::domain_error);
}

TEST_CASE("fit preconditions") {
    CHECK_THROWS_AS(fit_polynomial({1.0, 2.0}, {1.0, 2.0}, 5), std::domain_error);
    CHECK_THROWS_AS(fit_polynomial({1.0}, {1.0, 2.0}, 0), std::domain_error);
}

TEST_CASE("normal-equation residuals vanish on noisy fits") {
    std::mt19937_64 rng(311);
    std::vector<double> xs, ys;
    for (int i = 0; i < 200; ++i) {
        const double x = 0.1 + (rng() % 1000) / 200.0;
        xs.push_back(x);
        ys.push_back(0.6 + 0.3 * std::log(x) + ((rng() % 1000) / 1000.0 - 0.5) * 0.05);
    }
    const FitResult log_fit = fit_logarithmic(xs, ys);
    CHECK(normal_equation_residual(xs, ys, log_fit) < 1e-9);

    const FitResult poly_fit = fit_polynomial(xs, ys, 3);
    CHECK(normal_equation_residual(xs, ys, poly_fit) < 1e-9);
}
