#pragma once

#include <array>
#include <string>
#include <vector>

#include "actin/metrics.hpp"
#include "actin/rule.hpp"

namespace actin {

struct RuleEntropy {
    int code0 = 0;
    int code1 = 0;
    double H = 0;
};

// One of the 50 entropy buckets [0.1*(z-1), 0.1*z) covering [0, 5).
struct EntropyClass {
    int z = 0;  // 1..50
    double lo = 0;
    double hi = 0;
    std::vector<std::pair<int, int>> members;  // rule codes
};

// Buckets every rule by its entropy; H >= 5 clamps into class 50.
std::array<EntropyClass, 50> entropy_classes(const std::vector<RuleEntropy>& rules);

// Position-wise frequency of '1' across a set of rule rows.
struct FrequencyVector {
    std::array<double, 5> values{};
    int basis_size = 0;
};

// Mean of the f[0] and f[1] rows over an explicit rule set. Works from the
// stored bit rows, so rules built via rule_from_rows test printed-table
// readings directly. Throws std::domain_error on an empty set.
std::pair<FrequencyVector, FrequencyVector> group_frequency_vectors(const std::vector<Rule>& rules);

std::pair<FrequencyVector, FrequencyVector> class_frequency_vectors(const EntropyClass& cls);

struct DominatingDigit {
    int position = 0;  // argmax 0..4, ties resolved to the lowest position
    bool tie = false;
};

std::vector<DominatingDigit> dominating_positions(const std::vector<FrequencyVector>& vectors);
std::string dominating_string(const std::vector<DominatingDigit>& digits);

// bit i = 1 iff values[i] >= cutoff.
std::array<int, 5> threshold_simplify(const FrequencyVector& v, double cutoff = 0.5);

struct MetricStats {
    double mean = 0;
    double stddev = 0;  // population standard deviation
};

struct GroupStats {
    std::string label;
    int count = 0;
    MetricStats H, D, R, P, A, I;
};

GroupStats group_statistics(const std::string& label, const std::vector<MetricsRecord>& records);

enum class FitModel { polynomial, logarithmic };

struct FitResult {
    FitModel model = FitModel::polynomial;
    // polynomial: ascending powers c0 + c1*x + ...; logarithmic: {b, a} of b + a*ln(x)
    std::vector<double> coefficients;
    double r_squared = 0;

    double evaluate(double x) const;
};

// Ordinary least squares. Throws std::domain_error with fewer than
// degree+1 points and std::runtime_error on a singular system.
FitResult fit_polynomial(const std::vector<double>& xs, const std::vector<double>& ys, int degree);

// y = b + a*ln(x); throws std::domain_error if any x <= 0.
FitResult fit_logarithmic(const std::vector<double>& xs, const std::vector<double>& ys);

// Largest absolute normal-equation residual <X_j, y - X c>, scaled by
// ||X_j||*||r||; should sit at rounding level for a well-posed fit.
double normal_equation_residual(const std::vector<double>& xs, const std::vector<double>& ys,
                                const FitResult& fit);

} // namespace actin
