#include "actin/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace actin {

std::array<EntropyClass, 50> entropy_classes(const std::vector<RuleEntropy>& rules) {
    std::array<EntropyClass, 50> classes;
    for (int z = 1; z <= 50; ++z) {
        classes[z - 1].z = z;
        classes[z - 1].lo = 0.1 * (z - 1);
        classes[z - 1].hi = 0.1 * z;
    }
    for (const RuleEntropy& r : rules) {
        if (r.H < 0 || !std::isfinite(r.H)) {
            throw std::domain_error("entropy must be finite and non-negative");
        }
        int z = static_cast<int>(r.H / 0.1) + 1;
        if (z > 50) z = 50;  // H >= 5 clamps into the top class
        classes[z - 1].members.emplace_back(r.code0, r.code1);
    }
    return classes;
}

std::pair<FrequencyVector, FrequencyVector> group_frequency_vectors(const std::vector<Rule>& rules) {
    if (rules.empty()) {
        throw std::domain_error("frequency vectors need a non-empty rule set");
    }
    FrequencyVector v0, v1;
    v0.basis_size = v1.basis_size = static_cast<int>(rules.size());
    std::array<int, 5> ones0{}, ones1{};
    for (const Rule& r : rules) {
        for (int j = 0; j < 5; ++j) {
            ones0[j] += r.f[0][j];
            ones1[j] += r.f[1][j];
        }
    }
    for (int j = 0; j < 5; ++j) {
        v0.values[j] = static_cast<double>(ones0[j]) / v0.basis_size;
        v1.values[j] = static_cast<double>(ones1[j]) / v1.basis_size;
    }
    return {v0, v1};
}

std::pair<FrequencyVector, FrequencyVector> class_frequency_vectors(const EntropyClass& cls) {
    std::vector<Rule> rules;
    rules.reserve(cls.members.size());
    for (const auto& [c0, c1] : cls.members) {
        rules.push_back(decode_rule(c0, c1));
    }
    return group_frequency_vectors(rules);
}

std::vector<DominatingDigit> dominating_positions(const std::vector<FrequencyVector>& vectors) {
    if (vectors.empty()) {
        throw std::domain_error("dominating positions need at least one vector");
    }
    std::vector<DominatingDigit> out;
    out.reserve(vectors.size());
    for (const FrequencyVector& v : vectors) {
        DominatingDigit d;
        for (int j = 1; j < 5; ++j) {
            if (v.values[j] > v.values[d.position]) {
                d.position = j;
                d.tie = false;
            } else if (v.values[j] == v.values[d.position]) {
                d.tie = true;
            }
        }
        out.push_back(d);
    }
    return out;
}

std::string dominating_string(const std::vector<DominatingDigit>& digits) {
    std::string out;
    out.reserve(digits.size());
    for (const DominatingDigit& d : digits) {
        out.push_back(static_cast<char>('0' + d.position));
    }
    return out;
}

std::array<int, 5> threshold_simplify(const FrequencyVector& v, double cutoff) {
    std::array<int, 5> bits{};
    for (int j = 0; j < 5; ++j) {
        bits[j] = v.values[j] >= cutoff ? 1 : 0;
    }
    return bits;
}

namespace {

MetricStats stats_of(const std::vector<double>& values) {
    MetricStats s;
    const double count = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= count;
    double var = 0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / count);
    return s;
}

} // namespace

GroupStats group_statistics(const std::string& label, const std::vector<MetricsRecord>& records) {
    if (records.empty()) {
        throw std::domain_error("group statistics need a non-empty group");
    }
    GroupStats g;
    g.label = label;
    g.count = static_cast<int>(records.size());
    std::vector<double> v(records.size());
    const auto collect = [&](double MetricsRecord::* field) {
        for (std::size_t i = 0; i < records.size(); ++i) v[i] = records[i].*field;
        return stats_of(v);
    };
    g.H = collect(&MetricsRecord::H);
    g.D = collect(&MetricsRecord::D);
    g.R = collect(&MetricsRecord::R);
    g.P = collect(&MetricsRecord::P);
    g.A = collect(&MetricsRecord::A);
    g.I = collect(&MetricsRecord::I);
    return g;
}

double FitResult::evaluate(double x) const {
    if (model == FitModel::logarithmic) {
        return coefficients[0] + coefficients[1] * std::log(x);
    }
    double acc = 0;
    for (std::size_t k = coefficients.size(); k-- > 0;) {
        acc = acc * x + coefficients[k];
    }
    return acc;
}

namespace {

// Solves the normal equations for the design matrix with columns
// phi_j(x) = basis powers, via Gaussian elimination with partial pivoting.
std::vector<double> solve_normal_equations(const std::vector<std::vector<double>>& design,
                                           const std::vector<double>& ys) {
    const std::size_t cols = design.size();
    const std::size_t rows = ys.size();
    std::vector<std::vector<double>> a(cols, std::vector<double>(cols + 1, 0.0));
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0;
            for (std::size_t r = 0; r < rows; ++r) s += design[i][r] * design[j][r];
            a[i][j] = s;
        }
        double s = 0;
        for (std::size_t r = 0; r < rows; ++r) s += design[i][r] * ys[r];
        a[i][cols] = s;
    }

    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < cols; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) {
            throw std::runtime_error("singular normal equations");
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < cols; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            for (std::size_t j = col; j <= cols; ++j) a[r][j] -= factor * a[col][j];
        }
    }
    std::vector<double> coeffs(cols);
    for (std::size_t i = 0; i < cols; ++i) coeffs[i] = a[i][cols] / a[i][i];
    return coeffs;
}

double r_squared_of(const std::vector<double>& ys, const std::vector<double>& fitted) {
    double mean = 0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ss_res += (ys[i] - fitted[i]) * (ys[i] - fitted[i]);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    if (ss_tot == 0) return 0.0;  // constant target convention
    return 1.0 - ss_res / ss_tot;
}

std::vector<std::vector<double>> design_for(const FitResult& fit, const std::vector<double>& xs) {
    const std::size_t rows = xs.size();
    std::vector<std::vector<double>> design(fit.coefficients.size(),
                                            std::vector<double>(rows, 1.0));
    if (fit.model == FitModel::logarithmic) {
        for (std::size_t r = 0; r < rows; ++r) design[1][r] = std::log(xs[r]);
    } else {
        for (std::size_t j = 1; j < design.size(); ++j) {
            for (std::size_t r = 0; r < rows; ++r) design[j][r] = design[j - 1][r] * xs[r];
        }
    }
    return design;
}

} // namespace

FitResult fit_polynomial(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
    if (degree < 0) {
        throw std::domain_error("polynomial degree must be non-negative");
    }
    if (xs.size() != ys.size() || static_cast<int>(xs.size()) < degree + 1) {
        throw std::domain_error("polynomial fit needs at least degree+1 points");
    }
    FitResult fit;
    fit.model = FitModel::polynomial;
    fit.coefficients.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    fit.coefficients = solve_normal_equations(design_for(fit, xs), ys);

    std::vector<double> fitted(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fitted[i] = fit.evaluate(xs[i]);
    fit.r_squared = r_squared_of(ys, fitted);
    return fit;
}

FitResult fit_logarithmic(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::domain_error("logarithmic fit needs at least two points");
    }
    for (double x : xs) {
        if (x <= 0) throw std::domain_error("logarithmic fit needs positive abscissae");
    }
    FitResult fit;
    fit.model = FitModel::logarithmic;
    fit.coefficients.assign(2, 0.0);
    fit.coefficients = solve_normal_equations(design_for(fit, xs), ys);

    std::vector<double> fitted(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fitted[i] = fit.evaluate(xs[i]);
    fit.r_squared = r_squared_of(ys, fitted);
    return fit;
}

double normal_equation_residual(const std::vector<double>& xs, const std::vector<double>& ys,
                                const FitResult& fit) {
    const auto design = design_for(fit, xs);
    std::vector<double> resid(xs.size());
    double resid_norm = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        resid[i] = ys[i] - fit.evaluate(xs[i]);
        resid_norm += resid[i] * resid[i];
    }
    resid_norm = std::sqrt(resid_norm);

    double worst = 0;
    for (const auto& column : design) {
        double dot = 0, norm = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            dot += column[i] * resid[i];
            norm += column[i] * column[i];
        }
        norm = std::sqrt(norm);
        const double scale = norm * resid_norm;
        const double rel = scale > 0 ? std::abs(dot) / scale : std::abs(dot);
        if (rel > worst) worst = rel;
    }
    return worst;
}

} // namespace actin
