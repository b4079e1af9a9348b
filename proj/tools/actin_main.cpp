#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "actin/analysis.hpp"
#include "actin/localization.hpp"
#include "actin/metrics.hpp"
#include "actin/render.hpp"
#include "actin/rule.hpp"
#include "actin/stepper.hpp"
#include "actin/sweep.hpp"
#include "actin/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

actin::Rule parse_rule(const std::string& text) {
    if (text.rfind("F0=", 0) == 0) {
        const auto comma = text.find(",F1=");
        if (comma == std::string::npos) {
            throw std::domain_error("rule rows must look like F0=00111,F1=10100");
        }
        return actin::rule_from_rows(text.substr(3, comma - 3), text.substr(comma + 4));
    }
    int c0 = 0, c1 = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d,%d%c", &c0, &c1, &extra) != 2) {
        throw std::domain_error("rule must look like 7,20 or F0=00111,F1=10100");
    }
    return actin::decode_rule(c0, c1);
}

std::uint8_t parse_seed_pattern(const std::string& bits) {
    if (bits.size() != 5) {
        throw std::domain_error("seed pattern must be 5 binary digits");
    }
    std::uint8_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::domain_error("seed pattern must be 5 binary digits");
        }
        v = static_cast<std::uint8_t>((v << 1) | (c == '1'));
    }
    return v;
}

// Grammar: random<width>:<p> | random:<p> | seed:<sx>,<sy>; only p = 0.5 is
// supported (initial states are drawn as raw engine bits).
void parse_init(const std::string& text, actin::SweepConfig& cfg) {
    if (text.rfind("seed:", 0) == 0) {
        const std::string rest = text.substr(5);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw std::domain_error("seed init must look like seed:10001,10111");
        }
        cfg.init = actin::InitKind::seed_pattern;
        cfg.seed_sx = parse_seed_pattern(rest.substr(0, comma));
        cfg.seed_sy = parse_seed_pattern(rest.substr(comma + 1));
        return;
    }
    if (text.rfind("random", 0) != 0) {
        throw std::domain_error("unknown init spec: " + text);
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos || text.substr(colon + 1) != "0.5") {
        throw std::domain_error("only excitation probability 0.5 is supported, e.g. random100:0.5");
    }
    const std::string width = text.substr(6, colon - 6);
    if (width.empty()) {
        cfg.init = actin::InitKind::random_full;
    } else {
        cfg.init = actin::InitKind::random_window;
        cfg.window_width = std::stoi(width);
        if (cfg.window_width < 1) {
            throw std::domain_error("init window width must be positive");
        }
    }
}

std::pair<int, int> parse_rule_range(const std::string& text) {
    int lo = 0, hi = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d..%d%c", &lo, &hi, &extra) != 2 || lo < 0 || hi > 1023 ||
        lo > hi) {
        throw std::domain_error("rule range must look like 0..1023");
    }
    return {lo, hi + 1};
}

std::string rule_tag(const actin::Rule& r) {
    return std::to_string(r.code0) + "_" + std::to_string(r.code1);
}

std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string bits_string(const std::array<int, 5>& bits) {
    std::string out(5, '0');
    for (int j = 0; j < 5; ++j) {
        if (bits[j]) out[j] = '1';
    }
    return out;
}

void add_sim_options(CLI::App* cmd, actin::SweepConfig& cfg, std::string& init_spec) {
    cmd->add_option("--n", cfg.n, "sites per chain")->capture_default_str();
    cmd->add_option("--tau", cfg.tau, "time steps")->capture_default_str();
    cmd->add_option("--seed", cfg.rng_seed, "RNG seed")->capture_default_str();
    cmd->add_option("--init", init_spec,
                    "initial excitation: random<width>:0.5, random:0.5 or seed:<sx>,<sy>")
        ->capture_default_str();
}

void add_classifier_options(CLI::App* cmd, actin::ClassifierConfig& c) {
    cmd->add_option("--act-min", c.activity_min, "lower bound of the activity band")
        ->capture_default_str();
    cmd->add_option("--act-max-per-tau", c.activity_max_per_tau,
                    "activity ceiling as a multiple of tau")
        ->capture_default_str();
    cmd->add_option("--ws", c.stationary_span, "stationary span bound W_s")->capture_default_str();
    cmd->add_option("--wt", c.travelling_span, "travelling span bound W_t")->capture_default_str();
    cmd->add_option("--cmax", c.max_step_count, "per-step excitation ceiling C_max")
        ->capture_default_str();
    cmd->add_option("--pmax", c.max_period, "largest period probed")->capture_default_str();
    cmd->add_option("--probe-window", c.probe_window, "final steps examined by the probe")
        ->capture_default_str();
}

actin::AutomatonState initial_state(const actin::SweepConfig& cfg, const actin::Rule& rule) {
    return actin::initial_state_for_rule(cfg, actin::rule_index(rule));
}

void write_record_and_images(const actin::SpaceTimeRecord& rec, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const std::string tag = rule_tag(rec.rule);
    const fs::path record_path = out_dir / ("record_" + tag + ".txt");
    std::ofstream out(record_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + record_path.string());
    }
    actin::dump_record(rec, out);
    actin::write_pgm(actin::render_chain(rec, actin::Chain::x), out_dir / ("rule_" + tag + "_x.pgm"));
    actin::write_pgm(actin::render_chain(rec, actin::Chain::y), out_dir / ("rule_" + tag + "_y.pgm"));
    actin::write_pgm(actin::render_incoherence(rec), out_dir / ("rule_" + tag + "_incoherence.pgm"));
    std::cout << "wrote " << record_path.string() << " and rule_" << tag << "_{x,y,incoherence}.pgm\n";
}

std::string metrics_csv_line(const actin::Rule& rule, const actin::MetricsRecord& m) {
    actin::SweepRow row{rule.code0, rule.code1, m};
    return actin::format_metrics_row(row);
}

// ---------------------------------------------------------------------------
// analyze

struct JoinedRow {
    actin::SweepRow metrics;
    actin::RuleLocalizationCounts loc;
};

std::vector<JoinedRow> join_sweep(const std::vector<actin::SweepRow>& metrics,
                                  const std::vector<actin::RuleLocalizationCounts>& loc) {
    std::map<std::pair<int, int>, actin::RuleLocalizationCounts> by_code;
    for (const auto& row : loc) {
        by_code[{row.code0, row.code1}] = row;
    }
    std::vector<JoinedRow> rows;
    rows.reserve(metrics.size());
    for (const auto& m : metrics) {
        const auto it = by_code.find({m.code0, m.code1});
        if (it == by_code.end()) {
            throw std::runtime_error("localization.csv is missing rule (" +
                                     std::to_string(m.code0) + "," + std::to_string(m.code1) + ")");
        }
        rows.push_back({m, it->second});
    }
    return rows;
}

void write_vector_row(std::ostream& out, const std::string& label,
                      const actin::FrequencyVector& v0, const actin::FrequencyVector& v1,
                      double cutoff) {
    out << label << ',' << v0.basis_size;
    for (double v : v0.values) out << ',' << fmt_g6(v);
    for (double v : v1.values) out << ',' << fmt_g6(v);
    out << ',' << bits_string(actin::threshold_simplify(v0, cutoff)) << ','
        << bits_string(actin::threshold_simplify(v1, cutoff)) << '\n';
}

json fit_json(const actin::FitResult& fit) {
    json j;
    j["model"] = fit.model == actin::FitModel::logarithmic ? "logarithmic" : "polynomial";
    j["coefficients"] = fit.coefficients;
    j["r_squared"] = fit.r_squared;
    return j;
}

int run_analyze(const fs::path& sweep_dir, const fs::path& out_dir, double cutoff) {
    const fs::path metrics_path = sweep_dir / "metrics.csv";
    const fs::path loc_path = sweep_dir / "localization.csv";
    if (!fs::exists(metrics_path) || !fs::exists(loc_path)) {
        std::cerr << "analyze needs metrics.csv and localization.csv in " << sweep_dir.string()
                  << '\n';
        return 2;
    }
    const auto rows = join_sweep(actin::load_metrics_csv(metrics_path),
                                 actin::load_localization_csv(loc_path));
    fs::create_directories(out_dir);

    // Entropy classes with their frequency vectors and dominating positions.
    std::vector<actin::RuleEntropy> entropies;
    entropies.reserve(rows.size());
    for (const auto& r : rows) {
        entropies.push_back({r.metrics.code0, r.metrics.code1, r.metrics.metrics.H});
    }
    const auto classes = actin::entropy_classes(entropies);

    std::vector<actin::FrequencyVector> g0s, g1s;
    {
        std::ofstream out(out_dir / "classes.csv", std::ios::binary);
        out << "z,lo,hi,size,g0_0,g0_1,g0_2,g0_3,g0_4,g1_0,g1_1,g1_2,g1_3,g1_4\n";
        for (const auto& cls : classes) {
            out << cls.z << ',' << fmt_g6(cls.lo) << ',' << fmt_g6(cls.hi) << ','
                << cls.members.size();
            if (cls.members.empty()) {
                out << ",,,,,,,,,,\n";
                continue;
            }
            const auto [g0, g1] = actin::class_frequency_vectors(cls);
            g0s.push_back(g0);
            g1s.push_back(g1);
            for (double v : g0.values) out << ',' << fmt_g6(v);
            for (double v : g1.values) out << ',' << fmt_g6(v);
            out << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "dominating.txt", std::ios::binary);
        out << "0->1 " << actin::dominating_string(actin::dominating_positions(g0s)) << '\n'
            << "1->1 " << actin::dominating_string(actin::dominating_positions(g1s)) << '\n';
    }

    // Rule groups by localization support.
    const auto in_group = [](const JoinedRow& r, const std::string& name) {
        const int T = r.loc.travelling, S = r.loc.stationary;
        if (name == "all") return true;
        if (name == "travelling") return T >= 1;
        if (name == "stationary") return S >= 1;
        if (name == "both") return T >= 1 && S >= 1;
        if (name == "none") return T == 0 && S == 0;
        if (name == "travelling_strong") return T > 100;
        if (name == "stationary_strong") return S > 900;
        return T >= 100 && S >= 300;  // both_strong
    };
    const std::vector<std::string> stat_groups = {"all", "travelling", "stationary", "both",
                                                  "none"};
    const std::vector<std::string> vector_groups = {"travelling", "stationary", "both",
                                                    "travelling_strong", "stationary_strong",
                                                    "both_strong"};
    {
        std::ofstream out(out_dir / "groups.csv", std::ios::binary);
        out << "group,count,H_mean,H_std,D_mean,D_std,R_mean,R_std,P_mean,P_std,A_mean,A_std,"
               "I_mean,I_std\n";
        for (const std::string& name : stat_groups) {
            std::vector<actin::MetricsRecord> members;
            for (const auto& r : rows) {
                if (in_group(r, name)) members.push_back(r.metrics.metrics);
            }
            if (members.empty()) continue;
            const auto g = actin::group_statistics(name, members);
            out << g.label << ',' << g.count;
            for (const auto* s : {&g.H, &g.D, &g.R, &g.P, &g.A, &g.I}) {
                out << ',' << fmt_g6(s->mean) << ',' << fmt_g6(s->stddev);
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "vectors.csv", std::ios::binary);
        out << "group,basis,v0_0,v0_1,v0_2,v0_3,v0_4,v1_0,v1_1,v1_2,v1_3,v1_4,sv0,sv1\n";
        for (const std::string& name : vector_groups) {
            std::vector<actin::Rule> members;
            for (const auto& r : rows) {
                if (in_group(r, name)) {
                    members.push_back(actin::decode_rule(r.metrics.code0, r.metrics.code1));
                }
            }
            if (members.empty()) continue;
            const auto [v0, v1] = actin::group_frequency_vectors(members);
            write_vector_row(out, name, v0, v1, cutoff);
        }
    }

    // Fits: diversity against entropy, and the rule distribution over H.
    json fits;
    {
        std::vector<double> hs, ds;
        for (const auto& r : rows) {
            if (r.metrics.metrics.H > 0) {
                hs.push_back(r.metrics.metrics.H);
                ds.push_back(r.metrics.metrics.D);
            }
        }
        if (hs.size() >= 6) {
            const auto log_fit = actin::fit_logarithmic(hs, ds);
            const auto poly_fit = actin::fit_polynomial(hs, ds, 5);
            fits["D_vs_H_log"] = fit_json(log_fit);
            fits["D_vs_H_log"]["normal_equation_residual"] =
                actin::normal_equation_residual(hs, ds, log_fit);
            fits["D_vs_H_poly5"] = fit_json(poly_fit);
        }
        std::vector<double> centers, sizes;
        for (const auto& cls : classes) {
            centers.push_back(0.5 * (cls.lo + cls.hi));
            sizes.push_back(static_cast<double>(cls.members.size()));
        }
        fits["rule_distribution_vs_H_poly5"] = fit_json(actin::fit_polynomial(centers, sizes, 5));
    }
    {
        std::ofstream out(out_dir / "fits.json", std::ios::binary);
        out << fits.dump(2) << '\n';
    }

    std::cout << "analysis written to " << out_dir.string() << '\n';
    return 0;
}

int run_rules_file(const fs::path& path, double cutoff) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read " << path.string() << '\n';
        return 2;
    }
    std::vector<actin::Rule> rules;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string a, b;
        if (fields >> a) {
            if (fields >> b) {
                rules.push_back(actin::rule_from_rows(a, b));
            } else {
                rules.push_back(parse_rule(a));
            }
        }
    }
    if (rules.empty()) {
        std::cerr << "rule list is empty\n";
        return 2;
    }
    const auto [v0, v1] = actin::group_frequency_vectors(rules);
    std::cout << "basis " << v0.basis_size << "\nV0";
    for (double v : v0.values) std::cout << ' ' << fmt_g6(v);
    std::cout << "\nV1";
    for (double v : v1.values) std::cout << ' ' << fmt_g6(v);
    std::cout << "\n*V0 " << bits_string(actin::threshold_simplify(v0, cutoff)) << "\n*V1 "
              << bits_string(actin::threshold_simplify(v1, cutoff)) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"actin automata: two-chain binary lattice simulator and rule-space toolkit"};
    app.set_version_flag("--version", std::string("actin ") + actin::version);
    app.require_subcommand(1);

    actin::SweepConfig cfg;
    std::string init_spec = "random100:0.5";
    std::string rule_text;
    std::string rules_range = "0..1023";
    fs::path out_dir = ".";
    const char* env_out = std::getenv("ACTIN_OUT_DIR");
    if (env_out != nullptr && *env_out != '\0') out_dir = env_out;

    auto* simulate = app.add_subcommand("simulate", "run one rule and write a record dump + PGMs");
    simulate->add_option("--rule", rule_text, "rule as code0,code1 or F0=...,F1=...")->required();
    add_sim_options(simulate, cfg, init_spec);
    simulate->add_option("--out", out_dir, "output directory")->capture_default_str();

    std::string chain_spec = "x";
    auto* metrics = app.add_subcommand("metrics", "compute the integral measures for one rule");
    metrics->add_option("--rule", rule_text, "rule as code0,code1 or F0=...,F1=...")->required();
    add_sim_options(metrics, cfg, init_spec);
    metrics->add_option("--chain", chain_spec, "chain the measures are computed on: x, y or xy")
        ->capture_default_str();

    auto* localize = app.add_subcommand("localize", "classify all 1024 seeds for one rule");
    localize->add_option("--rule", rule_text, "rule as code0,code1 or F0=...,F1=...")->required();
    localize->add_option("--n", cfg.n, "sites per chain")->capture_default_str();
    localize->add_option("--tau", cfg.tau, "time steps")->capture_default_str();
    add_classifier_options(localize, cfg.classifier);
    localize->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "evaluate a rule range and persist CSV + manifest");
    add_sim_options(sweep, cfg, init_spec);
    add_classifier_options(sweep, cfg.classifier);
    sweep->add_option("--rules", rules_range, "inclusive rule index range")->capture_default_str();
    sweep->add_option("--workers", cfg.workers, "worker threads (0 = hardware)")
        ->capture_default_str();
    sweep->add_option("--out", out_dir, "output directory")->capture_default_str();
    bool metrics_only = false, localization_only = false;
    sweep->add_flag("--metrics-only", metrics_only, "skip the localization sweep");
    sweep->add_flag("--localization-only", localization_only, "skip the metrics sweep");

    auto* analyze = app.add_subcommand("analyze", "rule-space statistics from sweep CSVs");
    fs::path sweep_dir;
    fs::path rules_file;
    double cutoff = 0.5;
    analyze->add_option("--sweep", sweep_dir, "directory holding metrics.csv and localization.csv");
    analyze->add_option("--rules-file", rules_file,
                        "explicit rule list (binary rows or codes); prints V and *V");
    analyze->add_option("--cutoff", cutoff, "threshold for the simplified vectors")
        ->capture_default_str();
    analyze->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* render = app.add_subcommand("render", "re-render PGMs from a record dump");
    fs::path record_path;
    render->add_option("--record", record_path, "record dump written by simulate")->required();
    render->add_option("--out", out_dir, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);

        if (simulate->parsed() || metrics->parsed()) {
            parse_init(init_spec, cfg);
            const actin::Rule rule = parse_rule(rule_text);
            const actin::SpaceTimeRecord rec = actin::run(rule, initial_state(cfg, rule), cfg.tau);
            if (simulate->parsed()) {
                write_record_and_images(rec, out_dir);
            } else {
                actin::MetricsRecord m;
                if (chain_spec == "x") {
                    m = actin::compute_all(rec, actin::Chain::x);
                } else if (chain_spec == "y") {
                    m = actin::compute_all(rec, actin::Chain::y);
                } else if (chain_spec == "xy") {
                    m = actin::compute_all_stacked(rec);
                } else {
                    throw std::domain_error("--chain must be x, y or xy");
                }
                std::cout << actin::metrics_csv_header << '\n' << metrics_csv_line(rule, m) << '\n';
            }
        } else if (localize->parsed()) {
            const actin::Rule rule = parse_rule(rule_text);
            fs::create_directories(out_dir);
            const fs::path csv = out_dir / ("verdicts_" + rule_tag(rule) + ".csv");
            std::ofstream out(csv, std::ios::binary);
            if (!out) {
                throw std::runtime_error("cannot write " + csv.string());
            }
            out << "seed_sx,seed_sy,kind,total_activity,support_span,period,shift\n";
            int travelling = 0, stationary = 0;
            for (const actin::Seed& seed : actin::enumerate_seeds(cfg.n)) {
                const auto v = actin::classify_seed(rule, seed, cfg.n, cfg.tau, cfg.classifier);
                if (v.kind == actin::LocalizationKind::travelling) ++travelling;
                if (v.kind == actin::LocalizationKind::stationary) ++stationary;
                out << actin::seed_bits(seed.sx) << ',' << actin::seed_bits(seed.sy) << ','
                    << actin::to_string(v.kind) << ',' << v.total_activity << ',' << v.support_span
                    << ',' << (v.period ? std::to_string(*v.period) : "") << ','
                    << (v.shift ? std::to_string(*v.shift) : "") << '\n';
            }
            std::cout << "rule (" << rule.code0 << ',' << rule.code1 << "): T=" << travelling
                      << " S=" << stationary << " -> " << csv.string() << '\n';
        } else if (sweep->parsed()) {
            parse_init(init_spec, cfg);
            const auto range = parse_rule_range(rules_range);
            cfg.rule_begin = range.first;
            cfg.rule_end = range.second;
            cfg.out_dir = out_dir;
            if (metrics_only && localization_only) {
                throw std::domain_error("--metrics-only and --localization-only exclude each other");
            }
            if (!localization_only) actin::run_metrics_sweep(cfg);
            if (!metrics_only) actin::run_localization_sweep(cfg);
            std::cout << "sweep artifacts in " << out_dir.string() << '\n';
        } else if (analyze->parsed()) {
            if (!rules_file.empty()) {
                return run_rules_file(rules_file, cutoff);
            }
            if (sweep_dir.empty()) {
                std::cerr << "analyze needs --sweep or --rules-file\n";
                return 2;
            }
            return run_analyze(sweep_dir, out_dir, cutoff);
        } else if (render->parsed()) {
            std::ifstream in(record_path);
            if (!in) {
                throw std::runtime_error("cannot read " + record_path.string());
            }
            const actin::SpaceTimeRecord rec = actin::parse_record(in);
            fs::create_directories(out_dir);
            const std::string tag = rule_tag(rec.rule);
            actin::write_pgm(actin::render_chain(rec, actin::Chain::x),
                             out_dir / ("rule_" + tag + "_x.pgm"));
            actin::write_pgm(actin::render_chain(rec, actin::Chain::y),
                             out_dir / ("rule_" + tag + "_y.pgm"));
            actin::write_pgm(actin::render_incoherence(rec),
                             out_dir / ("rule_" + tag + "_incoherence.pgm"));
            std::cout << "wrote rule_" << tag << "_{x,y,incoherence}.pgm\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
