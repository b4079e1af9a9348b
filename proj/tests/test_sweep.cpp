#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "actin/sweep.hpp"

using namespace actin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("actin_test_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SweepConfig small_config(const fs::path& out) {
    SweepConfig cfg;
    cfg.n = 40;
    cfg.tau = 120;
    cfg.window_width = 20;
    cfg.rng_seed = 9;
    cfg.rule_begin = 224;  // rules (7,0) .. (7,31)
    cfg.rule_end = 240;
    cfg.workers = 1;
    cfg.out_dir = out;
    return cfg;
}

} // namespace

TEST_CASE("config hash covers the fields that matter") {
    SweepConfig a;
    SweepConfig b = a;
    CHECK(config_hash(a) == config_hash(b));

    b.tau = 999;
    CHECK(config_hash(a) != config_hash(b));

    b = a;
    b.rng_seed = 2;
    CHECK(config_hash(a) != config_hash(b));

    b = a;
    b.classifier.travelling_span = 51;
    CHECK(config_hash(a) != config_hash(b));

    b = a;
    b.workers = 8;
    b.out_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));  // execution details do not change outputs
}

TEST_CASE("random window state is deterministic and bounded") {
    const AutomatonState a = random_window_state(300, 100, 100, 42);
    const AutomatonState b = random_window_state(300, 100, 100, 42);
    CHECK(a == b);

    int excited = 0;
    for (int i = 0; i < 300; ++i) {
        if (i < 100 || i >= 200) {
            CHECK(a.x.cells[i] == 0);
            CHECK(a.y.cells[i] == 0);
        }
        excited += a.x.cells[i] + a.y.cells[i];
    }
    CHECK(excited > 60);  // ~100 of 200 window cells
    CHECK(excited < 140);

    const AutomatonState c = random_window_state(300, 100, 100, 43);
    CHECK(a != c);

    CHECK_THROWS_AS(random_window_state(50, 40, 20, 1), std::domain_error);
}

TEST_CASE("initial state per rule derives distinct streams") {
    SweepConfig cfg;
    cfg.n = 80;
    cfg.window_width = 40;
    const AutomatonState a = initial_state_for_rule(cfg, 3);
    const AutomatonState b = initial_state_for_rule(cfg, 4);
    CHECK(a != b);
    CHECK(a == initial_state_for_rule(cfg, 3));

    cfg.init = InitKind::random_full;
    const AutomatonState full = initial_state_for_rule(cfg, 3);
    int excited = 0;
    for (int i = 0; i < 80; ++i) excited += full.x.cells[i] + full.y.cells[i];
    CHECK(excited > 40);

    cfg.init = InitKind::seed_pattern;
    cfg.seed_sx = 0b10001;
    cfg.seed_sy = 0b10111;
    const AutomatonState seeded = initial_state_for_rule(cfg, 3);
    CHECK(seeded.x.cells[80 / 2 - 2] == 1);
    CHECK(seeded == initial_state_for_rule(cfg, 999));  // no RNG involved
}

TEST_CASE("metrics sweep writes ordered rows and a manifest") {
    TempDir dir("metrics");
    const SweepConfig cfg = small_config(dir.path);
    run_metrics_sweep(cfg);

    const auto rows = load_metrics_csv(dir.path / "metrics.csv");
    REQUIRE(rows.size() == 16);
    for (int k = 0; k < 16; ++k) {
        CHECK(rows[k].code0 == 7);
        CHECK(rows[k].code1 == k);
    }
    CHECK(fs::exists(dir.path / "manifest.json"));

    const std::string body = slurp(dir.path / "metrics.csv");

    // A second run with the same config is a no-op.
    run_metrics_sweep(cfg);
    CHECK(slurp(dir.path / "metrics.csv") == body);
}

TEST_CASE("parallel and serial sweeps write identical bytes") {
    TempDir serial("serial");
    TempDir parallel("parallel");
    SweepConfig cfg = small_config(serial.path);
    run_metrics_sweep(cfg);
    run_localization_sweep(cfg);

    SweepConfig par = cfg;
    par.out_dir = parallel.path;
    par.workers = 4;
    run_metrics_sweep(par);
    run_localization_sweep(par);

    CHECK(slurp(serial.path / "metrics.csv") == slurp(parallel.path / "metrics.csv"));
    CHECK(slurp(serial.path / "localization.csv") == slurp(parallel.path / "localization.csv"));
}

TEST_CASE("sweep resumes after a torn row") {
    TempDir dir("resume");
    const SweepConfig cfg = small_config(dir.path);
    run_metrics_sweep(cfg);
    const std::string body = slurp(dir.path / "metrics.csv");

    // Chop the file mid-row: the tail must be recomputed bit-identically.
    std::ofstream out(dir.path / "metrics.csv", std::ios::binary | std::ios::trunc);
    out << body.substr(0, body.size() * 2 / 3);
    out.close();
    run_metrics_sweep(cfg);
    CHECK(slurp(dir.path / "metrics.csv") == body);
}

TEST_CASE("resume refuses a config mismatch") {
    TempDir dir("mismatch");
    SweepConfig cfg = small_config(dir.path);
    run_metrics_sweep(cfg);

    cfg.tau = 130;
    CHECK_THROWS_WITH_AS(run_metrics_sweep(cfg),
                         doctest::Contains("config hash mismatch"), std::runtime_error);
}

TEST_CASE("sweep artifacts without a manifest are refused") {
    TempDir dir("foreign");
    const SweepConfig cfg = small_config(dir.path);
    std::ofstream(dir.path / "metrics.csv") << metrics_csv_header << "\n";
    CHECK_THROWS_AS(run_metrics_sweep(cfg), std::runtime_error);
}

TEST_CASE("localization sweep rows match direct counting") {
    TempDir dir("loc");
    SweepConfig cfg = small_config(dir.path);
    cfg.n = 40;
    cfg.rule_begin = 0;
    cfg.rule_end = 8;  // dead / dying rules, cheap
    run_localization_sweep(cfg);
    const auto rows = load_localization_csv(dir.path / "localization.csv");
    REQUIRE(rows.size() == 8);
    for (const auto& row : rows) {
        const RuleLocalizationCounts direct =
            count_localizations(decode_rule(row.code0, row.code1), cfg.n, cfg.tau, cfg.classifier);
        CHECK(row.travelling == direct.travelling);
        CHECK(row.stationary == direct.stationary);
    }
}

TEST_CASE("csv row formatting is stable") {
    SweepRow row{7, 20, MetricsRecord{4.31, 0.98, 0.84, 0.22, 0.32, 0.28, 6.67e-6}};
    CHECK(format_metrics_row(row) == "7,20,4.31,0.98,0.22,0.84,0.32,0.28,6.67e-06");
    CHECK(format_localization_row({7, 20, 271, 99}) == "7,20,271,99");
}

TEST_CASE("in-memory sweeps agree with persisted ones") {
    TempDir dir("mem");
    const SweepConfig cfg = small_config(dir.path);
    run_metrics_sweep(cfg);
    const auto disk = load_metrics_csv(dir.path / "metrics.csv");
    const auto mem = metrics_sweep_rows(cfg);
    REQUIRE(disk.size() == mem.size());
    for (std::size_t i = 0; i < mem.size(); ++i) {
        CHECK(format_metrics_row(mem[i]) == format_metrics_row(disk[i]));
    }
}
