#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "actin/localization.hpp"
#include "actin/metrics.hpp"
#include "actin/state.hpp"

namespace actin {

enum class InitKind { random_window, random_full, seed_pattern };

const char* to_string(InitKind k);

struct SweepConfig {
    int n = 300;
    int tau = 1000;
    InitKind init = InitKind::random_window;
    int window_width = 100;
    std::uint8_t seed_sx = 0;  // used by InitKind::seed_pattern only
    std::uint8_t seed_sy = 0;
    std::uint64_t rng_seed = 1;
    int rule_begin = 0;     // flat rule index, inclusive
    int rule_end = 1024;    // exclusive
    int workers = 0;        // 0 picks hardware concurrency
    std::filesystem::path out_dir;
    ClassifierConfig classifier;
};

// Canonical text covering every field that affects output bytes (workers
// and out_dir excluded); hashed with 64-bit FNV-1a for resume identity.
std::string canonical_config_text(const SweepConfig& cfg);
std::uint64_t config_hash(const SweepConfig& cfg);

// Excites cells with p = 0.5 by drawing raw bits from std::mt19937_64
// seeded with stream_seed, one engine word per 64 cells, least significant
// bit first, chain x before chain y. Sites [start, start+width) only.
AutomatonState random_window_state(int n, int start, int width, std::uint64_t stream_seed);

// Initial condition for one rule: stream seed rng_seed ^ rule_index, window
// centered for InitKind::random_window, full chain otherwise.
AutomatonState initial_state_for_rule(const SweepConfig& cfg, int rule_index);

struct SweepRow {
    int code0 = 0;
    int code1 = 0;
    MetricsRecord metrics;
};

// In-memory sweeps; parallel over rules, results in rule order.
std::vector<SweepRow> metrics_sweep_rows(const SweepConfig& cfg);
std::vector<RuleLocalizationCounts> localization_sweep_rows(const SweepConfig& cfg);

// Persistent sweeps: append-only CSV plus manifest.json in cfg.out_dir.
// A fresh directory is initialised; a directory holding a manifest with
// the same config hash resumes at the first missing rule (a trailing
// partial CSV line from a crash is discarded). A manifest with a different
// hash, or sweep artifacts without a manifest, refuse to run.
void run_metrics_sweep(const SweepConfig& cfg);
void run_localization_sweep(const SweepConfig& cfg);

inline const char* metrics_csv_header = "code0,code1,H,D,R,P,A,I,Z";
inline const char* localization_csv_header = "code0,code1,T,S";

std::string format_metrics_row(const SweepRow& row);
std::string format_localization_row(const RuleLocalizationCounts& row);

std::vector<SweepRow> load_metrics_csv(const std::filesystem::path& path);
std::vector<RuleLocalizationCounts> load_localization_csv(const std::filesystem::path& path);

} // namespace actin
