#include "actin/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "actin/stepper.hpp"
#include "actin/version.hpp"

namespace actin {

namespace {

using json = nlohmann::ordered_json;

// Raw engine bits, least significant first, one mt19937_64 word per 64 draws.
// Distributions are avoided so streams are identical across platforms.
class BitStream {
public:
    explicit BitStream(std::uint64_t seed) : engine_(seed) {}

    int next() {
        if (avail_ == 0) {
            word_ = engine_();
            avail_ = 64;
        }
        const int bit = static_cast<int>(word_ & 1);
        word_ >>= 1;
        --avail_;
        return bit;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t word_ = 0;
    int avail_ = 0;
};

std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

constexpr std::uint64_t fnv_offset = 14695981039346656037ull;
constexpr std::uint64_t fnv_prime = 1099511628211ull;

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = fnv_offset;
    for (unsigned char c : text) {
        h ^= c;
        h *= fnv_prime;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Runs compute over [begin, end) on a small pool and hands rows to emit in
// index order, so parallel and serial execution write identical bytes.
template <typename Row>
void ordered_scan(int begin, int end, int workers, const std::function<Row(int)>& compute,
                  const std::function<void(const Row&)>& emit) {
    if (end <= begin) return;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    workers = std::min(workers, end - begin);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) emit(compute(i));
        return;
    }

    std::atomic<int> next{begin};
    std::map<int, Row> ready;
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr failure;

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int idx = next.fetch_add(1);
                if (idx >= end) break;
                try {
                    Row row = compute(idx);
                    std::lock_guard<std::mutex> lock(mu);
                    ready.emplace(idx, std::move(row));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                    next.store(end);
                }
                cv.notify_all();
            }
        });
    }

    {
        std::unique_lock<std::mutex> lock(mu);
        for (int want = begin; want < end; ++want) {
            cv.wait(lock, [&] { return failure || ready.count(want) != 0; });
            if (failure) break;
            Row row = std::move(ready.at(want));
            ready.erase(want);
            lock.unlock();
            emit(row);
            lock.lock();
        }
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

json classifier_json(const ClassifierConfig& c) {
    return json{{"activity_min", c.activity_min},
                {"activity_max_per_tau", c.activity_max_per_tau},
                {"stationary_span", c.stationary_span},
                {"travelling_span", c.travelling_span},
                {"max_step_count", c.max_step_count},
                {"max_period", c.max_period},
                {"probe_window", c.probe_window}};
}

json config_json(const SweepConfig& cfg) {
    return json{{"n", cfg.n},
                {"tau", cfg.tau},
                {"init", to_string(cfg.init)},
                {"window_width", cfg.window_width},
                {"seed_pattern", seed_bits(cfg.seed_sx) + "," + seed_bits(cfg.seed_sy)},
                {"rng_seed", cfg.rng_seed},
                {"rule_begin", cfg.rule_begin},
                {"rule_end", cfg.rule_end},
                {"classifier", classifier_json(cfg.classifier)}};
}

struct Manifest {
    std::string hash;
    std::vector<std::pair<int, int>> metrics_completed;
    std::vector<std::pair<int, int>> localization_completed;
};

std::filesystem::path manifest_path(const SweepConfig& cfg) {
    return cfg.out_dir / "manifest.json";
}

std::vector<std::pair<int, int>> read_ranges(const json& j, const char* key) {
    std::vector<std::pair<int, int>> out;
    if (!j.contains(key)) return out;
    for (const auto& pair : j.at(key)) {
        out.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    return out;
}

Manifest load_manifest(const SweepConfig& cfg) {
    std::ifstream in(manifest_path(cfg));
    if (!in) {
        throw std::runtime_error("cannot read manifest: " + manifest_path(cfg).string());
    }
    json j = json::parse(in);
    Manifest m;
    m.hash = j.at("config_hash").get<std::string>();
    m.metrics_completed = read_ranges(j, "metrics_completed");
    m.localization_completed = read_ranges(j, "localization_completed");
    return m;
}

void save_manifest(const SweepConfig& cfg, const Manifest& m) {
    json j;
    j["tool"] = "actin";
    j["version"] = version;
    j["config_hash"] = m.hash;
    j["config"] = config_json(cfg);
    j["metrics_completed"] = m.metrics_completed;
    j["localization_completed"] = m.localization_completed;
    std::ofstream out(manifest_path(cfg), std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write manifest: " + manifest_path(cfg).string());
    }
    out << j.dump(2) << '\n';
}

void merge_range(std::vector<std::pair<int, int>>& ranges, int begin, int end) {
    ranges.emplace_back(begin, end);
    std::sort(ranges.begin(), ranges.end());
    std::vector<std::pair<int, int>> merged;
    for (const auto& r : ranges) {
        if (!merged.empty() && r.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, r.second);
        } else {
            merged.push_back(r);
        }
    }
    ranges = std::move(merged);
}

// Inspects an append-only CSV and returns the next rule index to compute.
// A trailing line without '\n' is a crash artifact and is cut off.
int csv_resume_point(const std::filesystem::path& path, const std::string& header,
                     int rule_begin, int rule_end) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    const std::size_t keep = text.rfind('\n');
    if (keep == std::string::npos) {
        throw std::runtime_error(path.string() + " holds no complete rows");
    }
    if (keep + 1 != text.size()) {
        std::filesystem::resize_file(path, keep + 1);
        text.resize(keep + 1);
    }

    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line) || line != header) {
        throw std::runtime_error(path.string() + " has an unexpected header");
    }
    int next = rule_begin;
    while (std::getline(lines, line)) {
        int c0 = -1, c1 = -1;
        if (std::sscanf(line.c_str(), "%d,%d", &c0, &c1) != 2 || c0 * 32 + c1 != next ||
            next >= rule_end) {
            throw std::runtime_error(path.string() + " does not match the configured rule range");
        }
        ++next;
    }
    return next;
}

// Shared skeleton of the two persistent sweeps.
void run_persistent_sweep(const SweepConfig& cfg, const std::filesystem::path& csv_name,
                          const std::string& header,
                          std::vector<std::pair<int, int>> Manifest::* completed,
                          const std::function<std::string(int)>& compute_row) {
    if (cfg.out_dir.empty()) {
        throw std::runtime_error("sweep needs an output directory");
    }
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path csv = cfg.out_dir / csv_name;
    const std::string hash = hash_hex(config_hash(cfg));

    Manifest manifest;
    if (std::filesystem::exists(manifest_path(cfg))) {
        manifest = load_manifest(cfg);
        if (manifest.hash != hash) {
            throw std::runtime_error("config hash mismatch in " + manifest_path(cfg).string() +
                                     "; refusing to resume");
        }
    } else if (std::filesystem::exists(csv)) {
        throw std::runtime_error(csv.string() + " exists without a manifest; refusing to run");
    } else {
        manifest.hash = hash;
        save_manifest(cfg, manifest);
    }

    int resume_from = cfg.rule_begin;
    if (std::filesystem::exists(csv)) {
        resume_from = csv_resume_point(csv, header, cfg.rule_begin, cfg.rule_end);
    } else {
        std::ofstream out(csv, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + csv.string());
        }
        out << header << '\n';
    }

    if (resume_from < cfg.rule_end) {
        std::ofstream out(csv, std::ios::binary | std::ios::app);
        if (!out) {
            throw std::runtime_error("cannot append to " + csv.string());
        }
        ordered_scan<std::string>(resume_from, cfg.rule_end, cfg.workers, compute_row,
                                  [&](const std::string& row) {
                                      out << row << '\n';
                                      out.flush();
                                  });
    }

    merge_range(manifest.*completed, cfg.rule_begin, cfg.rule_end);
    save_manifest(cfg, manifest);
}

} // namespace

const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::random_full: return "random_full";
        case InitKind::seed_pattern: return "seed";
        default: return "random_window";
    }
}

std::string canonical_config_text(const SweepConfig& cfg) {
    std::ostringstream out;
    out << "n=" << cfg.n << ";tau=" << cfg.tau << ";init=" << to_string(cfg.init)
        << ";window_width=" << cfg.window_width << ";seed_pattern=" << seed_bits(cfg.seed_sx)
        << ',' << seed_bits(cfg.seed_sy) << ";rng_seed=" << cfg.rng_seed
        << ";rules=[" << cfg.rule_begin << ',' << cfg.rule_end << ")"
        << ";activity_min=" << cfg.classifier.activity_min
        << ";activity_max_per_tau=" << cfg.classifier.activity_max_per_tau
        << ";stationary_span=" << cfg.classifier.stationary_span
        << ";travelling_span=" << cfg.classifier.travelling_span
        << ";max_step_count=" << cfg.classifier.max_step_count
        << ";max_period=" << cfg.classifier.max_period
        << ";probe_window=" << cfg.classifier.probe_window;
    return out.str();
}

std::uint64_t config_hash(const SweepConfig& cfg) {
    return fnv1a(canonical_config_text(cfg));
}

AutomatonState random_window_state(int n, int start, int width, std::uint64_t stream_seed) {
    if (start < 0 || width < 0 || start + width > n) {
        throw std::domain_error("random window out of range");
    }
    AutomatonState s = make_resting_state(n);
    BitStream bits(stream_seed);
    for (int i = 0; i < width; ++i) s.x.cells[start + i] = static_cast<std::uint8_t>(bits.next());
    for (int i = 0; i < width; ++i) s.y.cells[start + i] = static_cast<std::uint8_t>(bits.next());
    return s;
}

AutomatonState initial_state_for_rule(const SweepConfig& cfg, int rule_index) {
    const std::uint64_t stream_seed = cfg.rng_seed ^ static_cast<std::uint64_t>(rule_index);
    switch (cfg.init) {
        case InitKind::random_full:
            return random_window_state(cfg.n, 0, cfg.n, stream_seed);
        case InitKind::seed_pattern:
            return seed_state(Seed{cfg.seed_sx, cfg.seed_sy, cfg.n / 2 - 2}, cfg.n);
        default: {
            const int width = std::min(cfg.window_width, cfg.n);
            return random_window_state(cfg.n, (cfg.n - width) / 2, width, stream_seed);
        }
    }
}

std::string format_metrics_row(const SweepRow& row) {
    std::ostringstream out;
    out << row.code0 << ',' << row.code1 << ',' << fmt_g6(row.metrics.H) << ','
        << fmt_g6(row.metrics.D) << ',' << fmt_g6(row.metrics.R) << ',' << fmt_g6(row.metrics.P)
        << ',' << fmt_g6(row.metrics.A) << ',' << fmt_g6(row.metrics.I) << ','
        << fmt_g6(row.metrics.Z);
    return out.str();
}

std::string format_localization_row(const RuleLocalizationCounts& row) {
    std::ostringstream out;
    out << row.code0 << ',' << row.code1 << ',' << row.travelling << ',' << row.stationary;
    return out.str();
}

namespace {

SweepRow metrics_row_for(const SweepConfig& cfg, int index) {
    const Rule rule = rule_at(index);
    const SpaceTimeRecord rec = run(rule, initial_state_for_rule(cfg, index), cfg.tau);
    return SweepRow{rule.code0, rule.code1, compute_all(rec, Chain::x)};
}

RuleLocalizationCounts localization_row_for(const SweepConfig& cfg, int index) {
    return count_localizations(rule_at(index), cfg.n, cfg.tau, cfg.classifier);
}

} // namespace

std::vector<SweepRow> metrics_sweep_rows(const SweepConfig& cfg) {
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.rule_end - cfg.rule_begin));
    ordered_scan<SweepRow>(
        cfg.rule_begin, cfg.rule_end, cfg.workers,
        [&](int index) { return metrics_row_for(cfg, index); },
        [&](const SweepRow& row) { rows.push_back(row); });
    return rows;
}

std::vector<RuleLocalizationCounts> localization_sweep_rows(const SweepConfig& cfg) {
    std::vector<RuleLocalizationCounts> rows;
    rows.reserve(static_cast<std::size_t>(cfg.rule_end - cfg.rule_begin));
    ordered_scan<RuleLocalizationCounts>(
        cfg.rule_begin, cfg.rule_end, cfg.workers,
        [&](int index) { return localization_row_for(cfg, index); },
        [&](const RuleLocalizationCounts& row) { rows.push_back(row); });
    return rows;
}

void run_metrics_sweep(const SweepConfig& cfg) {
    run_persistent_sweep(cfg, "metrics.csv", metrics_csv_header, &Manifest::metrics_completed,
                         [&](int index) { return format_metrics_row(metrics_row_for(cfg, index)); });
}

void run_localization_sweep(const SweepConfig& cfg) {
    run_persistent_sweep(cfg, "localization.csv", localization_csv_header,
                         &Manifest::localization_completed, [&](int index) {
                             return format_localization_row(localization_row_for(cfg, index));
                         });
}

std::vector<SweepRow> load_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != metrics_csv_header) {
        throw std::runtime_error(path.string() + " has an unexpected header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        SweepRow row;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &row.code0, &row.code1,
                        &row.metrics.H, &row.metrics.D, &row.metrics.R, &row.metrics.P,
                        &row.metrics.A, &row.metrics.I, &row.metrics.Z) != 9) {
            throw std::runtime_error(path.string() + " holds a malformed row");
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<RuleLocalizationCounts> load_localization_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != localization_csv_header) {
        throw std::runtime_error(path.string() + " has an unexpected header");
    }
    std::vector<RuleLocalizationCounts> rows;
    while (std::getline(in, line)) {
        RuleLocalizationCounts row;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d", &row.code0, &row.code1, &row.travelling,
                        &row.stationary) != 4) {
            throw std::runtime_error(path.string() + " holds a malformed row");
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace actin
