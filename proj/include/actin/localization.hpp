#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actin/rule.hpp"
#include "actin/state.hpp"

namespace actin {

// Five-cell excitation pattern per chain dropped onto otherwise resting
// chains. Bit k of the pattern codes site placement+k, MSB first, so the
// seed string "10001" excites the first and last of the five sites.
struct Seed {
    std::uint8_t sx = 0;
    std::uint8_t sy = 0;
    int placement = 0;
};

std::string seed_bits(std::uint8_t pattern);

// All 1024 (sx, sy) pairs with centered placement n/2 - 2, ordered by
// sx*32 + sy ascending. Throws std::domain_error for n < 20.
std::vector<Seed> enumerate_seeds(int n);

AutomatonState seed_state(const Seed& seed, int n);

enum class LocalizationKind { none, stationary, travelling };

const char* to_string(LocalizationKind k);

struct LocalizationVerdict {
    LocalizationKind kind = LocalizationKind::none;
    long total_activity = 0;  // excited cells over both chains, steps 0..tau
    int support_span = 0;     // extent of the union of excited supports
    bool persisted = false;   // at least one excited cell at every step
    std::optional<int> period;
    std::optional<int> shift;
};

// Thresholds are counts of excited cells over BOTH chains; the activity band
// bounds are per-chain figures and are doubled internally. The defaults are
// calibrated against the published per-rule seed counts.
struct ClassifierConfig {
    long activity_min = 10;         // per-chain lower bound of the activity band
    long activity_max_per_tau = 6;  // per-chain ceiling is this times tau
    int stationary_span = 20;       // W_s
    int travelling_span = 50;       // W_t
    int max_step_count = 48;        // C_max, per-step ceiling inside a localized phase
    int max_period = 60;            // p_max for the shift-periodicity probe
    int probe_window = 80;          // probe length and minimum localized-phase length
};

// Runs tau steps from the seed and classifies the outcome. The verdict is
// none unless activity_min <= total_activity <= activity_max_per_tau*tau
// and at least one cell is excited at every step. Survivors are split by
// the span of their cumulative support; the ambiguous middle band is
// resolved by searching the final probe_window steps for the smallest
// period p <= max_period such that config(t+p) equals config(t) shifted
// by a common offset d (d == 0 reads stationary, d != 0 travelling).
// Throws std::domain_error for tau < 100.
LocalizationVerdict classify_seed(const Rule& rule, const Seed& seed, int n, int tau,
                                  const ClassifierConfig& cfg = {});

struct RuleLocalizationCounts {
    int code0 = 0;
    int code1 = 0;
    int travelling = 0;  // T
    int stationary = 0;  // S
};

// Classifies all 1024 seeds. Rules with f[0][0] == 1 are short-circuited:
// their background ignites and every seed blows through the activity
// ceiling, so T = S = 0 without running.
RuleLocalizationCounts count_localizations(const Rule& rule, int n, int tau,
                                           const ClassifierConfig& cfg = {});

} // namespace actin
