#pragma once

// Verification suites and their reports.
//
// Config files are INI: an optional [defaults] section followed by one section
// per suite, each holding `key = value` lines. Keys: trials, seed, dims, tol,
// max_inconclusive, family_size, fw_iters, sdp_max_iter, monotone, cat_dim,
// cf_trials, slack_tol. Seed precedence: command line, then the suite
// section, then [defaults], then RESMONO_SEED, then 42.
//
// Reports are JSON (schema "resmono-report/1") or CSV. Everything except the
// "volatile" object (timestamp, wall time) is a function of the config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resmono/linalg.hpp"
#include "resmono/monotones.hpp"

namespace resmono {

inline constexpr const char* kReportSchema = "resmono-report/1";

struct SuiteConfig {
  std::string suite;
  /// Shapes to sample; suites with a fixed shape reject it. Empty means the
  /// suite default.
  std::vector<Dims> dims;
  /// -1 means the suite default; anything else below 1 is rejected.
  int trials = -1;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  double max_inconclusive = 0.2;
  /// Random local-basis POVMs added to measurement families.
  int family_size = 8;
  int fw_iters = 40;
  int sdp_max_iter = 50000;
  /// Empty means the suite default.
  std::string monotone;
  int cat_dim = 2;
  /// coherence-identities: trials that also run the C_f comparison.
  int cf_trials = 50;
  /// subadditivity: allowed increase of the per-copy upper bound.
  double slack_tol = 1e-4;
};

const std::vector<std::string>& suite_names();

/// Seed from RESMONO_SEED if set and valid, else 42.
std::uint64_t default_seed();

/// Config for `suite` with every default filled in. Throws ConfigError for an
/// unknown suite.
SuiteConfig default_config(const std::string& suite);

/// Fills defaults and checks ranges; throws ConfigError.
SuiteConfig resolve(SuiteConfig config);

/// "2..5" -> {{2},{3},{4},{5}}, "2x2,2x3" -> {{2,2},{2,3}}, "3" -> {{3}}.
std::vector<Dims> parse_dims(const std::string& text);
std::string format_dims(const std::vector<Dims>& dims);

/// Applies [defaults] and [suite] of an INI file on top of `base`.
SuiteConfig load_config(const std::string& path, SuiteConfig base);

enum class TrialStatus { kPass, kFail, kInconclusive };
const char* to_string(TrialStatus s);

struct TrialRecord {
  int index = 0;
  /// Seed of the trial's random substream.
  std::uint64_t seed = 0;
  /// SHA-256 over the digests of the trial's input states.
  std::string digest;
  /// Label of the trial parameter and its numeric value (plot x axis).
  std::string param;
  double x = 0.0;
  /// Main computed quantity and its certified interval.
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// Margin by which the checked inequality holds (negative when violated).
  double slack = 0.0;
  TrialStatus status = TrialStatus::kInconclusive;
  std::string detail;
};

struct Report {
  std::string schema = kReportSchema;
  SuiteConfig config;
  std::vector<TrialRecord> trials;
  int passed = 0;
  int failed = 0;
  int inconclusive = 0;
  /// Largest -slack over failed trials, 0 when none failed.
  double max_violation = 0.0;
  /// "pass", "fail" or "too-inconclusive".
  std::string status;
  std::string timestamp;
  double wall_seconds = 0.0;
};

/// Runs every trial of the suite. Throws ConfigError for invalid configs.
Report run_suite(const SuiteConfig& config);

/// Runs a single trial of a resolved config; same result as inside run_suite.
TrialRecord run_trial(const SuiteConfig& config, int index);

/// Number of trials run_suite executes for a resolved config.
int trial_count(const SuiteConfig& config);

/// Recomputes counts, max violation and status from the trial list.
void summarize(Report& report);

/// 0 for "pass", 2 otherwise.
int exit_code(const Report& report);

std::string report_json(const Report& report);
std::string report_csv(const Report& report);
/// Throws std::invalid_argument for malformed input or another schema.
Report parse_report_json(const std::string& text);

}  // namespace resmono
