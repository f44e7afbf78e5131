// resmono command-line tool. Exit codes: 0 all pass, 2 any failure, 3 bad
// configuration or input.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "resmono/catalysis.hpp"
#include "resmono/cones.hpp"
#include "resmono/harness.hpp"
#include "resmono/monotones.hpp"
#include "resmono/state_io.hpp"

using namespace resmono;

namespace {

constexpr int kExitFail = 2;
constexpr int kExitConfig = 3;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DensityMatrix load_state(const std::string& path) {
  try {
    return read_state_file(path);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// measures ----------------------------------------------------------------

struct MeasuresArgs {
  std::string state;
  std::string monotone;
  std::uint64_t seed = 0;
  bool json = false;
};

int run_measures(const MeasuresArgs& a) {
  const DensityMatrix rho = load_state(a.state);
  std::vector<const Monotone*> chosen;
  if (a.monotone.empty()) {
    for (const Monotone& m : monotones())
      if (!m.bipartite || rho.has_cut()) chosen.push_back(&m);
  } else {
    for (const std::string& n : split(a.monotone, ',')) chosen.push_back(&find_monotone(n));
  }
  for (const Monotone* m : chosen)
    if (m->bipartite && !rho.has_cut()) throw ConfigError(m->name + " needs a state with a cut");
  if (!a.json) std::printf("%-6s %-22s %-22s %s\n", "name", "lower", "upper", "certificate");
  std::string js = "[";
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const Monotone& m = *chosen[i];
    const BoundInterval b = m.evaluate(rho, a.seed);
    if (a.json) {
      char buf[512];
      std::snprintf(buf, sizeof buf, "%s{\"monotone\":\"%s\",\"lower\":%.17g,\"upper\":%.17g}", i ? "," : "", m.name.c_str(),
                    b.lower, b.upper);
      js += buf;
    } else {
      std::printf("%-6s %-22.15g %-22.15g %s\n", m.name.c_str(), b.lower, b.upper, b.lower_certificate.c_str());
    }
  }
  if (a.json) std::cout << js << "]\n";
  return 0;
}

// verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  int trials = -1;
  std::string seed;
  std::string dims;
  std::string config;
  std::string monotone;
  std::string out;
  /// Empty: JSON, written only when --out is given.
  std::string format;
  int trial = -1;
  bool quiet = false;
};

void print_normalization_table(const Report& r) {
  std::printf("%3s %20s %20s %20s\n", "d", "log2(d+1)-1", "D2(1||2/(d+1))", "measured lower");
  for (const TrialRecord& t : r.trials) {
    const double d = t.x;
    std::printf("%3d %20.15f %20.15f %20.15f\n", static_cast<int>(d), std::log2(d + 1) - 1, t.value, t.lower);
  }
}

int run_verify(const VerifyArgs& a) {
  SuiteConfig c = SuiteConfig{};
  c.suite = a.suite;
  c.seed = default_seed();
  if (!a.config.empty()) c = load_config(a.config, c);
  if (!a.seed.empty()) {
    try {
      c.seed = std::stoull(a.seed);
    } catch (const std::exception&) {
      throw ConfigError("--seed must be an unsigned integer");
    }
  }
  if (a.trials != -1) c.trials = a.trials;
  if (!a.dims.empty()) c.dims = parse_dims(a.dims);
  if (!a.monotone.empty()) c.monotone = a.monotone;
  c = resolve(c);

  if (a.trial >= 0) {
    const TrialRecord t = run_trial(c, a.trial);
    std::printf("trial %d seed %llu digest %s status %s slack %.6g\n%s\n", t.index, static_cast<unsigned long long>(t.seed),
                t.digest.c_str(), to_string(t.status), t.slack, t.detail.c_str());
    return t.status == TrialStatus::kFail ? kExitFail : 0;
  }

  const Report r = run_suite(c);
  if (a.format == "csv") emit(report_csv(r), a.out);
  else if (a.format == "json" || !a.out.empty()) emit(report_json(r), a.out);
  if (!a.quiet) {
    if (c.suite == "normalization") print_normalization_table(r);
    std::fprintf(stderr, "%s: %d trials, %d pass, %d fail, %d inconclusive, max violation %.3g -> %s (%.1f s)\n",
                 c.suite.c_str(), static_cast<int>(r.trials.size()), r.passed, r.failed, r.inconclusive, r.max_violation,
                 r.status.c_str(), r.wall_seconds);
    for (const TrialRecord& t : r.trials)
      if (t.status == TrialStatus::kFail)
        std::fprintf(stderr, "  fail: trial %d seed %llu digest %s: %s\n", t.index, static_cast<unsigned long long>(t.seed),
                     t.digest.c_str(), t.detail.c_str());
  }
  return exit_code(r);
}

// catalysis sweep -----------------------------------------------------------

struct SweepArgs {
  std::string state;
  int cat_dim = 2;
  int rounds = 0;
  int random = 20;
  std::uint64_t seed = 0;
  std::string mode = "correlated";
};

int run_sweep(const SweepArgs& a) {
  const DensityMatrix rho = load_state(a.state);
  if (!rho.has_cut()) throw ConfigError("catalysis sweep needs a state with a cut");
  if (a.cat_dim < 2) throw ConfigError("--cat-dim must be at least 2");
  if (a.mode != "correlated" && a.mode != "strict") throw ConfigError("--mode must be correlated or strict");
  const CatalystMode mode = a.mode == "strict" ? CatalystMode::kStrict : CatalystMode::kCorrelated;
  const DensityMatrix ab = rho.as_two_party();
  const bool ppt = is_ppt(ab, 1e-10);
  const double bound = 0.5 + 1e-3;
  FidelityOptions o;
  if (ppt) o.sdp.stop_if_upper_below = bound;

  std::vector<std::pair<std::string, DensityMatrix>> cats;
  try {
    cats = default_catalysts(a.seed, a.random, a.cat_dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  int failed = 0;
  std::printf("input %s; singlet fidelity per catalyst (%s mode)\n", ppt ? "PPT" : "NPT", a.mode.c_str());
  std::printf("%-22s %12s %12s %7s  %s\n", "catalyst", "primal", "upper", "iters", "status");
  auto report = [&](const std::string& name, const FidelityResult& r) {
    const bool beat = ppt && r.check.valid() && r.choi_fidelity > bound;
    failed += beat;
    std::printf("%-22s %12.8f %12.8f %7d  %s%s\n", name.c_str(), r.value, r.upper, r.iterations, r.status.c_str(),
                beat ? "  EXCEEDS 1/2 + 1e-3" : "");
  };
  try {
    report("none", ppt_ops_fidelity(ab, 1, o));
    for (const auto& [name, tau] : cats) report(name, catalytic_fidelity(ab, tau, 1, mode, o));
    if (a.rounds > 0) {
      const CatalystSearchResult s = catalyst_search(ab, 1, a.cat_dim, a.rounds, a.seed, o);
      std::printf("catalyst search, %d rounds:", a.rounds);
      for (double h : s.history) std::printf(" %.8f", h);
      std::printf("\n");
      report("search-best", s.best);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return failed ? kExitFail : 0;
}

// report ------------------------------------------------------------------

int run_report(const std::string& in, const std::string& format, const std::string& out) {
  Report r;
  try {
    r = parse_report_json(read_text(in));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (format == "csv") emit(report_csv(r), out);
  else emit(report_json(r), out);
  return exit_code(r);
}

// state -------------------------------------------------------------------

int run_state(const std::string& name, int d, double p, const std::string& out) {
  DensityMatrix rho = [&] {
    if (name == "phi") return max_entangled(d);
    if (name == "tiles") return tiles_upb();
    if (name == "isotropic") return isotropic(d, p);
    if (name == "werner") return werner(d, p);
    if (name == "plus") return plus_state();
    if (name == "mixed") return maximally_mixed({d, d}, {0});
    throw ConfigError("unknown state '" + name + "' (phi, tiles, isotropic, werner, plus, mixed)");
  }();
  emit(state_to_json(rho), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resmono: entanglement and coherence monotones, inequality suites and catalysis checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "resmono 0.1.0");

  MeasuresArgs ma;
  ma.seed = 1;
  auto* measures = app.add_subcommand("measures", "Evaluate monotones on a state file");
  measures->add_option("state", ma.state, "State JSON file")->required();
  measures->add_option("--monotone", ma.monotone, "ree, mree, cr, q, cf, sq, cemi (comma separated); default all applicable");
  measures->add_option("--seed", ma.seed, "Seed for randomized searches");
  measures->add_flag("--json", ma.json, "Print JSON");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", va.suite, "piani, superadd, continuity, pinsker, normalization, coherence-identities, theorem2, subadditivity")
      ->required();
  verify->add_option("--trials", va.trials, "Number of trials");
  verify->add_option("--seed", va.seed, "Seed (overrides config and RESMONO_SEED)");
  verify->add_option("--dims", va.dims, "Shapes, e.g. 2..5 or 2x2,2x3");
  verify->add_option("--config", va.config, "INI config file");
  verify->add_option("--monotone", va.monotone, "Monotone for superadd/continuity/normalization");
  verify->add_option("--out", va.out, "Report file, - for stdout (default: stdout if --format is given)");
  verify->add_option("--format", va.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--trial", va.trial, "Run only this trial index");
  verify->add_flag("--quiet", va.quiet, "No summary on stderr");

  SweepArgs sa;
  sa.seed = 7;
  auto* catalysis = app.add_subcommand("catalysis", "Catalytic singlet fidelity");
  catalysis->require_subcommand(1);
  auto* sweep = catalysis->add_subcommand("sweep", "Sweep the default catalysts");
  sweep->add_option("state", sa.state, "State JSON file")->required();
  sweep->add_option("--cat-dim", sa.cat_dim, "Catalyst local dimension");
  sweep->add_option("--rounds", sa.rounds, "Catalyst search rounds after the sweep");
  sweep->add_option("--random", sa.random, "Number of random catalysts");
  sweep->add_option("--seed", sa.seed, "Seed for random catalysts");
  sweep->add_option("--mode", sa.mode, "correlated or strict");

  std::string rin, rformat = "csv", rout;
  auto* report = app.add_subcommand("report", "Convert a JSON report");
  report->add_option("in", rin, "Report JSON")->required();
  report->add_option("--format", rformat, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  report->add_option("--out", rout, "Output file (default stdout)");

  std::string sname, sout;
  int sd = 2;
  double sp = 0.5;
  auto* state = app.add_subcommand("state", "Write a fixture state as JSON");
  state->add_option("name", sname, "phi, tiles, isotropic, werner, plus, mixed")->required();
  state->add_option("--d", sd, "Local dimension");
  state->add_option("--p", sp, "Mixing parameter");
  state->add_option("--out", sout, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*measures) return run_measures(ma);
    if (*verify) return run_verify(va);
    if (*sweep) return run_sweep(sa);
    if (*report) return run_report(rin, rformat, rout);
    if (*state) return run_state(sname, sd, sp, sout);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitConfig;
}
