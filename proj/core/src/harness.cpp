#include "resmono/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "resmono/catalysis.hpp"
#include "resmono/coherence.hpp"
#include "resmono/divergences.hpp"
#include "resmono/measurement.hpp"
#include "resmono/ree.hpp"
#include "resmono/state_io.hpp"

namespace resmono {

namespace {

// Substream index reserved for measurement families and catalyst lists, so
// they are shared by all trials of a run.
constexpr std::uint64_t kSharedStream = 1ull << 40;
constexpr double kSingletMargin = 1e-3;
constexpr double kIdentityTol = 1e-9;
constexpr double kCfTol = 1e-4;

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ConfigError("invalid value '" + text + "' for " + key);
  return v;
}

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void apply_key(SuiteConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim_ws(raw);
  if (key == "trials") c.trials = parse_number<int>(key, v);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "dims") c.dims = parse_dims(v);
  else if (key == "tol") c.tol = parse_number<double>(key, v);
  else if (key == "max_inconclusive") c.max_inconclusive = parse_number<double>(key, v);
  else if (key == "family_size") c.family_size = parse_number<int>(key, v);
  else if (key == "fw_iters") c.fw_iters = parse_number<int>(key, v);
  else if (key == "sdp_max_iter") c.sdp_max_iter = parse_number<int>(key, v);
  else if (key == "monotone") c.monotone = v;
  else if (key == "cat_dim") c.cat_dim = parse_number<int>(key, v);
  else if (key == "cf_trials") c.cf_trials = parse_number<int>(key, v);
  else if (key == "slack_tol") c.slack_tol = parse_number<double>(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

bool known_suite(const std::string& s) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), s) != n.end();
}

std::vector<Dims> suite_default_dims(const std::string& s) {
  if (s == "normalization") return {{2}, {3}, {4}, {5}};
  if (s == "continuity") return {{2, 2}, {2, 3}};
  if (s == "pinsker" || s == "subadditivity") return {{2, 2}};
  if (s == "coherence-identities") return {{2}, {3}, {4}};
  return {};
}

bool fixed_shape(const std::string& s) { return s == "piani" || s == "superadd" || s == "theorem2"; }

void check_shapes(const SuiteConfig& c) {
  const std::string& s = c.suite;
  for (const Dims& d : c.dims) {
    for (int x : d)
      if (x < 2) throw ConfigError("dims entries must be at least 2");
    if (s == "normalization" || s == "coherence-identities") {
      if (d.size() != 1) throw ConfigError(s + ": dims must be single dimensions such as 2..5");
      if (d[0] > 8) throw ConfigError(s + ": dimension above 8");
    } else {
      if (d.size() != 2) throw ConfigError(s + ": dims must be two-party shapes such as 2x3");
      const int n = d[0] * d[1];
      if (s == "subadditivity" && n * n > 81) throw ConfigError("subadditivity: two copies must fit in dimension 81");
      if (n > 16) throw ConfigError(s + ": shape above dimension 16");
    }
  }
}

int default_trials(const SuiteConfig& c) {
  const std::string& s = c.suite;
  if (s == "normalization") return static_cast<int>(c.dims.size());
  if (s == "continuity") return 200 * static_cast<int>(c.dims.size());
  if (s == "piani" || s == "superadd" || s == "subadditivity") return 50;
  if (s == "theorem2") return 26;
  return 200;
}

TrialRecord from_check(const InequalityRecord& r) {
  TrialRecord t;
  t.value = r.lhs.upper;
  t.lower = r.lhs.lower;
  t.upper = r.lhs.upper;
  t.slack = r.slack;
  t.status = r.status == CheckStatus::kCertified ? TrialStatus::kPass
             : r.status == CheckStatus::kViolated ? TrialStatus::kFail
                                                  : TrialStatus::kInconclusive;
  t.detail = r.name + ": " + r.detail;
  return t;
}

std::string digest_of(const std::vector<const DensityMatrix*>& states) {
  std::string all;
  for (const DensityMatrix* s : states) all += state_digest(*s);
  return sha256_hex(all);
}

CheckOptions check_options(const SuiteConfig& c) {
  CheckOptions o;
  o.tol = c.tol;
  o.ree.max_iter = c.fw_iters;
  o.measured.ree.max_iter = c.fw_iters;
  return o;
}

std::uint64_t shared_seed(const SuiteConfig& c) { return substream_seed(c.seed, kSharedStream); }

MeasurementFamily family_for(const SuiteConfig& c, const Bipartition& cut) {
  return default_family(cut, c.family_size, shared_seed(c));
}

DensityMatrix random_four_party(Rng& rng) { return random_density({2, 2, 2, 2}, rng, 0, {0, 1}); }

TrialRecord trial_piani(const SuiteConfig& c, Rng& rng) {
  const DensityMatrix rho4 = random_four_party(rng);
  TrialRecord t = from_check(check_piani(rho4, family_for(c, Bipartition::two_party(2, 2)), check_options(c)));
  t.digest = digest_of({&rho4});
  return t;
}

TrialRecord trial_superadd(const SuiteConfig& c, Rng& rng) {
  if (c.monotone == "cr") {
    const DensityMatrix rho = random_density({2, 2}, rng, 0, {0});
    TrialRecord t = from_check(check_cr_strong_superadditivity(rho, kIdentityTol));
    t.digest = digest_of({&rho});
    return t;
  }
  const DensityMatrix rho4 = random_four_party(rng);
  const MeasurementFamily pair = family_for(c, Bipartition::two_party(2, 2));
  TrialRecord t =
      from_check(check_strong_superadditivity(rho4, family_for(c, rho4.bipartition()), pair, pair, check_options(c)));
  t.digest = digest_of({&rho4});
  return t;
}

TrialRecord trial_continuity(const SuiteConfig& c, Rng& rng, const Dims& shape) {
  const DensityMatrix rho = random_density(shape, rng, 0, {0});
  const DensityMatrix other = random_density(shape, rng, 0, {0});
  // Mixing weights spread over small and large distances.
  const double w = std::pow(rng.uniform(), 2.0);
  const DensityMatrix omega(Matrix((1 - w) * rho.matrix() + w * other.matrix()), shape, {0});
  TrialRecord t = from_check(check_asymptotic_continuity(rho, omega, family_for(c, rho.bipartition()), check_options(c)));
  t.param = "trace_distance";
  t.x = trace_distance(rho, omega);
  t.digest = digest_of({&rho, &omega});
  return t;
}

TrialRecord trial_pinsker(const SuiteConfig& c, Rng& rng, const Dims& shape) {
  const DensityMatrix rho = random_density(shape, rng, 0, {0});
  TrialRecord t = from_check(check_pinsker(rho, family_for(c, rho.bipartition()), check_options(c)));
  t.digest = digest_of({&rho});
  return t;
}

TrialRecord trial_normalization(const SuiteConfig& c, int d) {
  const DensityMatrix phi = max_entangled(d);
  const double d2 = binary_d2(1.0, 2.0 / (d + 1));
  const double expected = std::log2(d + 1.0) - 1.0;
  MeasuredReeOptions mo;
  mo.ree.max_iter = c.fw_iters;
  const BoundInterval m = measured_ree(phi, family_for(c, phi.bipartition()), mo);
  TrialRecord t;
  t.param = "d";
  t.x = d;
  t.value = d2;
  t.lower = m.lower;
  t.upper = m.upper;
  t.slack = m.lower - d2;
  const double residual = std::abs(d2 - expected);
  const bool ok = residual <= kIdentityTol && m.lower >= d2 - c.tol;
  t.status = ok ? TrialStatus::kPass : TrialStatus::kFail;
  std::ostringstream os;
  os << "log2(d+1)-1 = " << expected << ", |D2 - closed form| = " << residual << ", measured D in [" << m.lower << ", "
     << m.upper << "]";
  t.detail = os.str();
  t.digest = digest_of({&phi});
  return t;
}

TrialRecord trial_coherence(const SuiteConfig& c, Rng& rng, int index, int d) {
  const DensityMatrix rho = random_density({d}, rng);
  const double residual = check_cr_identity(rho);
  const DensityMatrix pair = random_density({2, 2}, rng, 0, {0});
  const InequalityRecord ssa = check_cr_strong_superadditivity(pair, kIdentityTol);
  TrialRecord t;
  t.param = "d";
  t.x = d;
  t.value = residual;
  t.lower = t.upper = residual;
  t.slack = std::min(kIdentityTol - residual, ssa.slack);
  bool ok = residual <= kIdentityTol && ssa.status == CheckStatus::kCertified;
  std::ostringstream os;
  os << "cr identity residual " << residual << "; strong superadditivity slack " << ssa.slack;
  std::vector<const DensityMatrix*> inputs = {&rho, &pair};
  std::optional<DensityMatrix> qubit;
  if (index < c.cf_trials) {
    qubit.emplace(random_density({2}, rng));
    CfOptions o;
    o.seed = substream_seed(c.seed, static_cast<std::uint64_t>(index) + kSharedStream + 1);
    const CoherenceOfFormation cf = c_f(*qubit, o);
    const double brute = qubit_cf_brute_force(qubit->matrix());
    const double diff = std::abs(cf.optimizer_value - brute);
    ok = ok && diff <= kCfTol;
    t.slack = std::min(t.slack, kCfTol - diff);
    os << "; C_f optimizer " << cf.optimizer_value << " vs brute force " << brute;
    inputs.push_back(&*qubit);
  }
  t.status = ok ? TrialStatus::kPass : TrialStatus::kFail;
  t.detail = os.str();
  t.digest = digest_of(inputs);
  return t;
}

TrialRecord trial_theorem2(const SuiteConfig& c, int index) {
  const DensityMatrix tiles = tiles_upb();
  FidelityOptions o;
  o.sdp.max_iter = c.sdp_max_iter;
  o.sdp.stop_if_upper_below = 0.5 + kSingletMargin;
  TrialRecord t;
  t.param = "catalyst";
  t.x = index;
  FidelityResult r;
  std::string name = "none";
  if (index == 0) {
    r = ppt_ops_fidelity(tiles, 1, o);
    t.digest = digest_of({&tiles});
  } else {
    const auto cats = default_catalysts(shared_seed(c), std::max(0, trial_count(c) - 6), c.cat_dim);
    const auto& [cat_name, tau] = cats.at(static_cast<std::size_t>(index - 1));
    name = cat_name;
    r = catalytic_fidelity(tiles, tau, 1, CatalystMode::kCorrelated, o);
    t.digest = digest_of({&tiles, &tau});
  }
  t.value = r.value;
  t.lower = std::min(r.value, r.upper);
  t.upper = r.upper;
  t.slack = 0.5 + kSingletMargin - r.upper;
  if (r.upper <= 0.5 + kSingletMargin) {
    t.status = TrialStatus::kPass;
  } else if (r.check.valid(c.tol) && r.choi_fidelity > 0.5 + kSingletMargin) {
    // A verified Choi-PPT operation beating the bound.
    t.status = TrialStatus::kFail;
    t.slack = 0.5 + kSingletMargin - r.choi_fidelity;
  } else {
    t.status = TrialStatus::kInconclusive;
  }
  std::ostringstream os;
  os << "catalyst " << name << ": primal " << r.value << ", certified upper " << r.upper << ", " << r.iterations
     << " iterations (" << r.status << "); Choi check min eig " << r.check.min_eig << ", TP residual " << r.check.tp_residual
     << ", min PT eig " << r.check.min_eig_pt;
  t.detail = os.str();
  return t;
}

TrialRecord trial_subadditivity(const SuiteConfig& c, Rng& rng, const Dims& shape) {
  const DensityMatrix rho = random_density(shape, rng, 0, {0});
  ReeOptions o;
  o.max_iter = c.fw_iters;
  const BoundInterval one = regularized_ree_estimate(rho, 1, o);
  const BoundInterval two = regularized_ree_estimate(rho, 2, o);
  TrialRecord t;
  t.value = two.upper;
  t.lower = two.lower;
  t.upper = two.upper;
  t.slack = one.upper - two.upper;
  t.status = t.slack >= -c.slack_tol ? TrialStatus::kPass : TrialStatus::kFail;
  std::ostringstream os;
  os << "per-copy upper n=1 " << one.upper << ", n=2 " << two.upper << "; n=2 interval [" << two.lower << ", " << two.upper << "]";
  t.detail = os.str();
  t.digest = digest_of({&rho});
  return t;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"piani",         "superadd",             "continuity", "pinsker",
                                                 "normalization", "coherence-identities", "theorem2",   "subadditivity"};
  return names;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("RESMONO_SEED");
  if (env == nullptr) return 42;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("RESMONO_SEED is not an unsigned integer: " + s);
  return v;
}

SuiteConfig default_config(const std::string& suite) {
  if (!known_suite(suite)) throw ConfigError("unknown suite '" + suite + "'");
  SuiteConfig c;
  c.suite = suite;
  c.seed = default_seed();
  return resolve(c);
}

SuiteConfig resolve(SuiteConfig c) {
  if (!known_suite(c.suite)) throw ConfigError("unknown suite '" + c.suite + "'");
  if (!(c.tol > 0)) throw ConfigError("tol must be positive");
  if (!(c.slack_tol > 0)) throw ConfigError("slack_tol must be positive");
  if (!(c.max_inconclusive >= 0 && c.max_inconclusive <= 1)) throw ConfigError("max_inconclusive must lie in [0, 1]");
  if (c.family_size < 0) throw ConfigError("family_size must be nonnegative");
  if (c.fw_iters < 1) throw ConfigError("fw_iters must be positive");
  if (c.sdp_max_iter < 1) throw ConfigError("sdp_max_iter must be positive");
  if (c.cat_dim < 2 || c.cat_dim > 10) throw ConfigError("cat_dim must lie in [2, 10]");
  if (c.cf_trials < 0) throw ConfigError("cf_trials must be nonnegative");
  if (fixed_shape(c.suite) && !c.dims.empty()) throw ConfigError(c.suite + ": the suite has a fixed shape; drop dims");
  if (c.dims.empty()) c.dims = suite_default_dims(c.suite);
  check_shapes(c);

  const std::string& s = c.suite;
  if (s == "superadd") {
    if (c.monotone.empty()) c.monotone = "mree";
    find_monotone(c.monotone).require(Property::kStronglySuperadditive);
    if (c.monotone != "mree" && c.monotone != "cr")
      throw ConfigError("superadd: no certified evaluator for '" + c.monotone + "' (use mree or cr)");
  } else if (s == "continuity") {
    if (c.monotone.empty()) c.monotone = "mree";
    find_monotone(c.monotone).require(Property::kAsymptoticallyContinuous);
    if (c.monotone != "mree") throw ConfigError("continuity: no certified evaluator for '" + c.monotone + "' (use mree)");
  } else if (s == "normalization") {
    if (c.monotone.empty()) c.monotone = "mree";
    find_monotone(c.monotone).require(Property::kNormalized);
    if (c.monotone != "mree") throw ConfigError("normalization: no evaluator for '" + c.monotone + "' (use mree)");
  } else if (s == "piani" || s == "pinsker") {
    if (c.monotone.empty()) c.monotone = "mree";
    if (c.monotone != "mree") throw ConfigError(s + ": the suite is defined for mree only");
  } else if (!c.monotone.empty()) {
    throw ConfigError(s + ": the suite takes no monotone");
  }

  if (c.trials == -1) c.trials = default_trials(c);
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (s == "normalization" && c.trials != static_cast<int>(c.dims.size()))
    throw ConfigError("normalization: one trial per dimension; trials must equal the number of dims");
  return c;
}

std::vector<Dims> parse_dims(const std::string& text) {
  std::vector<Dims> out;
  if (const std::string t = trim_ws(text); !t.empty() && t.back() == ',') throw ConfigError("empty entry in dims '" + text + "'");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_ws(item);
    if (item.empty()) throw ConfigError("empty entry in dims '" + text + "'");
    const auto range = item.find("..");
    if (range != std::string::npos) {
      const int lo = parse_number<int>("dims", item.substr(0, range));
      const int hi = parse_number<int>("dims", item.substr(range + 2));
      if (lo > hi) throw ConfigError("empty range in dims '" + item + "'");
      for (int d = lo; d <= hi; ++d) out.push_back({d});
      continue;
    }
    Dims shape;
    for (std::size_t start = 0;;) {
      const std::size_t x = item.find('x', start);
      shape.push_back(parse_number<int>("dims", trim_ws(item.substr(start, x - start))));
      if (x == std::string::npos) break;
      start = x + 1;
    }
    out.push_back(shape);
  }
  if (out.empty()) throw ConfigError("dims is empty");
  for (const Dims& d : out)
    for (int x : d)
      if (x < 2) throw ConfigError("dims entries must be at least 2");
  return out;
}

std::string format_dims(const std::vector<Dims>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    for (std::size_t j = 0; j < dims[i].size(); ++j) {
      if (j) s += "x";
      s += std::to_string(dims[i][j]);
    }
  }
  return s;
}

SuiteConfig load_config(const std::string& path, SuiteConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    if (section != "defaults" && !known_suite(section)) throw ConfigError("config: unknown section [" + section + "]");
  }
  for (const char* name : {"defaults", base.suite.c_str()}) {
    const auto sec = tree.get_child_optional(name);
    if (!sec) continue;
    for (const auto& [key, node] : *sec) apply_key(base, key, node.data());
  }
  return base;
}

const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::kPass:
      return "pass";
    case TrialStatus::kFail:
      return "fail";
    case TrialStatus::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

int trial_count(const SuiteConfig& c) { return c.trials; }

TrialRecord run_trial(const SuiteConfig& c, int index) {
  if (index < 0 || index >= c.trials) throw ConfigError("trial index out of range");
  Rng rng = Rng(c.seed).child(static_cast<std::uint64_t>(index));
  const std::size_t n_shapes = std::max<std::size_t>(1, c.dims.size());
  const Dims shape = c.dims.empty() ? Dims{} : c.dims[static_cast<std::size_t>(index) % n_shapes];
  TrialRecord t;
  const std::string& s = c.suite;
  if (s == "piani") t = trial_piani(c, rng);
  else if (s == "superadd") t = trial_superadd(c, rng);
  else if (s == "continuity") t = trial_continuity(c, rng, shape);
  else if (s == "pinsker") t = trial_pinsker(c, rng, shape);
  else if (s == "normalization") t = trial_normalization(c, shape[0]);
  else if (s == "coherence-identities") t = trial_coherence(c, rng, index, shape[0]);
  else if (s == "theorem2") t = trial_theorem2(c, index);
  else if (s == "subadditivity") t = trial_subadditivity(c, rng, shape);
  else throw ConfigError("unknown suite '" + s + "'");
  t.index = index;
  t.seed = substream_seed(c.seed, static_cast<std::uint64_t>(index));
  if (t.param.empty()) {
    t.param = "trial";
    t.x = index;
  }
  return t;
}

void summarize(Report& r) {
  r.passed = r.failed = r.inconclusive = 0;
  r.max_violation = 0.0;
  for (const TrialRecord& t : r.trials) {
    switch (t.status) {
      case TrialStatus::kPass:
        ++r.passed;
        break;
      case TrialStatus::kFail:
        ++r.failed;
        r.max_violation = std::max(r.max_violation, -t.slack);
        break;
      case TrialStatus::kInconclusive:
        ++r.inconclusive;
        break;
    }
  }
  const double frac = r.trials.empty() ? 0.0 : static_cast<double>(r.inconclusive) / static_cast<double>(r.trials.size());
  if (r.failed > 0) r.status = "fail";
  else if (frac > r.config.max_inconclusive) r.status = "too-inconclusive";
  else r.status = "pass";
}

Report run_suite(const SuiteConfig& config) {
  const SuiteConfig c = resolve(config);
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.config = c;
  r.timestamp = utc_timestamp();
  r.trials.reserve(static_cast<std::size_t>(c.trials));
  for (int i = 0; i < c.trials; ++i) r.trials.push_back(run_trial(c, i));
  summarize(r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int exit_code(const Report& r) { return r.status == "pass" ? 0 : 2; }

}  // namespace resmono
