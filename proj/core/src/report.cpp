#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "resmono/harness.hpp"

namespace resmono {

namespace {

using ordered = nlohmann::ordered_json;
using nlohmann::json;

// Non-finite values become strings so that they survive a round trip.
ordered num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("report: expected a number");
}

std::string csv_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

TrialStatus status_from(const std::string& s) {
  if (s == "pass") return TrialStatus::kPass;
  if (s == "fail") return TrialStatus::kFail;
  if (s == "inconclusive") return TrialStatus::kInconclusive;
  throw std::invalid_argument("report: unknown trial status '" + s + "'");
}

}  // namespace

std::string report_json(const Report& r) {
  const SuiteConfig& c = r.config;
  ordered j;
  j["schema"] = r.schema;
  j["suite"] = c.suite;
  j["config"] = {{"dims", format_dims(c.dims)},
                 {"trials", c.trials},
                 {"seed", c.seed},
                 {"tol", num(c.tol)},
                 {"max_inconclusive", num(c.max_inconclusive)},
                 {"family_size", c.family_size},
                 {"fw_iters", c.fw_iters},
                 {"sdp_max_iter", c.sdp_max_iter},
                 {"monotone", c.monotone},
                 {"cat_dim", c.cat_dim},
                 {"cf_trials", c.cf_trials},
                 {"slack_tol", num(c.slack_tol)}};
  j["summary"] = {{"trials", r.trials.size()}, {"pass", r.passed},           {"fail", r.failed},
                  {"inconclusive", r.inconclusive}, {"max_violation", num(r.max_violation)}, {"status", r.status}};
  ordered trials = ordered::array();
  for (const TrialRecord& t : r.trials) {
    trials.push_back({{"index", t.index},
                      {"seed", t.seed},
                      {"digest", t.digest},
                      {"param", t.param},
                      {"x", num(t.x)},
                      {"value", num(t.value)},
                      {"lower", num(t.lower)},
                      {"upper", num(t.upper)},
                      {"slack", num(t.slack)},
                      {"status", to_string(t.status)},
                      {"detail", t.detail}});
  }
  j["trials"] = std::move(trials);
  j["volatile"] = {{"timestamp", r.timestamp}, {"wall_seconds", num(r.wall_seconds)}};
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "suite,index,seed,digest,param,x,value,lower,upper,slack,status,detail\n";
  for (const TrialRecord& t : r.trials) {
    os << csv_field(r.config.suite) << ',' << t.index << ',' << t.seed << ',' << t.digest << ',' << csv_field(t.param) << ','
       << csv_num(t.x) << ',' << csv_num(t.value) << ',' << csv_num(t.lower) << ',' << csv_num(t.upper) << ','
       << csv_num(t.slack) << ',' << to_string(t.status) << ',' << csv_field(t.detail) << '\n';
  }
  return os.str();
}

Report parse_report_json(const std::string& text) {
  Report r;
  try {
    const json j = json::parse(text);
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kReportSchema) throw std::invalid_argument("report: unsupported schema '" + r.schema + "'");
    SuiteConfig& c = r.config;
    c.suite = j.at("suite").get<std::string>();
    const json& jc = j.at("config");
    const std::string dims = jc.at("dims").get<std::string>();
    if (!dims.empty()) c.dims = parse_dims(dims);
    c.trials = jc.at("trials").get<int>();
    c.seed = jc.at("seed").get<std::uint64_t>();
    c.tol = get_num(jc.at("tol"));
    c.max_inconclusive = get_num(jc.at("max_inconclusive"));
    c.family_size = jc.at("family_size").get<int>();
    c.fw_iters = jc.at("fw_iters").get<int>();
    c.sdp_max_iter = jc.at("sdp_max_iter").get<int>();
    c.monotone = jc.at("monotone").get<std::string>();
    c.cat_dim = jc.at("cat_dim").get<int>();
    c.cf_trials = jc.at("cf_trials").get<int>();
    c.slack_tol = get_num(jc.at("slack_tol"));
    for (const json& t : j.at("trials")) {
      TrialRecord rec;
      rec.index = t.at("index").get<int>();
      rec.seed = t.at("seed").get<std::uint64_t>();
      rec.digest = t.at("digest").get<std::string>();
      rec.param = t.at("param").get<std::string>();
      rec.x = get_num(t.at("x"));
      rec.value = get_num(t.at("value"));
      rec.lower = get_num(t.at("lower"));
      rec.upper = get_num(t.at("upper"));
      rec.slack = get_num(t.at("slack"));
      rec.status = status_from(t.at("status").get<std::string>());
      rec.detail = t.at("detail").get<std::string>();
      r.trials.push_back(std::move(rec));
    }
    const json& s = j.at("summary");
    r.passed = s.at("pass").get<int>();
    r.failed = s.at("fail").get<int>();
    r.inconclusive = s.at("inconclusive").get<int>();
    r.max_violation = get_num(s.at("max_violation"));
    r.status = s.at("status").get<std::string>();
    if (s.at("trials").get<std::size_t>() != r.trials.size()) throw std::invalid_argument("report: trial count mismatch");
    if (j.contains("volatile")) {
      r.timestamp = j["volatile"].at("timestamp").get<std::string>();
      r.wall_seconds = get_num(j["volatile"].at("wall_seconds"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  } catch (const ConfigError& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace resmono
