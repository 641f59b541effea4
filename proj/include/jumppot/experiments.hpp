#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "jumppot/constants.hpp"
#include "jumppot/error.hpp"
#include "jumppot/geometry.hpp"
#include "jumppot/kernels.hpp"
#include "jumppot/montecarlo.hpp"
#include "jumppot/profiles.hpp"
#include "jumppot/reference.hpp"

namespace jumppot::cli {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- condition (F)

enum class ConditionF { holds, fails, indeterminate };

inline const char* to_string(ConditionF c) {
  switch (c) {
    case ConditionF::holds: return "holds";
    case ConditionF::fails: return "fails";
    default: return "indeterminate";
  }
}

struct ConditionFResult {
  ConditionF classification = ConditionF::indeterminate;
  std::string rule;
  // (b, min over the s-probe of Phi2(b/r) l(s/b) / (l(s) b^{p-alpha}))
  std::vector<std::pair<double, double>> witness;
};

// Classifies the liminf condition on Phi2 and l for the power-log family.
inline ConditionFResult condition_f_check(const ScalingProfile& phi2, const SlowFactor& ell,
                                          double p, double alpha, double r) {
  require(r > 0.0 && r <= 1.0, "condition_f_check: r must lie in (0,1]");
  ConditionFResult out;
  for (int j = 0; j <= 20; ++j) {
    const double b = r * std::ldexp(1.0, -j);
    double m = std::numeric_limits<double>::infinity();
    for (int k = 20; k <= 200; k += 20) {
      const double s = std::ldexp(1.0, -k);
      m = std::min(m, phi2(b / r) * ell(s / b) / ell(s));
    }
    out.witness.emplace_back(b, m / std::pow(b, p - alpha));
  }
  if (!phi2.power_log_family) {
    out.rule = "profile outside the power-log family: probe only";
    return out;
  }
  const double b2 = phi2.lower_index, b2up = phi2.upper_index;
  const double eps = 1e-12;
  if (p > alpha + b2up + eps) {
    out.classification = ConditionF::holds;
    out.rule = "p > alpha + upper index of Phi2";
  } else if (p < alpha + b2 - eps) {
    out.classification = ConditionF::fails;
    out.rule = "p < alpha + lower index of Phi2";
  } else if (ell.slowly_varying && phi2.log_power >= 0.0) {
    // Power-log profiles with a non-negative log power satisfy Phi2(r) >= r^beta2 on (0,1].
    out.classification = ConditionF::holds;
    out.rule = "p = alpha + beta2, l slowly varying, Phi2(r) >= r^beta2";
  } else {
    out.rule = "p = alpha + beta2 without a slowly varying l";
  }
  return out;
}

// ---------------------------------------------------------------- profile records

namespace detail {
inline void check_record_keys(const nlohmann::ordered_json& rec, std::initializer_list<const char*> allowed,
                              const char* what) {
  if (!rec.is_object()) throw config_error(std::string(what) + " record must be an object");
  for (auto it = rec.begin(); it != rec.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw config_error("unknown key '" + it.key() + "' in " + what + " record");
  }
}
inline double record_number(const nlohmann::ordered_json& rec, const char* key, double fallback) {
  if (!rec.contains(key)) return fallback;
  if (!rec[key].is_number()) throw config_error(std::string("'") + key + "' must be a number");
  return rec[key].get<double>();
}
}  // namespace detail

// {family: "power_log", beta, log_power} | {family: "preset_gamma_beta", gamma,
// beta, component: "phi1" | "phi2"} | {family: "constant"}
inline ScalingProfile profile_from_record(const nlohmann::ordered_json& rec) {
  detail::check_record_keys(rec, {"family", "beta", "log_power", "gamma", "component"}, "profile");
  const auto family = rec.value("family", std::string());
  if (family == "power_log")
    return make_power_log_profile(detail::record_number(rec, "beta", 0.0),
                                  detail::record_number(rec, "log_power", 0.0));
  if (family == "constant") return make_constant_profile();
  if (family == "preset_gamma_beta") {
    const auto pre = preset_gamma_beta(detail::record_number(rec, "gamma", 2.0),
                                       detail::record_number(rec, "beta", 0.5));
    const auto comp = rec.value("component", std::string("phi1"));
    if (comp == "phi1") return pre.triple.phi1;
    if (comp == "phi2") return pre.triple.phi2;
    throw config_error("profile component must be phi1 or phi2");
  }
  throw config_error("unknown profile family '" + family + "'");
}

// {family: "one"} | {family: "log_e", beta1_cap, beta2_cap} | {family: "log", k, beta1_cap, beta2_cap}
inline SlowFactor slow_factor_from_record(const nlohmann::ordered_json& rec) {
  detail::check_record_keys(rec, {"family", "k", "beta1_cap", "beta2_cap"}, "slow factor");
  const auto family = rec.value("family", std::string());
  const double c1 = detail::record_number(rec, "beta1_cap", 1.0);
  const double c2 = detail::record_number(rec, "beta2_cap", 1.0);
  if (family == "one") return make_trivial_slow_factor();
  if (family == "log_e") return make_log_e_slow_factor(c1, c2);
  if (family == "log") return make_log_slow_factor(detail::record_number(rec, "k", 1.0), c1, c2);
  throw config_error("unknown slow factor family '" + family + "'");
}

// ---------------------------------------------------------------- reports

struct Assertion {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ReportBundle {
  std::string experiment;
  std::string status = "ok";  // or "unsupported"
  json config;
  std::vector<std::string> csv_header;
  std::vector<std::vector<json>> rows;
  std::vector<Assertion> assertions;
  json summary = json::object();
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;

  bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
  void add(std::string name, double measured, double expected, double tolerance, bool pass) {
    assertions.push_back({std::move(name), measured, expected, tolerance, pass});
  }
};

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_cell(const json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline std::string config_hash(const json& config) {
  return fnv1a_hex(nlohmann::json(config).dump());
}

inline json summary_json(const ReportBundle& b) {
  json j;
  j["experiment"] = b.experiment;
  j["status"] = b.status;
  j["config_hash"] = config_hash(b.config);
  j["config"] = b.config;
  j["assertions"] = json::array();
  for (const auto& a : b.assertions)
    j["assertions"].push_back({{"name", a.name},
                               {"measured", number_or_null(a.measured)},
                               {"expected", number_or_null(a.expected)},
                               {"tolerance", number_or_null(a.tolerance)},
                               {"pass", a.pass}});
  j["summary"] = b.summary;
  j["wall_time_ms"] = b.wall_time_ms;
  j["seed"] = b.seed;
  j["row_count"] = b.rows.size();
  j["all_pass"] = b.all_pass();
  return j;
}

inline std::filesystem::path output_stem(const std::string& output_path) {
  std::filesystem::path p(output_path);
  const auto ext = p.extension().string();
  if (ext == ".json" || ext == ".csv") p.replace_extension();
  return p;
}

// Writes <stem>.csv and <stem>.json.
inline void emit_report(const ReportBundle& b, const std::string& output_path) {
  const auto stem = output_stem(output_path);
  if (stem.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(stem.parent_path(), ec);
    if (ec) throw io_error("emit_report: cannot create " + stem.parent_path().string());
  }
  const auto csv_path = stem.string() + ".csv";
  const auto json_path = stem.string() + ".json";
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw io_error("emit_report: cannot write " + csv_path);
    for (std::size_t i = 0; i < b.csv_header.size(); ++i)
      out << (i ? "," : "") << b.csv_header[i];
    out << "\n";
    for (const auto& row : b.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << "\n";
    }
    if (!out) throw io_error("emit_report: write failed for " + csv_path);
  }
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw io_error("emit_report: cannot write " + json_path);
    out << summary_json(b).dump(2) << "\n";
    if (!out) throw io_error("emit_report: write failed for " + json_path);
  }
}

// ---------------------------------------------------------------- configuration

struct ExperimentConfig {
  std::string experiment;
  json parameters = json::object();  // resolved: defaults merged in
  std::uint64_t seed = 0;
  std::string output_path;

  json to_json() const {
    return {{"experiment", experiment}, {"parameters", parameters}, {"seed", seed},
            {"output_path", output_path}};
  }
};

struct ExperimentDef {
  std::string name;
  std::string description;
  json defaults;
  // Returns a non-empty reason when the parameter combination has no oracle.
  std::function<std::string(const json&)> unsupported;
  std::function<void(const ExperimentConfig&, ReportBundle&)> run;
};

const std::vector<ExperimentDef>& experiments();

inline const ExperimentDef& find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  throw config_error("unknown experiment '" + name + "'");
}

namespace detail {

inline bool same_kind(const json& def, const json& v) {
  if (def.is_null()) return true;
  if (def.is_number()) return v.is_number();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  return false;
}

inline double num(const json& p, const char* key) {
  const auto& v = p.at(key);
  if (!v.is_number()) throw config_error(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> nums(const json& p, const char* key) {
  std::vector<double> out;
  for (const auto& v : p.at(key)) {
    if (!v.is_number()) throw config_error(std::string("parameter '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline int integer(const json& p, const char* key) {
  const double v = num(p, key);
  if (v != std::floor(v)) throw config_error(std::string("parameter '") + key + "' must be an integer");
  return static_cast<int>(v);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "experiment" && k != "parameters" && k != "seed" && k != "output_path")
      throw config_error("unknown config key '" + k + "'");
  }
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw config_error("config needs a string 'experiment'");
  if (!j.contains("output_path") || !j["output_path"].is_string() ||
      j["output_path"].get<std::string>().empty())
    throw config_error("config needs a non-empty string 'output_path'");
  ExperimentConfig cfg;
  cfg.experiment = j["experiment"].get<std::string>();
  cfg.output_path = j["output_path"].get<std::string>();
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (s.is_number_unsigned())
      cfg.seed = s.get<std::uint64_t>();
    else if (s.is_number_integer() && s.get<long long>() >= 0)
      cfg.seed = static_cast<std::uint64_t>(s.get<long long>());
    else
      throw config_error("'seed' must be a non-negative integer");
  }
  const auto& def = find_experiment(cfg.experiment);
  json params = def.defaults;
  if (j.contains("parameters")) {
    const auto& p = j["parameters"];
    if (!p.is_object()) throw config_error("'parameters' must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (!params.contains(it.key()))
        throw config_error("unknown parameter '" + it.key() + "' for experiment " + cfg.experiment);
      if (!detail::same_kind(params[it.key()], it.value()))
        throw config_error("parameter '" + it.key() + "' has the wrong type");
      params[it.key()] = it.value();
    }
  }
  cfg.parameters = params;
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

// Empty string when the configuration can run; otherwise the reason.
inline std::string unsupported_reason(const ExperimentConfig& cfg) {
  const auto& def = find_experiment(cfg.experiment);
  return def.unsupported ? def.unsupported(cfg.parameters) : std::string();
}

inline ReportBundle run_experiment(const ExperimentConfig& cfg) {
  const auto& def = find_experiment(cfg.experiment);
  ReportBundle b;
  b.experiment = cfg.experiment;
  b.config = cfg.to_json();
  b.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  if (const auto why = unsupported_reason(cfg); !why.empty()) {
    b.status = "unsupported";
    b.summary["reason"] = why;
    return b;
  }
  def.run(cfg, b);
  const bool timing = cfg.parameters.value("record_timing", false);
  b.wall_time_ms = timing ? detail::elapsed_ms(t0) : 0.0;
  return b;
}

// ---------------------------------------------------------------- experiments

namespace detail {

inline Point unit_vertical(int d) {
  Point e = Point::Zero(d);
  e(d - 1) = 1.0;
  return e;
}

inline BoundaryProfileF profile_from(const json& p, int d, double alpha) {
  const auto kind = p.at("profile").get<std::string>();
  if (kind == "skbm") {
    const double pb = p.at("profile_beta").is_null() ? alpha / 2.0 : num(p, "profile_beta");
    return skbm_profile_F(d, pb);
  }
  if (kind == "constant") return constant_profile_F(1.0);
  throw config_error("unknown profile '" + kind + "' (expected skbm or constant)");
}

inline double profile_beta0(const json& p) {
  if (!p.at("beta0").is_null()) return num(p, "beta0");
  return p.at("profile").get<std::string>() == "skbm" ? 1.0 : 0.0;
}

inline std::string check_half_space_d(const json& p) {
  const int d = integer(p, "d");
  if (d < 2 || d > 4) return "half-space oracles support d in {2,3,4}";
  return {};
}

inline std::string check_d2(const json& p, const char* what) {
  if (integer(p, "d") != 2) return std::string(what) + " is implemented for d = 2 only";
  return {};
}

inline std::string check_gamma2(const json& p) {
  if (num(p, "gamma") != 2.0)
    return "deterministic oracles and the simulator exist for gamma = 2 only";
  return {};
}

// 4^b Gamma(b+1/2) / (sqrt(pi) Gamma(1-b)): closed form of the half-space
// killing density at x_d = 1.
inline double kappa_constant_closed_form(double beta) {
  return std::pow(4.0, beta) * tgamma(beta + 0.5) / (std::sqrt(pi) * tgamma(1.0 - beta));
}

inline void run_constants_table(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const int d = integer(p, "d");
  const double alpha = num(p, "alpha");
  const auto F = profile_from(p, d, alpha);
  KillingConstantOptions opt;
  opt.d = d;
  opt.beta0 = profile_beta0(p);
  opt.tol = num(p, "tol");
  const double lo = std::max(alpha - 1.0, 0.0);
  const double top = alpha + opt.beta0;
  std::vector<double> q = nums(p, "q_values");
  if (q.empty()) {
    const int n = integer(p, "q_count");
    if (n < 2) throw config_error("q_count must be at least 2");
    const double hi = top - num(p, "upper_margin");
    const double start = p.at("include_left_endpoint").get<bool>() ? lo : lo + (hi - lo) / n;
    for (int i = 0; i < n; ++i) q.push_back(start + (hi - start) * i / (n - 1));
  }
  const bool timing = p.at("record_timing").get<bool>();
  std::vector<double> ms(q.size(), 0.0);
  std::sort(q.begin(), q.end());
  const auto Fs = symmetrize_F0(F);
  KillingConstantTable t;
  t.alpha = alpha;
  t.beta0 = opt.beta0;
  t.F = Fs;
  t.entries.resize(q.size());
  parallel_for(q.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = killing_constant(alpha, q[i], Fs, opt);
    t.entries[i] = {q[i], r.value, r.error};
    ms[i] = timing ? elapsed_ms(t0) : 0.0;
  });
  b.csv_header = {"alpha", "q", "C_value", "err_est", "wall_time_ms"};
  for (std::size_t i = 0; i < q.size(); ++i)
    b.rows.push_back({alpha, t.entries[i].q, t.entries[i].value, t.entries[i].error, ms[i]});
  b.add("strictly_increasing", t.strictly_increasing() ? 1.0 : 0.0, 1.0, 0.0, t.strictly_increasing());
  double min_c = 0.0;
  for (const auto& e : t.entries) min_c = std::min(min_c, e.value);
  b.add("non_negative", min_c, 0.0, 0.0, min_c >= 0.0);
  if (!t.entries.empty() && std::abs(t.entries.front().q - lo) < 1e-15) {
    const double c0 = t.entries.front().value;
    b.add("zero_at_left_endpoint", c0, 0.0, 1e-9, std::abs(c0) < 1e-9);
  }
  b.summary["profile"] = Fs.name;
  b.summary["beta0"] = opt.beta0;
}

inline void run_solve_p(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const int d = integer(p, "d");
  const double gamma = num(p, "gamma"), beta = num(p, "beta");
  const double alpha = gamma * beta;
  const SkbmOracle o(beta, HeatKernelOracle::half_space(d));
  const double c1 = skbm_kappa(o, unit_vertical(d));
  const double cda = c_d_minus_alpha(d, alpha);
  const double C9 = p.at("C9").is_null() ? c1 / cda : num(p, "C9");
  KillingConstantOptions opt;
  opt.d = d;
  opt.beta0 = 1.0;
  opt.tol = num(p, "quad_tol");
  const auto F = skbm_profile_F(d, beta);
  const auto res = solve_p(alpha, C9, F, opt, num(p, "tol"));
  b.csv_header = {"d", "alpha", "beta", "c1", "C9", "p", "C_at_p", "iterations"};
  b.rows.push_back({d, alpha, beta, c1, C9, res.p, res.C_at_p, res.iterations});
  const double c1_exact = kappa_constant_closed_form(beta);
  b.add("c1_matches_closed_form", c1, c1_exact, 1e-6, std::abs(c1 - c1_exact) <= 1e-6);
  if (p.at("C9").is_null()) {
    const double C9_exact = c1_exact / cda;
    b.add("C9_matches_closed_form", C9, C9_exact, 1e-4, std::abs(C9 - C9_exact) <= 1e-4);
    const double tolp = num(p, "p_tolerance");
    b.add("p_equals_gamma_over_2", res.p, gamma / 2.0, tolp, std::abs(res.p - gamma / 2.0) <= tolp);
  }
  const double rt = num(p, "tol") * std::max(C9, 1.0);
  b.add("round_trip", res.C_at_p, C9, rt, std::abs(res.C_at_p - C9) <= rt);
}

inline void run_pv_identity(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const int d = integer(p, "d");
  const double alpha = num(p, "alpha"), q = num(p, "q"), xd = num(p, "x_d");
  const auto F = profile_from(p, d, alpha);
  KillingConstantOptions opt;
  opt.d = d;
  opt.beta0 = profile_beta0(p);
  opt.tol = 1e-11;
  const double C = killing_constant(alpha, q, F, opt).value;
  auto deltas = nums(p, "deltas");
  std::sort(deltas.rbegin(), deltas.rend());
  const double floor = num(p, "noise_floor"), factor = num(p, "bound_factor");
  const auto checks = nums(p, "check_deltas");
  std::vector<double> err(deltas.size()), val(deltas.size());
  parallel_for(deltas.size(), [&](std::size_t i) {
    val[i] = pv_generator_halfspace(alpha, F, q, xd, deltas[i], d).value * std::pow(xd, alpha - q);
    err[i] = std::abs(val[i] - C);
  });
  b.csv_header = {"delta", "pv_scaled", "C_value", "abs_diff"};
  for (std::size_t i = 0; i < deltas.size(); ++i) b.rows.push_back({deltas[i], val[i], C, err[i]});
  for (double dc : checks) {
    const auto it = std::find(deltas.begin(), deltas.end(), dc);
    if (it == deltas.end()) throw config_error("check_deltas must be a subset of deltas");
    const double e = err[it - deltas.begin()];
    const double bound = factor * std::pow(dc / xd, 2.0 - alpha);
    b.add("bound_at_delta_" + short_number(dc), e, 0.0, bound, e <= bound);
  }
  bool mono = true;
  std::vector<SlopePoint> fit;
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (err[i - 1] > floor && !(err[i] < err[i - 1])) mono = false;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (err[i] > floor) fit.push_back({deltas[i], err[i], 1.0});
  b.add("monotone_convergence", mono ? 1.0 : 0.0, 1.0, floor, mono);
  b.summary["C_value"] = C;
  if (fit.size() >= 3) b.summary["fitted_rate"] = power_slope_fit(fit).slope;
}

inline void run_barrier_check(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const double beta = num(p, "beta"), alpha = 2.0 * beta, q = num(p, "q"), r = num(p, "r");
  HalfSpaceFKernel k;
  k.alpha = alpha;
  k.c = c_d_minus_alpha(2, alpha);
  k.F = skbm_profile_F(2, beta);
  k.beta0 = 1.0;
  auto ratios = nums(p, "ratios");
  std::sort(ratios.rbegin(), ratios.rend());
  std::vector<BarrierResult> res(ratios.size());
  parallel_for(ratios.size(), [&](std::size_t i) {
    res[i] = barrier_ratio(k, q, r, make_point({0.0, ratios[i] * r}));
  });
  b.csv_header = {"delta_over_r", "ratio", "limit", "tail", "abs_gap"};
  std::vector<double> gaps;
  std::vector<SlopePoint> fit;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double gap = std::abs(res[i].ratio - res[i].limit);
    gaps.push_back(gap);
    if (gap > 0.0) fit.push_back({ratios[i], gap, 1.0});
    b.rows.push_back({ratios[i], res[i].ratio, res[i].limit, res[i].tail, gap});
  }
  const double tol = num(p, "rel_tolerance");
  const double rel = gaps.back() / res.back().limit;
  b.add("within_tolerance_at_smallest_ratio", rel, 0.0, tol, rel <= tol);
  b.add("monotone_approach", strictly_decreasing(gaps) ? 1.0 : 0.0, 1.0, 0.0,
        strictly_decreasing(gaps));
  b.summary["limit"] = res.back().limit;
  if (fit.size() >= 3) b.summary["fitted_rate"] = power_slope_fit(fit).slope;
}

inline std::shared_ptr<const DiskEigenData> disk_eigen(double R) {
  return std::make_shared<DiskEigenData>(DiskEigenData::compute(R));
}

inline void run_green_envelope(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const double R = num(p, "R"), beta = num(p, "beta");
  const double alpha = 2.0 * beta;
  const double pexp = p.at("p").is_null() ? 1.0 : num(p, "p");
  const SkbmOracle o(beta, HeatKernelOracle::disk(R, disk_eigen(R)));
  const auto pre = preset_gamma_beta(2.0, beta);
  const auto& D = o.heat.domain;
  const int n = integer(p, "n_pairs");
  const double dmin = num(p, "delta_min"), sep = num(p, "min_separation");
  std::vector<Point> xs(2 * n), ys(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    auto draw = [&] {
      const double delta = R * std::exp(rng.uniform() * std::log(dmin));
      const double th = 2.0 * pi * rng.uniform();
      return Point(make_point({(R - delta) * std::cos(th), (R - delta) * std::sin(th)}));
    };
    do {
      xs[i] = draw();
      ys[i] = draw();
    } while ((xs[i] - ys[i]).norm() < sep);
  }
  std::vector<double> g(2 * n), env(2 * n);
  parallel_for(2 * n, [&](std::size_t i) {
    g[i] = skbm_green(o, xs[i], ys[i]);
    env[i] = green_envelope(xs[i], ys[i], pexp, alpha, pre.triple.phi1, pre.triple.phi2, D);
  });
  b.csv_header = {"x1", "x2", "y1", "y2", "delta_x", "delta_y", "green", "envelope", "ratio"};
  double lo1 = INFINITY, hi1 = 0, lo2 = INFINITY, hi2 = 0;
  for (int i = 0; i < 2 * n; ++i) {
    const double r = g[i] / env[i];
    if (i < n) lo1 = std::min(lo1, r), hi1 = std::max(hi1, r);
    lo2 = std::min(lo2, r), hi2 = std::max(hi2, r);
    b.rows.push_back({xs[i](0), xs[i](1), ys[i](0), ys[i](1), dist_to_boundary(D, xs[i]),
                      dist_to_boundary(D, ys[i]), g[i], env[i], r});
  }
  const double limit = num(p, "band_limit"), stab = num(p, "stability");
  b.add("band_width", hi2 / lo2, 0.0, limit, hi2 / lo2 < limit);
  const double mlo = std::abs(lo2 / lo1 - 1.0), mhi = std::abs(hi2 / hi1 - 1.0);
  b.add("lower_endpoint_stable", mlo, 0.0, stab, mlo < stab);
  b.add("upper_endpoint_stable", mhi, 0.0, stab, mhi < stab);
  // Boundary decay of x -> G(x, y0) along the inward normal at (R, 0).
  const auto y0v = nums(p, "decay_point");
  const Point y0 = make_point({y0v.at(0), y0v.at(1)});
  std::vector<SlopePoint> fit;
  for (double dl : nums(p, "decay_deltas"))
    fit.push_back({dl, skbm_green(o, make_point({R - dl, 0.0}), y0), 1.0});
  const auto sf = power_slope_fit(fit);
  const double st = num(p, "slope_tolerance");
  b.add("boundary_decay_slope", sf.slope, pexp, st, std::abs(sf.slope - pexp) <= st);
  b.summary["band"] = {lo2, hi2};
  b.summary["band_half_sample"] = {lo1, hi1};
}

inline void run_green_closed_form(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const int d = integer(p, "d");
  const double beta = num(p, "beta"), alpha = 2.0 * beta;
  const SkbmOracle o(beta, HeatKernelOracle::half_space(d));
  const int n = integer(p, "n_pairs");
  std::vector<Point> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    auto draw = [&] {
      Point x(d);
      for (int k = 0; k + 1 < d; ++k) x(k) = 4.0 * rng.uniform() - 2.0;
      x(d - 1) = std::exp(std::log(0.02) + rng.uniform() * std::log(150.0));
      return x;
    };
    do {
      xs[i] = draw();
      ys[i] = draw();
    } while ((xs[i] - ys[i]).norm() < 0.01);
  }
  std::vector<double> gc(n), gq(n), jc(n), jq(n);
  parallel_for(n, [&](std::size_t i) {
    gc[i] = skbm_green(o, xs[i], ys[i]);
    gq[i] = skbm_green_quadrature(o, xs[i], ys[i], 1e-10);
    jc[i] = skbm_jump_kernel(o, xs[i], ys[i]);
    jq[i] = skbm_jump_kernel_quadrature(o, xs[i], ys[i], 1e-10);
  });
  b.csv_header = {"pair", "dist", "green_closed", "green_quadrature", "jump_closed",
                  "jump_quadrature"};
  double wg = 0, wj = 0;
  for (int i = 0; i < n; ++i) {
    wg = std::max(wg, std::abs(gc[i] - gq[i]) / gc[i]);
    wj = std::max(wj, std::abs(jc[i] - jq[i]) / jc[i]);
    b.rows.push_back({i, (xs[i] - ys[i]).norm(), gc[i], gq[i], jc[i], jq[i]});
  }
  const double tol = num(p, "rel_tolerance");
  b.add("green_closed_vs_quadrature", wg, 0.0, tol, wg <= tol);
  b.add("jump_closed_vs_quadrature", wj, 0.0, tol, wj <= tol);
  Point x = unit_vertical(d), y = 2.0 * unit_vertical(d);
  const double g = skbm_green(o, x, y);
  const double expect = halfspace_green_constant(d, beta) * (1.0 - std::pow(3.0, alpha - d));
  b.add("green_at_unit_pair", g, expect, 1e-8, std::abs(g - expect) <= 1e-8);
}

inline ExitOptions exit_options(const json& p, std::uint64_t seed) {
  ExitOptions o;
  o.dt = num(p, "dt");
  o.horizon = num(p, "horizon");
  o.substeps = integer(p, "substeps");
  o.seed = seed;
  return o;
}

inline void run_exit_slope(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const int d = integer(p, "d");
  const double beta = num(p, "beta"), box = num(p, "box");
  const auto D = make_half_space(d);
  const auto fr = nums(p, "delta_fractions");
  const auto n = static_cast<std::size_t>(num(p, "n_paths"));
  const auto hash = config_hash(b.config);
  b.csv_header = {"experiment", "params_hash", "delta", "n_paths", "dt", "estimate", "std_err",
                  "p_half", "p_quarter", "order", "extrapolated", "extrapolated_se",
                  "wall_time_ms"};
  std::vector<SlopePoint> fit;
  const bool timing = p.at("record_timing").get<bool>();
  for (std::size_t i = 0; i < fr.size(); ++i) {
    const double delta = fr[i] * box;
    Point x0 = Point::Zero(d);
    x0(d - 1) = delta;
    auto opt = exit_options(p, cfg.seed);
    opt.stream_offset = i * n;
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = exit_probability_estimate(D, beta, x0, halfspace_box(box, box),
                                             TargetSpec::anywhere(), n, opt);
    const double ms = timing ? elapsed_ms(t0) : 0.0;
    b.rows.push_back({b.experiment, hash, delta, n, opt.dt, e.probability, e.standard_error,
                      e.p_half, e.p_quarter, e.order, e.extrapolated, e.extrapolated_se, ms});
    const double bias = std::abs(e.extrapolated - e.probability);
    b.add("grid_bias_below_se_at_" + short_number(fr[i]), bias, 0.0, e.standard_error,
          bias < e.standard_error);
    if (e.probability <= 0.0) throw domain_error("exit-slope: no exits observed; raise n_paths");
    const double w = std::pow(e.probability / e.standard_error, 2);
    fit.push_back({delta, e.probability, w});
  }
  const auto sf = power_slope_fit(fit);
  const double expect = p.at("slope_expected").is_null() ? num(p, "gamma") / 2.0
                                                          : num(p, "slope_expected");
  const double tol = num(p, "slope_tolerance");
  b.add("slope", sf.slope, expect, tol, std::abs(sf.slope - expect) <= tol);
  b.summary["slope"] = sf.slope;
  b.summary["slope_confidence_halfwidth"] = sf.confidence_halfwidth;
}

inline void run_trichotomy(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const double beta = num(p, "beta"), alpha = 2.0 * beta, R = num(p, "R");
  const double pe = 1.0;  // decay exponent of the gamma = 2 family
  const SkbmOracle o(beta, HeatKernelOracle::half_space(2));
  auto deltas = nums(p, "deltas");
  std::sort(deltas.begin(), deltas.end());
  const auto gps = nums(p, "gamma_primes");
  std::vector<double> I(deltas.size() * gps.size());
  parallel_for(I.size(), [&](std::size_t k) {
    I[k] = halfspace_green_potential(o, deltas[k % deltas.size()], R, gps[k / deltas.size()]).value;
  });
  b.csv_header = {"gamma_prime", "regime", "delta", "integral"};
  const double st = num(p, "slope_tolerance"), lt = num(p, "log_tolerance");
  for (std::size_t g = 0; g < gps.size(); ++g) {
    const double gp = gps[g];
    const double crit = pe - alpha;
    const std::string regime = std::abs(gp - crit) < 1e-12 ? "log" : (gp > crit ? "power_p" : "power_alpha");
    std::vector<SlopePoint> fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const double v = I[g * deltas.size() + i];
      b.rows.push_back({gp, regime, deltas[i], v});
      fit.push_back({deltas[i], v, 1.0});
      const double lx = std::log(1.0 / deltas[i]), ly = v / std::pow(deltas[i], pe);
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double m = static_cast<double>(deltas.size());
    const std::string tag = "gamma_prime_" + short_number(gp);
    if (regime == "log") {
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      // Leading coefficient 2 A' (2-alpha) int_0^pi sin^{2-alpha}.
      const double k = 2.0 - alpha;
      const double ang = std::sqrt(pi) * tgamma((k + 1.0) / 2.0) / tgamma(k / 2.0 + 1.0);
      const double expect = 2.0 * halfspace_green_constant(2, beta) * (2.0 - alpha) * ang;
      b.add(tag + "_log_coefficient", slope, expect, lt * expect,
            std::abs(slope - expect) <= lt * expect);
    } else {
      const double expect = regime == "power_p" ? pe : alpha + gp;
      const double s = power_slope_fit(fit).slope;
      b.add(tag + "_slope", s, expect, st, std::abs(s - expect) <= st);
    }
  }
}

inline void run_bhp_ratio(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const double beta = num(p, "beta"), box = num(p, "box");
  const double pe = 1.0, alpha = 2.0 * beta;
  const auto pre = preset_gamma_beta(2.0, beta);
  if (!(pe < alpha + std::min(pre.triple.beta1, pre.triple.beta2)))
    throw config_error("bhp-ratio needs p < alpha + min(beta1, beta2)");
  const auto D = make_half_space(2);
  const auto xi = nums(p, "xi_fractions");
  const double delta0 = num(p, "delta_fraction") * box;
  const auto n = static_cast<std::size_t>(num(p, "n_paths"));
  const auto left = TargetSpec::in([box](const Point& y) { return y(0) <= -box; });
  const auto right = TargetSpec::in([box](const Point& y) { return y(0) >= box; });
  b.csv_header = {"delta", "xi", "f", "f_se", "g", "g_se", "f_over_g"};
  struct Level {
    double log_spread = 0.0, se = 0.0;
  };
  std::vector<Level> levels;
  std::uint64_t offset = 0;
  for (double delta : {delta0, delta0 / 2.0}) {
    std::vector<double> lr, var;
    for (double x1 : xi) {
      auto opt = exit_options(p, cfg.seed);
      opt.stream_offset = offset;
      offset += n;
      const Point x0 = make_point({x1 * box, delta});
      const auto f = exit_probability_estimate(D, beta, x0, halfspace_box(box, box), left, n, opt);
      const auto g = exit_probability_estimate(D, beta, x0, halfspace_box(box, box), right, n, opt);
      if (f.probability <= 0.0 || g.probability <= 0.0)
        throw domain_error("bhp-ratio: a target was never hit; raise n_paths");
      b.rows.push_back({delta, x1, f.probability, f.standard_error, g.probability,
                        g.standard_error, f.probability / g.probability});
      lr.push_back(std::log(f.probability / g.probability));
      var.push_back(std::pow(f.standard_error / f.probability, 2) +
                    std::pow(g.standard_error / g.probability, 2));
    }
    const auto imax = std::max_element(lr.begin(), lr.end()) - lr.begin();
    const auto imin = std::min_element(lr.begin(), lr.end()) - lr.begin();
    levels.push_back({lr[imax] - lr[imin], std::sqrt(var[imax] + var[imin])});
  }
  const double diff = std::abs(levels[0].log_spread - levels[1].log_spread);
  const double se = std::hypot(levels[0].se, levels[1].se);
  const double band = num(p, "se_band");
  b.add("log_spread_stable_under_halving", diff, 0.0, band * se, diff <= band * se);
  b.summary["spread"] = {std::exp(levels[0].log_spread), std::exp(levels[1].log_spread)};
}

inline void run_condition_f(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const double alpha = num(p, "alpha"), r = num(p, "r");
  b.csv_header = {"case", "phi2", "ell", "p", "classification", "expected", "rule",
                  "witness_min"};
  int idx = 0;
  for (const auto& c : p.at("cases")) {
    check_record_keys(c, {"phi2", "ell", "p_minus_alpha", "expected"}, "condition-f case");
    if (!c.contains("phi2") || !c.contains("p_minus_alpha"))
      throw config_error("condition-f case needs phi2 and p_minus_alpha");
    const auto phi2 = profile_from_record(c["phi2"]);
    const auto ell = c.contains("ell") ? slow_factor_from_record(c["ell"]) : make_trivial_slow_factor();
    const double pp = alpha + record_number(c, "p_minus_alpha", 0.0);
    const auto res = condition_f_check(phi2, ell, pp, alpha, r);
    double wmin = std::numeric_limits<double>::infinity();
    for (const auto& w : res.witness) wmin = std::min(wmin, w.second);
    const std::string got = to_string(res.classification);
    const std::string want = c.value("expected", std::string());
    b.rows.push_back({idx, phi2.name, ell.name, pp, got, want, res.rule, wmin});
    if (!want.empty())
      b.add("case_" + std::to_string(idx) + "_" + want, got == want ? 1.0 : 0.0, 1.0, 0.0,
            got == want);
    ++idx;
  }
}

inline void run_upsilon_regimes(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  b.csv_header = {"case", "regime", "t", "upsilon", "closed_form", "ratio"};
  // Scaling validation of every preset triple.
  bool scaling_ok = true;
  int checked = 0;
  for (const auto& pr : p.at("presets")) {
    const auto t = preset_gamma_beta(pr.at(0).get<double>(), pr.at(1).get<double>()).triple;
    for (const auto& prof : {t.phi1, t.phi2}) {
      scaling_ok = scaling_ok && validate_scaling(prof).pass;
      ++checked;
    }
    if (t.beta1 > 0.0)
      for (double e : {0.1, 0.05}) {
        scaling_ok = scaling_ok && validate_scaling(t.phi0(e)).pass;
        ++checked;
      }
  }
  b.add("presets_pass_scaling_validation", scaling_ok ? 1.0 : 0.0, 1.0, 0.0, scaling_ok);
  b.summary["profiles_validated"] = checked;
  const int nt = integer(p, "n_t");
  const double tmin = num(p, "t_min");
  const double band_limit = num(p, "band_limit"), settle = num(p, "settle_tolerance");
  int idx = 0;
  for (const auto& c : p.at("cases")) {
    check_record_keys(c, {"alpha", "p", "phi1", "phi2", "expected"}, "upsilon case");
    const double alpha = record_number(c, "alpha", 1.0), pp = record_number(c, "p", 1.0);
    const auto phi1 = profile_from_record(c.at("phi1")), phi2 = profile_from_record(c.at("phi2"));
    const auto regime = upsilon_regime(alpha, pp, phi1.lower_index, phi2.lower_index,
                                       phi1.upper_index, phi2.upper_index);
    const std::string want = c.value("expected", std::string());
    const std::string tag = "case_" + std::to_string(idx);
    b.add(tag + "_regime_" + want, to_string(regime) == want ? 1.0 : 0.0, 1.0, 0.0,
          to_string(regime) == want);
    if (regime != UpsilonRegime::intermediate) {
      std::vector<double> ratio(nt);
      for (int i = 0; i < nt; ++i) {
        const double t = std::exp(std::log(tmin) * (1.0 - double(i) / (nt - 1)));
        const double u = upsilon(t, alpha, pp, phi1, phi2);
        const double cf = regime == UpsilonRegime::constant
                              ? upsilon_closed_form_constant()
                              : upsilon_closed_form_power(t, alpha, pp, phi1, phi2);
        ratio[i] = u / cf;
        b.rows.push_back({idx, to_string(regime), t, u, cf, ratio[i]});
      }
      const auto [mn, mx] = std::minmax_element(ratio.begin(), ratio.end());
      b.add(tag + "_band", *mx / *mn, 0.0, band_limit, *mx / *mn < band_limit);
      // The ratio settles as t -> 0: spread over the smallest decade.
      const int last = std::max(2, nt / static_cast<int>(std::ceil(-std::log10(tmin))));
      double lo = INFINITY, hi = 0;
      for (int i = 0; i < last; ++i) lo = std::min(lo, ratio[i]), hi = std::max(hi, ratio[i]);
      b.add(tag + "_settles", hi / lo - 1.0, 0.0, settle, hi / lo - 1.0 < settle);
    }
    // t >= 1: integral of u^{2a-2p-1} over [1,2], independently by quadrature.
    const double k = 2.0 * alpha - 2.0 * pp - 1.0;
    const double exact =
        quad::tanh_sinh([k](double u) { return std::pow(u, k); }, 1.0, 2.0, 1e-14).value;
    double worst = 0.0;
    for (double t : {1.0, 1.5, 3.0, 1e3}) worst = std::max(worst, std::abs(upsilon(t, alpha, pp, phi1, phi2) - exact));
    b.add(tag + "_exact_for_t_ge_1", worst, 0.0, 1e-10, worst <= 1e-10);
    ++idx;
  }
}

inline void run_b5_decay(const ExperimentConfig& cfg, ReportBundle& b) {
  const auto& p = cfg.parameters;
  const double R = num(p, "R"), beta = num(p, "beta"), nu = num(p, "nu");
  const double alpha = 2.0 * beta;
  const SkbmOracle o(beta, HeatKernelOracle::disk(R, disk_eigen(R)));
  const auto& D = o.heat.domain;
  const double ang = num(p, "boundary_angle");
  const auto frame = frame_at(D, make_point({R * std::cos(ang), R * std::sin(ang)}));
  const auto F0 = skbm_profile_F(2, beta);
  const double diag = c_d_minus_alpha(2, alpha);
  const auto xl = nums(p, "x_local"), yl = nums(p, "y_local");
  auto scales = nums(p, "scales");
  std::sort(scales.rbegin(), scales.rend());
  std::vector<double> res(scales.size());
  auto J = [&](const Point& x, const Point& y) { return skbm_jump_kernel(o, x, y); };
  parallel_for(scales.size(), [&](std::size_t i) {
    const double s = scales[i];
    const Point x = frame.to_global(make_point({s * xl.at(0), s * xl.at(1)}));
    const Point y = frame.to_global(make_point({s * yl.at(0), s * yl.at(1)}));
    res[i] = b5_residual(J, diag, F0, alpha, D, frame, x, y, nu);
  });
  b.csv_header = {"scale", "residual"};
  std::vector<SlopePoint> fit;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    b.rows.push_back({scales[i], res[i]});
    if (res[i] > 0.0) fit.push_back({scales[i], res[i], 1.0});
  }
  b.add("strictly_decreasing", strictly_decreasing(res) ? 1.0 : 0.0, 1.0, 0.0,
        strictly_decreasing(res));
  const double slope = fit.size() >= 3 ? power_slope_fit(fit).slope : NAN;
  b.add("positive_log_log_slope", slope, 0.0, 0.0, slope > 0.0);
  b.summary["fitted_exponent"] = number_or_null(slope);
}

}  // namespace detail

inline const std::vector<ExperimentDef>& experiments() {
  using namespace detail;
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> v;
    v.push_back({"constants-table", "killing constant C(alpha,q,F) over a q-grid",
                 {{"d", 2}, {"alpha", 1.0}, {"profile", "skbm"}, {"profile_beta", nullptr},
                  {"beta0", nullptr}, {"q_values", json::array()}, {"q_count", 12},
                  {"include_left_endpoint", true}, {"upper_margin", 0.05}, {"tol", 1e-10},
                  {"record_timing", false}},
                 [](const json& p) { return integer(p, "d") < 2 ? std::string("d must be >= 2") : std::string(); },
                 run_constants_table});
    v.push_back({"solve-p", "decay exponent p from the half-space killing density",
                 {{"d", 2}, {"gamma", 2.0}, {"beta", 0.5}, {"C9", nullptr}, {"tol", 1e-8},
                  {"quad_tol", 1e-10}, {"p_tolerance", 0.01}, {"record_timing", false}},
                 [](const json& p) {
                   auto s = check_gamma2(p);
                   return s.empty() ? check_half_space_d(p) : s;
                 },
                 run_solve_p});
    v.push_back({"pv-identity", "truncated half-space generator of y_d^q against C x_d^{q-alpha}",
                 {{"d", 2}, {"alpha", 1.0}, {"profile", "skbm"}, {"profile_beta", nullptr},
                  {"beta0", nullptr}, {"q", 1.0}, {"x_d", 1.0},
                  {"deltas", {0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}},
                  {"check_deltas", {0.01, 0.001}}, {"bound_factor", 0.05}, {"noise_floor", 1e-11},
                  {"record_timing", false}},
                 [](const json& p) { return integer(p, "d") < 2 ? std::string("d must be >= 2") : std::string(); },
                 run_pv_identity});
    v.push_back({"barrier-check", "normalized generator of the box barrier against its limit",
                 {{"d", 2}, {"beta", 0.5}, {"q", 1.0}, {"r", 1.0}, {"ratios", {0.1, 0.01, 0.001}},
                  {"rel_tolerance", 0.02}, {"record_timing", false}},
                 [](const json& p) { return check_d2(p, "barrier-check"); }, run_barrier_check});
    v.push_back({"green-envelope", "disk Green function against the two-sided envelope",
                 {{"d", 2}, {"R", 1.0}, {"beta", 0.5}, {"p", nullptr}, {"n_pairs", 1000},
                  {"delta_min", 0.01}, {"min_separation", 0.05}, {"band_limit", 400.0},
                  {"stability", 0.10}, {"decay_point", {-0.3, 0.2}},
                  {"decay_deltas", {0.02, 0.01, 0.005, 0.0025}}, {"slope_tolerance", 0.1},
                  {"record_timing", false}},
                 [](const json& p) { return check_d2(p, "the disk oracle"); }, run_green_envelope});
    v.push_back({"green-closed-form", "half-space Green and jump kernels against their quadratures",
                 {{"d", 2}, {"beta", 0.5}, {"n_pairs", 100}, {"rel_tolerance", 1e-8},
                  {"record_timing", false}},
                 check_half_space_d, run_green_closed_form});
    v.push_back({"exit-slope", "Monte Carlo exit probability power law in the half-space",
                 {{"d", 2}, {"gamma", 2.0}, {"beta", 0.5}, {"box", 1.0},
                  {"delta_fractions", {0.02, 0.04, 0.08, 0.16}}, {"n_paths", 200000},
                  {"dt", 0.002}, {"horizon", 20.0}, {"substeps", 1}, {"slope_expected", nullptr},
                  {"slope_tolerance", 0.15}, {"record_timing", false}},
                 [](const json& p) {
                   auto s = check_gamma2(p);
                   return s.empty() ? check_half_space_d(p) : s;
                 },
                 run_exit_slope});
    v.push_back({"green-potential-trichotomy", "integrals of G y_d^gamma' near the boundary",
                 {{"d", 2}, {"beta", 0.5}, {"R", 1.0},
                  {"deltas", {1e-6, 3.1622776601683795e-6, 1e-5, 3.1622776601683795e-5, 1e-4}},
                  {"gamma_primes", {0.5, 0.0, -0.5}}, {"slope_tolerance", 0.1},
                  {"log_tolerance", 0.1}, {"record_timing", false}},
                 [](const json& p) { return check_d2(p, "green-potential-trichotomy"); },
                 run_trichotomy});
    v.push_back({"bhp-ratio", "ratio spread of two exit-probability harmonic functions",
                 {{"d", 2}, {"gamma", 2.0}, {"beta", 0.5}, {"box", 1.0}, {"delta_fraction", 0.08},
                  {"xi_fractions", {-0.25, 0.0, 0.25}}, {"n_paths", 200000}, {"dt", 0.002},
                  {"horizon", 20.0}, {"substeps", 1}, {"se_band", 3.0}, {"record_timing", false}},
                 [](const json& p) {
                   auto s = check_gamma2(p);
                   return s.empty() ? check_d2(p, "bhp-ratio") : s;
                 },
                 run_bhp_ratio});
    v.push_back({"condition-f", "classifier for the liminf condition on Phi2 and l",
                 {{"alpha", 1.0}, {"r", 0.25},
                  {"cases",
                   {{{"phi2", {{"family", "power_log"}, {"beta", 0.5}}}, {"p_minus_alpha", 1.0},
                     {"expected", "holds"}},
                    {{"phi2", {{"family", "power_log"}, {"beta", 0.5}}}, {"p_minus_alpha", 0.25},
                     {"expected", "fails"}},
                    {{"phi2", {{"family", "power_log"}, {"beta", 0.5}}},
                     {"ell", {{"family", "log_e"}, {"beta1_cap", 1.0}, {"beta2_cap", 0.5}}},
                     {"p_minus_alpha", 0.5}, {"expected", "holds"}}}},
                  {"record_timing", false}},
                 nullptr, run_condition_f});
    v.push_back({"upsilon-regimes", "Upsilon against its explicit regimes and preset validation",
                 {{"presets", {{2.0, 0.5}, {1.5, 0.5}, {1.0, 0.25}, {2.0, 0.3}, {1.2, 0.7}}},
                  {"cases",
                   {{{"alpha", 1.0}, {"p", 1.0},
                     {"phi1", {{"family", "preset_gamma_beta"}, {"gamma", 2.0}, {"beta", 0.5},
                               {"component", "phi1"}}},
                     {"phi2", {{"family", "preset_gamma_beta"}, {"gamma", 2.0}, {"beta", 0.5},
                               {"component", "phi2"}}},
                     {"expected", "constant"}},
                    {{"alpha", 1.0}, {"p", 2.5}, {"phi1", {{"family", "power_log"}, {"beta", 2.0}}},
                     {"phi2", {{"family", "power_log"}, {"beta", 0.5}}}, {"expected", "power"}},
                    {{"alpha", 1.0}, {"p", 2.0}, {"phi1", {{"family", "power_log"}, {"beta", 1.0}}},
                     {"phi2", {{"family", "power_log"}, {"beta", 1.0}}},
                     {"expected", "intermediate"}}}},
                  {"n_t", 1000}, {"t_min", 1e-6}, {"band_limit", 50.0},
                  {"settle_tolerance", 0.05}, {"record_timing", false}},
                 nullptr, run_upsilon_regimes});
    v.push_back({"b5-decay", "boundary-profile residual of the disk jump kernel across scales",
                 {{"d", 2}, {"R", 1.0}, {"beta", 0.5}, {"nu", 0.5}, {"boundary_angle", -pi / 2},
                  {"scales", {1.0 / 256, 1.0 / 512, 1.0 / 1024}}, {"x_local", {0.0, 1.0}},
                  {"y_local", {0.5, 2.0}}, {"record_timing", false}},
                 [](const json& p) { return check_d2(p, "the disk oracle"); }, run_b5_decay});
    return v;
  }();
  return defs;
}

}  // namespace jumppot::cli
