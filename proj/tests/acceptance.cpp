// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [output_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "jumppot/jumppot.hpp"

namespace jp = jumppot;
namespace cli = jumppot::cli;
using cli::json;
using jp::make_point;
using jp::Point;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string out_dir = "acceptance_out";

std::string fmt(double v) { return cli::short_number(v); }

// Runs an experiment through the same path as the CLI and writes its report.
cli::ReportBundle run(const std::string& experiment, const json& params, const std::string& tag,
                      std::uint64_t seed = 1) {
  const auto cfg = cli::parse_config({{"experiment", experiment},
                                      {"parameters", params},
                                      {"seed", seed},
                                      {"output_path", out_dir + "/" + tag}});
  auto b = cli::run_experiment(cfg);
  cli::emit_report(b, cfg.output_path);
  return b;
}

std::string failed_assertions(const cli::ReportBundle& b) {
  std::string s;
  for (const auto& a : b.assertions)
    if (!a.pass) s += " [" + b.experiment + ":" + a.name + " measured " + fmt(a.measured) + "]";
  if (b.status != "ok") s += " [" + b.experiment + " status " + b.status + "]";
  return s;
}

bool ok(const cli::ReportBundle& b) { return b.status == "ok" && b.all_pass() && !b.assertions.empty(); }

Outcome left_endpoint() {
  Outcome o{true, ""};
  jp::KillingConstantOptions opt;
  opt.d = 2;
  opt.beta0 = 1.0;
  opt.tol = 1e-10;
  for (double alpha : {0.6, 1.0, 1.4}) {
    const double q = std::max(alpha - 1.0, 0.0);
    const double v = jp::killing_constant(alpha, q, jp::skbm_profile_F(2, alpha / 2), opt).value;
    o.pass = o.pass && std::abs(v) < 1e-9;
    o.detail += "alpha=" + fmt(alpha) + ": |C|=" + fmt(std::abs(v)) + " ";
  }
  return o;
}

Outcome monotonicity() {
  const std::vector<std::pair<std::string, json>> runs{
      {"constants_alpha1_skbm", {{"alpha", 1.0}, {"profile", "skbm"}}},
      {"constants_alpha06_skbm", {{"alpha", 0.6}, {"profile", "skbm"}}},
      {"constants_alpha14_constant", {{"alpha", 1.4}, {"profile", "constant"}, {"beta0", 0.0}}}};
  Outcome o{true, ""};
  for (const auto& [tag, params] : runs) {
    json p = params;
    p["q_count"] = 12;
    const auto b = run("constants-table", p, tag);
    o.pass = o.pass && ok(b) && b.rows.size() == 12;
    o.detail += tag + (ok(b) ? " increasing; " : " FAILED;") + failed_assertions(b);
  }
  return o;
}

Outcome spectral_exponent() {
  Outcome o{true, ""};
  for (double beta : {0.3, 0.5, 0.7}) {
    const auto b = run("solve-p", {{"gamma", 2.0}, {"beta", beta}}, "solve_p_beta" + fmt(beta));
    const auto& row = b.rows.at(0);
    const double c1 = row.at(3).get<double>(), C9 = row.at(4).get<double>(), p = row.at(5).get<double>();
    bool pass = ok(b) && std::abs(p - 1.0) <= 0.01;
    if (beta == 0.5) {
      // Independent values: 2/pi for the killing density and c_{2,-1} = 1/(2 pi).
      pass = pass && std::abs(c1 - 2.0 / jp::pi) <= 1e-6 && std::abs(C9 - 4.0) <= 1e-4;
      o.detail += "c1=" + cli::format_number(c1) + " C9=" + cli::format_number(C9) + " ";
    }
    o.pass = o.pass && pass;
    o.detail += "beta=" + fmt(beta) + ": p=" + cli::format_number(p) + "; " + failed_assertions(b);
  }
  return o;
}

Outcome pv_identity() {
  const auto b = run("pv-identity",
                     {{"alpha", 1.0}, {"profile", "skbm"}, {"profile_beta", 0.5}, {"q", 1.0}, {"x_d", 1.0}},
                     "pv_identity");
  std::string d;
  for (const auto& a : b.assertions) d += a.name + "=" + fmt(a.measured) + " ";
  return {ok(b), d + failed_assertions(b)};
}

Outcome closed_form_green() {
  const auto b = run("green-closed-form", {{"d", 2}, {"beta", 0.5}, {"n_pairs", 100}, {"rel_tolerance", 1e-8}},
                     "green_closed_form");
  std::string d;
  for (const auto& a : b.assertions) d += a.name + "=" + fmt(a.measured) + " ";
  return {ok(b) && b.rows.size() == 100, d + failed_assertions(b)};
}

Outcome green_envelope() {
  const auto b = run("green-envelope", {{"n_pairs", 1000}, {"band_limit", 400.0}, {"stability", 0.10}},
                     "green_envelope", 7);
  std::string d;
  for (const auto& a : b.assertions) d += a.name + "=" + fmt(a.measured) + " ";
  return {ok(b), d + failed_assertions(b)};
}

Outcome exit_slope() {
  const auto b = run("exit-slope", {{"n_paths", 200000}, {"slope_tolerance", 0.15}}, "exit_slope", 11);
  std::string d;
  for (const auto& a : b.assertions)
    if (a.name == "slope") d += "slope=" + fmt(a.measured) + " ";
  return {ok(b), d + failed_assertions(b)};
}

Outcome trichotomy() {
  const auto b = run("green-potential-trichotomy", json::object(), "trichotomy");
  std::string d;
  for (const auto& a : b.assertions) d += a.name + "=" + fmt(a.measured) + " ";
  return {ok(b), d + failed_assertions(b)};
}

Outcome sampler() {
  const std::size_t n = 1000000;
  Outcome o{true, ""};
  for (double beta : {0.3, 0.5, 0.7}) {
    jp::RngStream rng(2024, static_cast<std::uint64_t>(beta * 10));
    std::vector<double> s(n);
    for (auto& v : s) v = jp::sample_subordinator_increment(beta, 1.0, rng);
    double worst = 0.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
      double m = 0, m2 = 0;
      for (double v : s) {
        const double e = std::exp(-lambda * v);
        m += e;
        m2 += e * e;
      }
      m /= n;
      const double se = std::sqrt((m2 / n - m * m) / (n - 1));
      worst = std::max(worst, std::abs(m - std::exp(-std::pow(lambda, beta))) / se);
    }
    o.pass = o.pass && worst <= 3.0;
    o.detail += "beta=" + fmt(beta) + ": max z=" + fmt(worst) + " ";
    if (beta == 0.5) {
      std::nth_element(s.begin(), s.begin() + n / 2, s.end());
      const double med = s[n / 2];
      // Levy law with scale 1/2: median = (1/2) / (2 erfc^{-1}(1/2)^2).
      const double e = boost::math::erfc_inv(0.5);
      const double exact = 0.5 / (2.0 * e * e);
      o.pass = o.pass && std::abs(med - exact) <= 0.01;
      o.detail += "median=" + fmt(med) + " (exact " + fmt(exact) + ") ";
    }
  }
  return o;
}

Outcome upsilon_suite() {
  const auto b = run("upsilon-regimes", {{"n_t", 1000}}, "upsilon_regimes");
  std::string d;
  for (const auto& a : b.assertions) d += a.name + "=" + fmt(a.measured) + " ";
  return {ok(b), d + failed_assertions(b)};
}

Outcome symmetry_suite() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-3.0, 3.0), V(-0.999, 4.0);
  double inv = 0.0, comp = 0.0;
  for (int d : {2, 3}) {
    const double beta = 0.4;
    const auto F = jp::skbm_profile_F(d, beta);
    auto theta = [&](double r) { return std::pow(r, d + 2 * beta); };
    for (int i = 0; i < 10000; ++i) {
      Point z(d);
      for (int k = 0; k + 1 < d; ++k) z(k) = U(rng);
      z(d - 1) = V(rng);
      const Point w = -z / (1.0 + z(d - 1));
      inv = std::max(inv, std::abs(F(z) - F(w)));
      comp = std::max(comp, std::abs(jp::f0_skbm_halfspace(d, beta, z) + jp::censored_profile(theta, z) - 1.0));
    }
  }
  const auto pre = jp::preset_gamma_beta(1.5, 0.5);
  const jp::JumpKernelSpec k{pre.alpha, jp::make_ball(make_point({0, 0}), 1.0), pre.triple,
                             jp::cosine_coefficient()};
  std::uniform_real_distribution<double> W(-0.7, 0.7);
  bool exact = true;
  for (int i = 0; i < 10000; ++i) {
    const Point x = make_point({W(rng), W(rng)}), y = make_point({W(rng), W(rng)});
    exact = exact && jp::eval_B(k, x, y) == jp::eval_B(k, y, x);
  }
  return {inv <= 1e-14 && comp <= 1e-12 && exact,
          "inversion=" + fmt(inv) + " complement=" + fmt(comp) + " B_symmetric=" + (exact ? "yes" : "no")};
}

Outcome condition_f() {
  const auto b = run("condition-f", json::object(), "condition_f");
  std::string d;
  for (const auto& a : b.assertions) d += a.name + " ";
  return {ok(b) && b.assertions.size() == 3, d + failed_assertions(b)};
}

Outcome b5_decay() {
  const auto b = run("b5-decay", {{"d", 2}, {"beta", 0.5}}, "b5_decay");
  std::string d;
  for (const auto& a : b.assertions) d += a.name + "=" + fmt(a.measured) + " ";
  return {ok(b), d + failed_assertions(b)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) out_dir = argv[1];
  const std::vector<Criterion> criteria{
      {1, "killing constant vanishes at the left endpoint", 10, left_endpoint},
      {2, "constants table strictly increasing", 120, monotonicity},
      {3, "spectral fractional Laplacian exponent p = 1", 300, spectral_exponent},
      {4, "half-space principal value identity", 300, pv_identity},
      {5, "closed-form half-space Green function", 60, closed_form_green},
      {6, "disk Green function envelope", 600, green_envelope},
      {7, "exit probability power law", 900, exit_slope},
      {8, "Green potential trichotomy", 300, trichotomy},
      {9, "stable subordinator sampler", 120, sampler},
      {10, "profile and Upsilon suite", 60, upsilon_suite},
      {11, "symmetry and identity suite", 60, symmetry_suite},
      {12, "condition (F) classifier", 1, condition_f},
      {13, "boundary-profile residual decay", 600, b5_decay},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs < c.budget_s;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s| %.2f s of %.0f s budget%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_budget ? "" : " EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
