// sigfrac: curves, approximations, fits, simulations and the arcsine
// conjecture report for the signal fraction of Poisson cellular networks.
//
// Exit codes: 0 success, 2 usage or domain error, 3 numeric failure.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_io.hpp"
#include "sigfrac/approx.hpp"
#include "sigfrac/montecarlo.hpp"
#include "sigfrac/plp.hpp"
#include "sigfrac/rayleigh.hpp"
#include "sigfrac/transforms.hpp"

namespace {

using namespace sigfrac;
using cli::json;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct ParamOptions {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "path loss exponent, > 2");
    app->add_option("--delta", delta, "2/alpha, in (0,1)");
  }

  NetworkParams resolve() const {
    const bool has_a = !std::isnan(alpha), has_d = !std::isnan(delta);
    if (!has_a && !has_d) throw DomainError("one of --alpha or --delta is required");
    if (has_a && has_d) {
      const NetworkParams p = NetworkParams::from_delta(delta);
      if (std::abs(2.0 / alpha - delta) > 1e-12) {
        throw DomainError("--alpha " + cli::fmt(alpha) + " and --delta " + cli::fmt(delta) +
                          " are inconsistent (delta must equal 2/alpha)");
      }
      return p;
    }
    return has_d ? NetworkParams::from_delta(delta) : NetworkParams::from_alpha(alpha);
  }
};

json params_json(const NetworkParams& p) {
  return {{"delta", cli::rounded(p.delta())}, {"alpha", cli::rounded(p.alpha())}};
}

struct CurveOptions {
  std::string grid;
  std::string unit = "linear";
  std::string variable = "SF";
  std::string kind = "ccdf";
  std::string output = "-";
  std::string format;

  void add(CLI::App* app, const std::string& kinds) {
    app->add_option("--grid", grid, "min:max:count or a comma separated list");
    app->add_option("--unit", unit, "grid unit: linear, dB or MH");
    app->add_option("--var", variable, "SF or SIR");
    app->add_option("--kind", kind, kinds);
    app->add_option("-o,--output", output, "output file, - for standard output");
    app->add_option("--format", format, "csv or json (default: from the output extension)");
  }

  AxisUnit axis() const { return parse_axis_unit(unit); }

  Variable var() const {
    if (variable == "SF" || variable == "sf") return Variable::SF;
    if (variable == "SIR" || variable == "sir") return Variable::SIR;
    throw DomainError("--var must be SF or SIR, got '" + variable + "'");
  }

  std::vector<double> points(const std::string& linear_default) const {
    if (!grid.empty()) return cli::parse_grid(grid);
    switch (axis()) {
      case AxisUnit::dB: return cli::parse_grid("-20:20:81");
      case AxisUnit::MH: return cli::parse_grid("0:0.99:100");
      case AxisUnit::linear: break;
    }
    return cli::parse_grid(linear_default);
  }

  /// Grid argument to the SF threshold t.
  double threshold(double x) const {
    const double lin = cli::grid_to_linear(x, axis());
    if (var() == Variable::SIR) {
      if (!(lin >= 0.0)) throw DomainError("SIR thresholds must be >= 0");
      return t_map(lin);
    }
    if (!(lin >= 0.0 && lin <= 1.0)) {
      throw DomainError("SF thresholds must lie in [0,1], got " + cli::fmt(lin));
    }
    return lin;
  }

  cli::Curve curve(const std::string& command, const NetworkParams& p) const {
    cli::Curve c;
    c.command = command;
    c.variable = std::string(to_string(var()));
    c.kind = kind;
    c.unit = axis();
    c.parameters = params_json(p);
    return c;
  }

  void write(const cli::Curve& c) const { cli::write_curve(c, cli::resolve_format(format, output), output); }
};

void require_kind(const std::string& kind, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* k : allowed) {
    if (kind == k) return;
    list += list.empty() ? k : std::string(", ") + k;
  }
  throw DomainError("--kind must be one of " + list + ", got '" + kind + "'");
}

/// Turns an SF ccdf/pdf pair into the requested curve kind for the variable.
template <class Ccdf, class Pdf>
double evaluate(const CurveOptions& o, double x, Ccdf ccdf, Pdf pdf) {
  const double t = o.threshold(x);
  if (o.kind == "ccdf") return ccdf(t);
  if (o.kind == "cdf") return 1.0 - ccdf(t);
  if (o.var() == Variable::SF) return pdf(t);
  const double w = 1.0 + cli::grid_to_linear(x, o.axis());
  return pdf(t) / (w * w);
}

// --- exact ---------------------------------------------------------------

int cmd_exact(const ParamOptions& po, const CurveOptions& co) {
  const NetworkParams p = po.resolve();
  require_kind(co.kind, {"ccdf", "cdf", "pdf"});
  cli::Curve c = co.curve("exact", p);
  for (double x : co.points("0:1:101")) {
    const double v = evaluate(
        co, x, [&](double t) { return rayleigh::sf_ccdf_exact(p, t); },
        [&](double t) { return rayleigh::sf_pdf_exact(p, t); });
    c.rows.push_back({x, v, {}});
  }
  co.write(c);
  return 0;
}

// --- approx --------------------------------------------------------------

const char* kMethods = "rational:s, poly:1, poly:2, tail:1, tail:2, best, gb-fit, markov, nba-m:1, nba-m:2";

struct Method {
  std::string name;
  int order = 0;
};

Method parse_method(const std::string& text) {
  const auto colon = text.find(':');
  Method m{text.substr(0, colon), 0};
  if (colon != std::string::npos) m.order = cli::parse_int(text.substr(colon + 1), "method order");
  const bool ok = (m.name == "rational" && m.order >= 1) ||
                  ((m.name == "poly" || m.name == "tail" || m.name == "nba-m") &&
                   (m.order == 1 || m.order == 2)) ||
                  ((m.name == "best" || m.name == "gb-fit" || m.name == "markov") && colon == std::string::npos);
  if (!ok) throw DomainError("unknown method '" + text + "'; expected one of " + kMethods);
  return m;
}

json fit_json(const NetworkParams& p, const approx::FitResult& f) {
  return {{"parameters", params_json(p)},
          {"a", f.params.a},
          {"b", f.params.b},
          {"p", f.params.p},
          {"q", f.params.q},
          {"target_moments", f.target_moments},
          {"achieved_moments", f.achieved_moments},
          {"residual", f.residual},
          {"iterations", f.iterations},
          {"used_fallback", f.used_fallback}};
}

/// ccdf of the generalized beta, integrating the density over [t,1].
double gb_ccdf(const approx::GBParams& g, double t) {
  if (t >= 1.0) return 0.0;
  return quad([&](double x, double xc) { return approx::gb_pdf_from_complement(g, x, xc); }, t, 1.0,
              kQuadTolerance, {1.0, g.q});
}

int cmd_approx(const ParamOptions& po, const CurveOptions& co, const std::string& method_text,
               const std::string& sidecar) {
  const Method m = parse_method(method_text);
  const NetworkParams p = po.resolve();
  require_kind(co.kind, {"ccdf", "cdf"});
  std::optional<approx::FitResult> fit;
  if (m.name == "gb-fit") fit = approx::gb_fit(p);

  auto ccdf = [&](double t) -> double {
    if (m.name == "rational") return approx::rational_ccdf(p, m.order, t);
    if (m.name == "poly") return approx::poly_ccdf(p, m.order, t);
    if (m.name == "tail") return approx::tail_ccdf(p, m.order, t);
    if (m.name == "best") return approx::best_sf_ccdf(p, t);
    if (m.name == "gb-fit") return gb_ccdf(fit->params, t);
    if (m.name == "markov") return approx::markov_lower_bound(p, t);
    return approx::nba_m_cdf_asymptote(p, m.order, t);
  };
  cli::Curve c = co.curve("approx", p);
  c.parameters["method"] = method_text;
  for (double x : co.points("0.01:0.99:99")) {
    c.rows.push_back({x, evaluate(co, x, ccdf, [](double) { return 0.0; }), {}});
  }
  co.write(c);
  if (fit) {
    const std::string path = cli::sidecar_path(sidecar, co.output, ".fit.json");
    const std::string text = cli::dump(fit_json(p, *fit));
    if (path.empty()) {
      std::cerr << text;
    } else {
      cli::emit(path, text);
    }
  }
  return 0;
}

// --- simulate ------------------------------------------------------------

FadingModel parse_fading(const std::string& s) {
  if (s == "none") return FadingModel::none();
  if (s.rfind("nakagami:", 0) == 0) return FadingModel::nakagami(cli::parse_number(s.substr(9), "nakagami m"));
  throw DomainError("--fading must be none or nakagami:m, got '" + s + "'");
}

AssociationRule parse_assoc(const std::string& s) {
  if (s == "nba") return AssociationRule::nba();
  if (s == "isba") return AssociationRule::isba();
  if (s == "rba") return AssociationRule::rba();
  if (s.rfind("kth:", 0) == 0) return AssociationRule::kth_strongest(cli::parse_int(s.substr(4), "kth index"));
  throw DomainError("--assoc must be nba, isba, rba or kth:n, got '" + s + "'");
}

std::uint64_t parse_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
    throw DomainError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::uint64_t>(v);
}

struct SimOptions {
  std::string fading = "nakagami:1";
  std::string assoc = "nba";
  double samples = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  double tail_eps = SimConfig{}.tail_eps;
  int point_budget = SimConfig{}.point_budget;
  std::string summary;

  void add(CLI::App* app) {
    app->add_option("--fading", fading, "none or nakagami:m");
    app->add_option("--assoc", assoc, "nba, isba, rba or kth:n");
    app->add_option("--samples", samples, "number of realizations");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--threads", threads, "worker threads (default: SIGFRAC_THREADS or all cores)");
    app->add_option("--tail-eps", tail_eps, "truncation tolerance per realization");
    app->add_option("--point-budget", point_budget, "maximum points per realization");
    app->add_option("--summary", summary, "summary JSON path (default: <output>.summary.json or stderr)");
  }
};

int cmd_simulate(const ParamOptions& po, const CurveOptions& co, const SimOptions& so) {
  SimConfig cfg;
  cfg.params = po.resolve();
  cfg.fading = parse_fading(so.fading);
  cfg.assoc = parse_assoc(so.assoc);
  cfg.samples = parse_count(so.samples, "--samples");
  cfg.seed = so.seed;
  cfg.threads = so.threads;
  cfg.tail_eps = so.tail_eps;
  cfg.point_budget = so.point_budget;
  cfg.validate();
  require_kind(co.kind, {"ccdf", "cdf"});
  const auto grid = co.points("0:1:101");
  for (double x : grid) co.threshold(x);  // reject a bad grid before simulating

  std::uint64_t flagged = 0;
  const EmpiricalDistribution dist = sample_sf(cfg, &flagged);

  cli::Curve c = co.curve("simulate", cfg.params);
  c.parameters["fading"] = cfg.fading.to_string();
  c.parameters["assoc"] = cfg.assoc.to_string();
  c.parameters["samples"] = cfg.samples;
  c.parameters["seed"] = cfg.seed;
  for (double x : grid) {
    c.rows.push_back(
        {x, evaluate(co, x, [&](double t) { return empirical_ccdf(dist, t); }, [](double) { return 0.0; }), {}});
  }
  co.write(c);

  const double mean = empirical_moment(dist, 1);
  const double var = empirical_moment(dist, 2) - mean * mean;
  const json summary = {{"command", "simulate"},
                        {"parameters", params_json(cfg.params)},
                        {"fading", cfg.fading.to_string()},
                        {"assoc", cfg.assoc.to_string()},
                        {"seed", cfg.seed},
                        {"tail_eps", cfg.tail_eps},
                        {"point_budget", cfg.point_budget},
                        {"count", dist.count()},
                        {"flagged", flagged},
                        {"mean", cli::rounded(mean)},
                        {"variance", cli::rounded(var)},
                        {"standard_error", cli::rounded(std::sqrt(var / dist.count()))},
                        {"min", cli::rounded(dist.sorted_samples().front())},
                        {"max", cli::rounded(dist.sorted_samples().back())}};
  const std::string path = cli::sidecar_path(so.summary, co.output, ".summary.json");
  if (path.empty()) {
    std::cerr << cli::dump(summary);
  } else {
    cli::emit(path, cli::dump(summary));
  }
  return 0;
}

// --- plp -----------------------------------------------------------------

int cmd_plp(const ParamOptions& po, CurveOptions co, const std::string& stat_text, double t) {
  const NetworkParams p = po.resolve();
  const Method stat{stat_text.substr(0, stat_text.find(':')),
                    stat_text.find(':') == std::string::npos
                        ? 0
                        : cli::parse_int(stat_text.substr(stat_text.find(':') + 1), "stat index")};
  const bool indexed = stat.name == "gn" || stat.name == "sfirat" || stat.name == "loggap";
  const bool plain = stat.name == "sf1-bound" || stat.name == "rba-curve" || stat.name == "sstar";
  if (!((indexed && stat.order >= 1) || (plain && stat_text.find(':') == std::string::npos))) {
    throw DomainError("unknown stat '" + stat_text +
                      "'; expected one of gn:n, sfirat:i, loggap:i, sf1-bound, rba-curve, sstar");
  }
  json scalar = {{"stat", stat_text}, {"parameters", params_json(p)}};

  if (stat.name == "gn") {
    if (!std::isnan(t)) {
      const plp::GnValue g = plp::g_n(p, stat.order, t);
      scalar["t"] = cli::rounded(t);
      scalar["value"] = cli::rounded(g.value);
      scalar["upper_bound_only"] = g.upper_bound_only;
    } else {
      require_kind(co.kind, {"ccdf"});
      cli::Curve c = co.curve("plp", p);
      c.parameters["stat"] = stat_text;
      for (double x : co.points("0.05:0.95:19")) {
        const plp::GnValue g = plp::g_n(p, stat.order, co.threshold(x));
        c.rows.push_back({x, g.value, g.upper_bound_only ? std::optional<std::string>("ub-only") : std::nullopt});
      }
      co.write(c);
      return 0;
    }
  } else if (stat.name == "rba-curve") {
    require_kind(co.kind, {"ccdf", "cdf", "pdf"});
    cli::Curve c = co.curve("plp", p);
    c.parameters["stat"] = stat_text;
    for (double x : co.points("0:1:101")) {
      const double v = evaluate(
          co, x, [&](double s) { return 1.0 - plp::rba_cdf(p, s); }, [&](double s) { return plp::rba_pdf(p, s); });
      c.rows.push_back({x, v, {}});
    }
    co.write(c);
    return 0;
  } else if (stat.name == "sfirat") {
    scalar["value"] = cli::rounded(plp::mean_sf_ratio(p, stat.order));
  } else if (stat.name == "loggap") {
    scalar["value"] = cli::rounded(plp::log_sf_gap(p, stat.order));
  } else if (stat.name == "sf1-bound") {
    scalar["value"] = cli::rounded(plp::mean_sf1_upper_bound(p));
  } else {
    // F_SF1(t) ~ exp(s* (1/t - 1)) as t -> 0, so s* is negative
    const double rate = plp::flatness_rate(p);
    scalar["value"] = cli::rounded(-rate);
    scalar["decay_rate"] = cli::rounded(rate);
  }
  cli::emit(co.output, cli::dump(scalar));
  return 0;
}

// --- conjecture ----------------------------------------------------------

constexpr double kEvaluationSamples = 2e7;
constexpr double kMomentThreshold = 3e-4;
constexpr double kKsThreshold = 1.0 / 3000.0;

int cmd_conjecture(double samples_opt, std::uint64_t seed, int threads, const std::string& output) {
  const std::uint64_t samples = parse_count(samples_opt, "--samples");
  if (samples < 10000) throw DomainError("--samples must be >= 10000");
  const ConjectureReport rep = conjecture_report(samples, seed, threads);

  json moments = json::array();
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    worst = std::max(worst, std::abs(rep.relative_differences[k]));
    moments.push_back({{"k", k + 1},
                       {"empirical", cli::rounded(rep.empirical_moments[k])},
                       {"arcsine", cli::rounded(rep.arcsine_moments[k])},
                       {"relative_difference", cli::rounded(rep.relative_differences[k])}});
  }
  const bool evaluated = static_cast<double>(samples) >= kEvaluationSamples;
  json evaluation = {{"evaluated", evaluated}};
  if (evaluated) {
    const bool mp = worst < kMomentThreshold, kp = rep.ks_distance < kKsThreshold;
    evaluation["moments_pass"] = mp;
    evaluation["ks_pass"] = kp;
    evaluation["status"] = mp && kp ? "pass" : "fail";
  } else {
    evaluation["status"] = "not evaluated (insufficient samples)";
  }
  const json report = {
      {"command", "conjecture"},
      {"parameters", params_json(NetworkParams::from_alpha(4.0))},
      {"fading", "nakagami:0.5"},
      {"assoc", "nba"},
      {"samples", rep.samples},
      {"seed", rep.seed},
      {"moments", std::move(moments)},
      {"max_relative_difference", cli::rounded(worst)},
      {"ks_distance", cli::rounded(rep.ks_distance)},
      {"thresholds",
       {{"moment_relative", kMomentThreshold}, {"ks", cli::rounded(kKsThreshold)}, {"min_samples", kEvaluationSamples}}},
      {"evaluation", std::move(evaluation)}};
  cli::emit(output, cli::dump(report));
  return 0;
}

// --- convert -------------------------------------------------------------

int cmd_convert(const std::string& from, const std::string& to, const std::vector<double>& values,
                const std::string& grid, const std::string& output, const std::string& format) {
  const AxisUnit src = parse_axis_unit(from), dst = parse_axis_unit(to);
  std::vector<double> xs = values;
  if (!grid.empty()) {
    const auto g = cli::parse_grid(grid);
    xs.insert(xs.end(), g.begin(), g.end());
  }
  if (xs.empty()) throw DomainError("convert: give --value or --grid");
  cli::Curve c;
  c.command = "convert";
  c.variable = "SIR";
  c.kind = std::string("to:") + std::string(to_string(dst));
  c.unit = src;
  for (double x : xs) c.rows.push_back({x, from_linear(cli::grid_to_linear(x, src), dst), {}});
  cli::write_curve(c, cli::resolve_format(format, output), output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal fraction and SIR distributions of Poisson cellular networks"};
  app.require_subcommand(1);

  ParamOptions po;
  CurveOptions co;

  auto* exact = app.add_subcommand("exact", "exact Rayleigh NBA ccdf, cdf or pdf");
  po.add(exact);
  co.add(exact, "ccdf, cdf or pdf");

  std::string method, sidecar;
  ParamOptions apo;
  CurveOptions aco;
  auto* approx_cmd = app.add_subcommand("approx", "approximations and bounds of the SF/SIR ccdf");
  apo.add(approx_cmd);
  aco.add(approx_cmd, "ccdf or cdf");
  approx_cmd->add_option("--method", method, kMethods)->required();
  approx_cmd->add_option("--sidecar", sidecar, "gb-fit parameter JSON path (default: <output>.fit.json or stderr)");

  ParamOptions spo;
  CurveOptions sco;
  SimOptions so;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo SF/SIR ccdf");
  spo.add(simulate_cmd);
  sco.add(simulate_cmd, "ccdf or cdf");
  so.add(simulate_cmd);

  ParamOptions ppo;
  CurveOptions pco;
  std::string stat;
  double t = std::numeric_limits<double>::quiet_NaN();
  auto* plp_cmd = app.add_subcommand("plp", "statistics of the no-fading path loss process");
  ppo.add(plp_cmd);
  pco.add(plp_cmd, "ccdf, cdf or pdf (rba-curve)");
  plp_cmd->add_option("--stat", stat, "gn:n, sfirat:i, loggap:i, sf1-bound, rba-curve or sstar")->required();
  plp_cmd->add_option("--t", t, "threshold for a scalar gn value");

  double cj_samples = 1e6;
  std::uint64_t cj_seed = 1;
  int cj_threads = 0;
  std::string cj_output = "-";
  auto* conj = app.add_subcommand("conjecture", "arcsine law check for NBA with Nakagami-1/2 fading, alpha = 4");
  conj->add_option("--samples", cj_samples, "number of realizations, >= 10000");
  conj->add_option("--seed", cj_seed, "random seed");
  conj->add_option("--threads", cj_threads, "worker threads");
  conj->add_option("-o,--output", cj_output, "report path, - for standard output");

  std::string cv_from = "linear", cv_to = "dB", cv_grid, cv_output = "-", cv_format;
  std::vector<double> cv_values;
  auto* convert = app.add_subcommand("convert", "convert between linear, dB and MH units");
  convert->add_option("--from", cv_from, "linear, dB or MH");
  convert->add_option("--to", cv_to, "linear, dB or MH");
  convert->add_option("--value", cv_values, "value(s) to convert");
  convert->add_option("--grid", cv_grid, "min:max:count or a list");
  convert->add_option("-o,--output", cv_output, "output file");
  convert->add_option("--format", cv_format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*exact) return cmd_exact(po, co);
    if (*approx_cmd) return cmd_approx(apo, aco, method, sidecar);
    if (*simulate_cmd) return cmd_simulate(spo, sco, so);
    if (*plp_cmd) return cmd_plp(ppo, pco, stat, t);
    if (*conj) return cmd_conjecture(cj_samples, cj_seed, cj_threads, cj_output);
    if (*convert) return cmd_convert(cv_from, cv_to, cv_values, cv_grid, cv_output, cv_format);
  } catch (const DomainError& e) {
    std::cerr << "sigfrac: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "sigfrac: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "sigfrac: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
