// Acceptance checks. Prints one PASS/FAIL line per criterion, with indented
// detail lines underneath. Exits non-zero if any selected criterion fails.
//
//   acceptance [--only ID]... [--cli PATH]
//
// --cli names the sigfrac executable used by the determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigfrac/approx.hpp"
#include "sigfrac/montecarlo.hpp"
#include "sigfrac/plp.hpp"
#include "sigfrac/rayleigh.hpp"

namespace {

using namespace sigfrac;
using Clock = std::chrono::steady_clock;

NetworkParams D(double delta) { return NetworkParams::from_delta(delta); }

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  template <class... T>
  void note(bool pass, T&&... parts) {
    std::ostringstream os;
    os.precision(6);
    os << (pass ? "  ok   " : "  MISS ");
    (os << ... << parts);
    notes.push_back(os.str());
    ok = ok && pass;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SimConfig config(double delta, FadingModel fading, AssociationRule assoc, std::uint64_t n, std::uint64_t seed) {
  SimConfig c;
  c.params = D(delta);
  c.fading = fading;
  c.assoc = assoc;
  c.samples = n;
  c.seed = seed;
  return c;
}

double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

struct MeanSe {
  double mean, se;
};

MeanSe mean_se(const std::vector<double>& x) {
  long double s = 0, s2 = 0;
  for (double v : x) {
    s += v;
    s2 += static_cast<long double>(v) * v;
  }
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(s / n);
  const double var = static_cast<double>(s2 / n) - m * m;
  return {m, std::sqrt(std::max(var, 0.0) / n)};
}

// --- 1 -------------------------------------------------------------------

Check table_one() {
  Check c;
  struct Row {
    double delta, b, p, q;
  };
  const Row rows[] = {{0.4, 0.7160, 0.7385, 0.4164}, {0.5, 0.5554, 0.8648, 0.5276}, {2.0 / 3.0, 0.3598, 0.9296, 0.7089}};
  const auto t0 = Clock::now();
  for (const Row& r : rows) {
    const approx::FitResult f = approx::gb_fit(D(r.delta));
    const double eb = std::abs(f.params.b - r.b), ep = std::abs(f.params.p - r.p), eq = std::abs(f.params.q - r.q);
    c.note(eb <= 1e-3 && ep <= 1e-3 && eq <= 1e-3, "delta=", r.delta, " (b,p,q)=(", f.params.b, ", ", f.params.p, ", ",
           f.params.q, ") table (", r.b, ", ", r.p, ", ", r.q, ") |diff|=(", eb, ", ", ep, ", ", eq, ")");
  }
  const double s = seconds_since(t0);
  c.note(s < 10.0, "runtime ", s, " s (limit 10 s)");
  return c;
}

// --- 2 -------------------------------------------------------------------

Check gn_special_values() {
  Check c;
  const double pi = std::numbers::pi;
  const double expected[] = {2.0 / pi, 1.0 / pi, 4.0 / (3.0 * pi * pi), 1.0 / (2.0 * pi * pi)};
  for (int n = 1; n <= 4; ++n) {
    const double v = plp::g_n(D(0.5), n, 0.5).value;
    c.note(std::abs(v - expected[n - 1]) <= 1e-12, "g_", n, "(1/2) = ", v, " expected ", expected[n - 1],
           " diff ", std::abs(v - expected[n - 1]));
  }
  return c;
}

// --- 3 -------------------------------------------------------------------

Check rayleigh_oracle() {
  Check c;
  const auto t0 = Clock::now();
  const double n = 1e6;
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    const auto dist = sample_sf(config(d, FadingModel::nakagami(1.0), AssociationRule::nba(), n, 3001));
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double exact = rayleigh::sf_ccdf_exact(D(d), t);
      const double z = (empirical_ccdf(dist, t) - exact) / binomial_se(exact, n);
      c.note(std::abs(z) <= 3.0, "delta=", d, " t=", t, " exact ", exact, " z=", z);
    }
  }
  const double s = seconds_since(t0);
  c.note(s < 120.0, "runtime ", s, " s (limit 120 s)");
  return c;
}

// --- 4 -------------------------------------------------------------------

Check no_fading_oracle() {
  Check c;
  const double d = 0.5, n = 1e6, tj = 0.6;
  // the kth(3) truncation keeps SF_3 and the power beyond it resolved
  const SimConfig cfg = config(d, FadingModel::none(), AssociationRule::kth_strongest(3), n, 4001);
  struct Out {
    double sf1;
    bool joint2, joint3;
  };
  const auto res = simulate(cfg, [&](const Realization& r, Rng&) {
    const auto s = r.top_fractions(3);
    return Out{s[0], s[1] > tj * (1.0 - s[0]), s[2] > tj * (1.0 - s[0] - s[1])};
  });
  for (double t : {0.5, 0.6, 0.75, 0.9}) {
    const double g = plp::g_n(D(d), 1, t).value;
    double hits = 0;
    for (const Out& o : res) hits += o.sf1 > t;
    const double z = (hits / n - g) / binomial_se(g, n);
    c.note(std::abs(z) <= 3.0, "P(SF_1 > ", t, ") g_1 ", g, " MC ", hits / n, " z=", z);
  }
  for (int k : {2, 3}) {
    const double g = plp::g_n(D(d), k, tj).value;
    double hits = 0;
    for (const Out& o : res) hits += k == 2 ? o.joint2 : o.joint3;
    const double z = (hits / n - g) / binomial_se(g, n);
    c.note(std::abs(z) <= 3.0, "g_", k, "(", tj, ") ", g, " MC ", hits / n, " z=", z);
  }
  return c;
}

// --- 5 -------------------------------------------------------------------

constexpr std::uint64_t kConjectureSeed = 1;

Check conjecture(std::uint64_t samples, double moment_tol, double ks_tol, double time_limit) {
  Check c;
  const auto t0 = Clock::now();
  const ConjectureReport rep = conjecture_report(samples, kConjectureSeed);
  const double s = seconds_since(t0);
  for (int k = 0; k < 10; ++k) {
    const double r = rep.relative_differences[k];
    c.note(std::abs(r) < moment_tol, "moment ", k + 1, " MC ", rep.empirical_moments[k], " arcsine ",
           rep.arcsine_moments[k], " rel diff ", r);
  }
  c.note(rep.ks_distance < ks_tol, "KS distance ", rep.ks_distance, " (limit ", ks_tol, ")");
  c.note(s < time_limit, "samples ", samples, " seed ", kConjectureSeed, " runtime ", s, " s (limit ", time_limit,
         " s)");
  return c;
}

// --- 6 -------------------------------------------------------------------

Check sf1_bound() {
  Check c;
  for (double d : {0.3, 0.5, 0.7}) {
    const auto dist = sample_sf(config(d, FadingModel::none(), AssociationRule::kth_strongest(1), 1e6, 6001));
    const double mc = empirical_moment(dist, 1);
    const double bound = plp::mean_sf1_upper_bound(D(d));
    c.note(bound >= mc && bound - mc < 0.03, "delta=", d, " bound ", bound, " MC mean ", mc, " gap ", bound - mc);
  }
  return c;
}

// --- 7 -------------------------------------------------------------------

Check rba_law() {
  Check c;
  const double n = 1e5;
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    const auto dist = sample_sf(config(d, FadingModel::none(), AssociationRule::rba(), n, 7001));
    const double ks = ks_distance(dist, [&](double t) { return plp::rba_cdf(D(d), t); });
    c.note(ks < 1.63 / std::sqrt(n), "delta=", d, " KS ", ks, " (limit ", 1.63 / std::sqrt(n), ")");
    const MeanSe m = mean_se(dist.sorted_samples());
    const double z = (m.mean - (1.0 - d)) / m.se;
    c.note(std::abs(z) <= 3.0, "delta=", d, " mean ", m.mean, " vs ", 1.0 - d, " z=", z);
  }
  return c;
}

// --- 8 -------------------------------------------------------------------

Check bound_orientation() {
  Check c;
  int bad5 = 0, bad3 = 0, count = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double t = 0.1 * i / 1000.0;
    ++count;
    const double e5 = rayleigh::sf_ccdf_exact(D(0.5), t);
    if (!(approx::poly_ccdf(D(0.5), 1, t) <= e5 && e5 <= approx::poly_ccdf(D(0.5), 2, t))) ++bad5;
    const double e3 = rayleigh::sf_ccdf_exact(D(0.3), t);
    if (!(approx::poly_ccdf(D(0.3), 1, t) >= e3 && approx::poly_ccdf(D(0.3), 2, t) >= e3)) ++bad3;
  }
  c.note(bad5 == 0, "delta=0.5: first order <= exact <= second order at ", count - bad5, "/", count, " points in (0, 0.1]");
  c.note(bad3 == 0, "delta=0.3: both orders >= exact at ", count - bad3, "/", count, " points in (0, 0.1]");
  c.note(approx::convexity_sign(D(0.5)) > 0 && approx::convexity_sign(D(0.3)) < 0,
         "convexity threshold (3 - sqrt 5)/2 = ", (3.0 - std::sqrt(5.0)) / 2.0, " separates 0.3 and 0.5");
  return c;
}

// --- 9 -------------------------------------------------------------------

Check rational_order() {
  Check c;
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    for (int s = 1; s <= 3; ++s) {
      auto ratio = [&](double t) { return std::abs(approx::rational_ccdf_error(D(d), s, t)) / std::pow(t, s); };
      const double r2 = ratio(1e-2), r3 = ratio(1e-3), r4 = ratio(1e-4);
      c.note(r2 / r3 >= 8.0 && r3 / r4 >= 8.0, "delta=", d, " s=", s, " |err|/t^s at 1e-2,1e-3,1e-4: ", r2, ", ", r3,
             ", ", r4, " decade factors ", r2 / r3, ", ", r3 / r4);
    }
  }
  return c;
}

// --- 10 ------------------------------------------------------------------

Check tail_quality() {
  Check c;
  for (double d : {0.4, 0.5, 2.0 / 3.0}) {
    double worst = 0.0, at = 0.0;
    const int n = 4000;
    for (int i = 1; i < n; ++i) {
      const double t = 2.0 / 3.0 + (1.0 / 3.0) * i / n;
      const double e = rayleigh::sf_ccdf_exact(D(d), t);
      const double rel = std::abs(approx::tail_ccdf(D(d), 2, t) / e - 1.0);
      if (rel > worst) worst = rel, at = t;
    }
    c.note(worst <= 0.02, "delta=", d, " max relative error on (2/3, 1) ", worst, " at t=", at);
  }
  return c;
}

// --- 11 ------------------------------------------------------------------

Check ratio_and_log_gap() {
  Check c;
  const double d = 0.5;
  const SimConfig cfg = config(d, FadingModel::none(), AssociationRule::kth_strongest(5), 1e5, 11001);
  // ratios of powers do not involve the total
  const auto res = simulate(cfg, [](const Realization& r, Rng&) { return r.top_fractions(5); });
  for (int i = 1; i <= 5; ++i) {
    std::vector<double> x;
    x.reserve(res.size());
    for (const auto& s : res) x.push_back(s[i - 1] / s[0]);
    const MeanSe m = mean_se(x);
    const double expected = plp::mean_sf_ratio(D(d), i);
    const double z = m.se > 0 ? (m.mean - expected) / m.se : (m.mean == expected ? 0.0 : INFINITY);
    c.note(std::abs(z) <= 3.0, "E[SF_", i, "/SF_1] MC ", m.mean, " exact ", expected, " z=", z);
  }
  for (int i = 1; i <= 3; ++i) {
    std::vector<double> x;
    x.reserve(res.size());
    for (const auto& s : res) x.push_back(std::log(s[0] / s[i]));
    const MeanSe m = mean_se(x);
    const double expected = plp::log_sf_gap(D(d), i);
    const double z = (m.mean - expected) / m.se;
    c.note(std::abs(z) <= 3.0, "log gap i=", i, " MC ", m.mean, " H_i/delta ", expected, " z=", z);
  }
  return c;
}

// --- 12 ------------------------------------------------------------------

Check second_strongest() {
  Check c;
  for (double alpha : {3.0, 4.0, 5.0}) {
    SimConfig cfg = config(2.0 / alpha, FadingModel::none(), AssociationRule::kth_strongest(2), 1e6, 12001);
    cfg.params = NetworkParams::from_alpha(alpha);
    const auto dist = sample_sf(cfg);
    const double v = empirical_ccdf(dist, 0.125);
    const double mx = dist.sorted_samples().back();
    c.note(std::abs(v - 0.5) <= 0.05 && mx <= 0.5, "alpha=", alpha, " P(SF_2 > 1/8) ", v, " max sample ", mx);
  }
  return c;
}

// --- 13 ------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Check determinism(const std::string& cli) {
  Check c;
  if (cli.empty()) {
    c.note(false, "no --cli executable given");
    return c;
  }
  const std::string dir = "acceptance_determinism";
  if (std::system(("mkdir -p " + dir).c_str()) != 0) {
    c.note(false, "cannot create ", dir);
    return c;
  }
  struct Case {
    std::string name, args;
    std::vector<std::string> files;
  };
  const std::vector<Case> cases = {
      {"simulate nakagami:1 nba",
       "simulate --alpha 4 --fading nakagami:1 --assoc nba --samples 50000 --seed 7 --format json",
       {"out", "out.summary.json"}},
      {"simulate none rba", "simulate --alpha 3 --fading none --assoc rba --samples 20000 --seed 11", {"out", "out.summary.json"}},
      {"simulate none kth:2", "simulate --alpha 5 --fading none --assoc kth:2 --samples 20000 --seed 5", {"out", "out.summary.json"}},
      {"conjecture", "conjecture --samples 20000 --seed 3", {"out"}},
  };
  for (const Case& k : cases) {
    std::map<int, std::vector<std::string>> outputs;
    bool ran = true;
    for (int threads : {1, 2, 5}) {
      const std::string base = dir + "/t" + std::to_string(threads) + "_";
      const std::string cmd = "SIGFRAC_THREADS=" + std::to_string(threads) + " '" + cli + "' " + k.args + " -o " +
                              base + "out";
      ran = ran && std::system(cmd.c_str()) == 0;
      for (const auto& f : k.files) outputs[threads].push_back(slurp(base + f));
    }
    const bool same = ran && outputs[1] == outputs[2] && outputs[1] == outputs[5] && !outputs[1].front().empty();
    c.note(same, k.name, ": SIGFRAC_THREADS 1, 2, 5 ", same ? "byte-identical" : "differ or failed");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<std::string> only;
  std::string cli;
  app.add_option("--only", only, "run only these criteria (1..13, 5s)");
  app.add_option("--cli", cli, "sigfrac executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"1 generalized beta fit vs published parameters", table_one},
      {"2 g_n(1/2) special values at delta=1/2", gn_special_values},
      {"3 Rayleigh NBA Monte Carlo vs exact ccdf", rayleigh_oracle},
      {"4 no-fading Monte Carlo vs g_1 and the g_2, g_3 events", no_fading_oracle},
      {"5 arcsine conjecture at 2e7 samples", [] { return conjecture(20'000'000, 3e-4, 1.0 / 3000.0, 1800.0); }},
      {"6 upper bound on E[SF_1]", sf1_bound},
      {"7 random association beta law", rba_law},
      {"8 bound orientation of the small-t polynomials", bound_orientation},
      {"9 rational approximation order", rational_order},
      {"10 second-order tail expansion within 2% for t > 2/3", tail_quality},
      {"11 SF ratio means and log gaps", ratio_and_log_gap},
      {"12 second strongest SF at t = 1/8", second_strongest},
      {"13 determinism across SIGFRAC_THREADS", [&cli] { return determinism(cli); }},
      {"5s arcsine conjecture smoke run at 1e6 samples", [] { return conjecture(1'000'000, 5e-3, 1.0 / 300.0, 60.0); }},
  };
  const std::set<std::string> selected(only.begin(), only.end());
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const std::string id = name.substr(0, name.find(' '));
    if (!selected.empty() && !selected.count(id)) continue;
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.note(false, "exception: ", e.what());
    }
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << "\n";
    for (const auto& n : c.notes) std::cout << n << "\n";
    std::cout.flush();
    failed += !c.ok;
  }
  return failed == 0 ? 0 : 1;
}
