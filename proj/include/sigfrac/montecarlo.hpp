#pragma once

// Monte Carlo engine for signal fractions. The path loss process with
// intensity measure r^delta is generated in one dimension: xi_k^delta are the
// arrival times of a unit-rate Poisson process. Every realization draws from
// its own counter-based stream keyed by (seed, realization index), so results
// do not depend on the number of worker threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sigfrac/error.hpp"
#include "sigfrac/params.hpp"

namespace sigfrac {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11), usable as a
/// UniformRandomBitGenerator. Counter words 0-1 hold the stream id, 2-3 the
/// block index within the stream.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0, 0} {}

  result_type operator()() {
    if (pos_ == 4) {
      out_ = block(ctr_, key_);
      if (++ctr_[2] == 0) ++ctr_[3];
      pos_ = 0;
    }
    return out_[pos_++];
  }

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53} * c[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57} * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
      k[0] += 0x9E3779B9;
      k[1] += 0xBB67AE85;
    }
    return c;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> out_{};
  int pos_ = 4;
};

using Rng = Philox4x32;

struct FadingModel {
  enum class Kind { none, nakagami };
  Kind kind = Kind::none;
  double m = 1.0;

  static FadingModel none() { return {}; }
  static FadingModel nakagami(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("nakagami: m must be positive");
    return {Kind::nakagami, m};
  }
  /// E[h^2] of the power gain.
  double second_moment() const { return kind == Kind::none ? 1.0 : 1.0 + 1.0 / m; }
  std::string to_string() const {
    if (kind == Kind::none) return "none";
    std::ostringstream os;
    os << "nakagami:" << m;
    return os.str();
  }
};

struct AssociationRule {
  enum class Kind { nba, isba, rba, kth_strongest };
  Kind kind = Kind::nba;
  int k = 1;

  static AssociationRule nba() { return {Kind::nba, 1}; }
  static AssociationRule isba() { return {Kind::isba, 1}; }
  static AssociationRule rba() { return {Kind::rba, 1}; }
  static AssociationRule kth_strongest(int k) {
    if (k < 1) throw DomainError("kth_strongest: k must be >= 1");
    return {Kind::kth_strongest, k};
  }
  std::string to_string() const {
    switch (kind) {
      case Kind::nba: return "nba";
      case Kind::isba: return "isba";
      case Kind::rba: return "rba";
      case Kind::kth_strongest: return "kth:" + std::to_string(k);
    }
    return "?";
  }
};

struct SimConfig {
  NetworkParams params = NetworkParams::from_delta(0.5);
  FadingModel fading;
  AssociationRule assoc;
  std::uint64_t samples = 100000;
  int point_budget = 200000;
  double tail_eps = 1e-3;
  double tail_floor = 1e-3;  // see TruncationScale
  std::uint64_t seed = 1;
  int threads = 0;  // 0: SIGFRAC_THREADS, else hardware concurrency

  void validate() const {
    if (samples < 1) throw DomainError("SimConfig: samples must be >= 1");
    if (point_budget < 10) throw DomainError("SimConfig: point_budget must be >= 10");
    if (!(tail_eps > 0.0 && tail_eps < 1.0)) throw DomainError("SimConfig: tail_eps must lie in (0,1)");
    if (!(tail_floor > 0.0 && tail_floor <= 1.0)) throw DomainError("SimConfig: tail_floor must lie in (0,1]");
    if (threads < 0) throw DomainError("SimConfig: threads must be >= 0");
    if (assoc.kind == AssociationRule::Kind::rba && fading.kind != FadingModel::Kind::none) {
      throw DomainError("SimConfig: rba is defined without fading");
    }
  }
};

/// One network realization seen from the typical user.
struct Realization {
  std::vector<double> xi;     // path losses, increasing
  std::vector<double> power;  // received powers h_k / xi_k
  double tail_power = 0.0;    // expected power of the points beyond the last one
  double total = 0.0;         // sum of power plus tail_power
  double arrival = 0.0;       // xi_K^delta of the last point
  bool flagged = false;       // point budget ran out first

  /// The n largest signal fractions, decreasing.
  std::vector<double> top_fractions(int n) const {
    std::vector<double> p = power;
    const auto m = std::min<std::size_t>(n, p.size());
    std::partial_sort(p.begin(), p.begin() + m, p.end(), std::greater<>());
    p.resize(m);
    for (double& v : p) v /= total;
    return p;
  }
};

inline double sample_nakagami(double m, Rng& rng) {
  if (!(m > 0.0)) throw DomainError("sample_nakagami: m must be positive");
  return std::gamma_distribution<double>(m, 1.0 / m)(rng);
}

/// The power the truncation error is measured against: the accumulated power
/// without the leading points. With the serving point excluded this is the
/// interference, floored at `floor` times the accumulated power so that
/// realizations with almost no interference stay affordable. For the k-th
/// strongest (k >= 2) the first k-1 points are excluded, which keeps SF_k and
/// the power beyond it resolved, and no floor is needed.
struct TruncationScale {
  enum class Exclude { none, first, strongest };
  Exclude exclude = Exclude::none;
  int points = 0;  // number of leading points excluded when exclude == first
  double floor = 0.0;

  static TruncationScale for_rule(const AssociationRule& rule, double floor) {
    switch (rule.kind) {
      case AssociationRule::Kind::nba: return {Exclude::first, 1, floor};
      case AssociationRule::Kind::isba: return {Exclude::strongest, 0, floor};
      case AssociationRule::Kind::rba: return {Exclude::none, 0, 0.0};
      case AssociationRule::Kind::kth_strongest:
        if (rule.k == 1) return {Exclude::first, 1, floor};
        return {Exclude::first, rule.k - 1, 0.0};
    }
    return {};
  }
};

/// Generates points until the standard deviation of the remaining power,
/// sqrt(E[h^2] delta/(2-delta) xi_K^(delta-2)), is below tail_eps times the
/// scale power, then adds the tail's mean delta/(1-delta) xi_K^(delta-1).
inline void sample_plp(const NetworkParams& params, const FadingModel& fading, int point_budget,
                       double tail_eps, Rng& rng, Realization& out, const TruncationScale& scale = {}) {
  const double d = params.delta();
  const double inv_d = 1.0 / d;
  const double var_coeff = fading.second_moment() * d / (2.0 - d);
  const double mean_coeff = d / (1.0 - d);
  out.xi.clear();
  out.power.clear();
  out.flagged = false;
  std::exponential_distribution<double> arrival(1.0);
  std::gamma_distribution<double> gain(fading.m, 1.0 / fading.m);
  const bool faded = fading.kind == FadingModel::Kind::nakagami;
  double gamma = 0.0, acc = 0.0, head = 0.0, xi = 0.0;
  for (int k = 0;; ++k) {
    if (k == point_budget) {
      out.flagged = true;
      break;
    }
    gamma += arrival(rng);
    xi = std::pow(gamma, inv_d);
    const double p = (faded ? gain(rng) : 1.0) / xi;
    out.xi.push_back(xi);
    out.power.push_back(p);
    acc += p;
    if (scale.exclude == TruncationScale::Exclude::first && k < scale.points) head += p;
    if (scale.exclude == TruncationScale::Exclude::strongest) head = std::max(head, p);
    const double ref = std::max(acc - head, scale.floor * acc) * tail_eps;
    // xi^(delta-2) = gamma / xi^2
    if (var_coeff * gamma / (xi * xi) < ref * ref) break;
  }
  out.tail_power = xi > 0.0 ? mean_coeff * gamma / xi : 0.0;
  out.total = acc + out.tail_power;
  out.arrival = gamma;
}

/// Path losses only (no fading).
inline std::vector<double> sample_plp(const NetworkParams& params, int point_budget, double tail_eps, Rng& rng,
                                      const TruncationScale& scale = {}) {
  Realization r;
  sample_plp(params, FadingModel::none(), point_budget, tail_eps, rng, r, scale);
  return r.xi;
}

/// Signal fraction of the serving station under the configured rule.
inline double select_sf(const SimConfig& config, const Realization& r, Rng& rng) {
  const AssociationRule& rule = config.assoc;
  switch (rule.kind) {
    case AssociationRule::Kind::nba:
      return r.power.front() / r.total;
    case AssociationRule::Kind::isba:
      return *std::max_element(r.power.begin(), r.power.end()) / r.total;
    case AssociationRule::Kind::rba: {
      const double u = std::uniform_real_distribution<double>(0.0, r.total)(rng);
      double cum = 0.0;
      for (double p : r.power) {
        cum += p;
        if (u < cum) return p / r.total;
      }
      // u fell in the ungenerated tail: continue the process past the last point
      std::exponential_distribution<double> arrival(1.0);
      std::gamma_distribution<double> gain(config.fading.m, 1.0 / config.fading.m);
      const bool faded = config.fading.kind == FadingModel::Kind::nakagami;
      const double inv_d = 1.0 / config.params.delta();
      double gamma = r.arrival, p = r.power.back();
      for (std::size_t k = r.power.size(); k < static_cast<std::size_t>(config.point_budget); ++k) {
        gamma += arrival(rng);
        p = (faded ? gain(rng) : 1.0) / std::pow(gamma, inv_d);
        cum += p;
        if (u < cum) break;
      }
      return p / r.total;
    }
    case AssociationRule::Kind::kth_strongest: {
      if (static_cast<int>(r.power.size()) < rule.k) return 0.0;
      return r.top_fractions(rule.k).back();
    }
  }
  return 0.0;
}

inline int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SIGFRAC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `samples` realizations and returns f(realization, rng) for each, in
/// realization order. Aborts if more than 0.1% ran out of point budget;
/// otherwise the number that did is stored in `flagged_count` if given.
template <class F>
auto simulate(const SimConfig& config, F&& f, std::uint64_t* flagged_count = nullptr) {
  config.validate();
  using R = decltype(f(std::declval<const Realization&>(), std::declval<Rng&>()));
  const std::uint64_t n = config.samples;
  std::vector<R> results(n);
  const auto scale = TruncationScale::for_rule(config.assoc, config.tail_floor);
  const int workers = static_cast<int>(std::min<std::uint64_t>(worker_count(config.threads), n));
  std::vector<std::uint64_t> flagged(workers, 0);
  auto run = [&](int w) {
    Realization r;
    for (std::uint64_t i = n * w / workers; i < n * (w + 1) / workers; ++i) {
      Rng rng(config.seed, i);
      sample_plp(config.params, config.fading, config.point_budget, config.tail_eps, rng, r, scale);
      if (r.flagged) ++flagged[w];
      results[i] = f(static_cast<const Realization&>(r), rng);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  std::uint64_t total_flagged = 0;
  for (auto c : flagged) total_flagged += c;
  if (total_flagged * 1000 > n) {
    std::ostringstream os;
    os << "simulate: " << total_flagged << " of " << n
       << " realizations exhausted the point budget of " << config.point_budget;
    throw NumericError(os.str(), static_cast<double>(total_flagged) / n);
  }
  if (flagged_count) *flagged_count = total_flagged;
  return results;
}

class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
    std::sort(sorted_.begin(), sorted_.end());
    if (!sorted_.empty() && (sorted_.front() < 0.0 || sorted_.back() > 1.0)) {
      throw DomainError("EmpiricalDistribution: samples must lie in [0,1]");
    }
  }
  const std::vector<double>& sorted_samples() const { return sorted_; }
  std::size_t count() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

inline void require_samples(const EmpiricalDistribution& dist) {
  if (dist.count() == 0) throw DomainError("empty empirical distribution");
}

/// Fraction of samples strictly above t.
inline double empirical_ccdf(const EmpiricalDistribution& dist, double t) {
  require_samples(dist);
  const auto& s = dist.sorted_samples();
  return static_cast<double>(s.end() - std::upper_bound(s.begin(), s.end(), t)) / s.size();
}

inline double empirical_moment(const EmpiricalDistribution& dist, int k) {
  require_samples(dist);
  long double sum = 0.0L;
  for (double x : dist.sorted_samples()) sum += std::pow(static_cast<long double>(x), k);
  return static_cast<double>(sum / dist.count());
}

/// sup |F_emp - F| over the sample points (both one-sided limits).
template <class Cdf>
double ks_distance(const EmpiricalDistribution& dist, Cdf&& cdf) {
  require_samples(dist);
  const auto& s = dist.sorted_samples();
  const double n = static_cast<double>(s.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    sup = std::max({sup, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return sup;
}

inline EmpiricalDistribution sample_sf(const SimConfig& config, std::uint64_t* flagged_count = nullptr) {
  return EmpiricalDistribution(simulate(
      config, [&config](const Realization& r, Rng& rng) { return select_sf(config, r, rng); }, flagged_count));
}

/// k-th moment of the arcsine law, C(2k,k)/4^k.
inline double arcsine_moment(int k) {
  double m = 1.0;
  for (int j = 1; j <= k; ++j) m *= (2.0 * j - 1.0) / (2.0 * j);
  return m;
}

inline double arcsine_cdf(double t) {
  return 2.0 * std::asin(std::sqrt(std::clamp(t, 0.0, 1.0))) / std::numbers::pi;
}

struct ConjectureReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::array<double, 10> empirical_moments{};
  std::array<double, 10> arcsine_moments{};
  std::array<double, 10> relative_differences{};
  double ks_distance = 0.0;
};

/// NBA with Nakagami-1/2 fading at alpha = 4 against the arcsine law.
inline ConjectureReport conjecture_report(std::uint64_t samples, std::uint64_t seed, int threads = 0) {
  SimConfig c;
  c.params = NetworkParams::from_alpha(4.0);
  c.fading = FadingModel::nakagami(0.5);
  c.assoc = AssociationRule::nba();
  c.samples = samples;
  c.seed = seed;
  c.threads = threads;
  const EmpiricalDistribution dist = sample_sf(c);
  ConjectureReport rep;
  rep.samples = samples;
  rep.seed = seed;
  std::array<long double, 10> sums{};
  for (double x : dist.sorted_samples()) {
    long double p = 1.0L;
    for (auto& s : sums) s += (p *= x);
  }
  for (int k = 1; k <= 10; ++k) {
    rep.empirical_moments[k - 1] = static_cast<double>(sums[k - 1] / dist.count());
    rep.arcsine_moments[k - 1] = arcsine_moment(k);
    rep.relative_differences[k - 1] = rep.empirical_moments[k - 1] / rep.arcsine_moments[k - 1] - 1.0;
  }
  rep.ks_distance = ks_distance(dist, arcsine_cdf);
  return rep;
}

}  // namespace sigfrac
