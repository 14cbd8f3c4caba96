#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eventflow/rng.hpp"
#include "eventflow/sequences.hpp"

namespace eventflow {

enum class SimKind {
  hawkes1,
  hawkes2,
  nonstationary_poisson,
  nonstationary_renewal,
  stationary_renewal,
  self_correcting,
  homogeneous_poisson,
};

inline SimKind sim_kind_from_string(const std::string& s) {
  if (s == "hawkes1") return SimKind::hawkes1;
  if (s == "hawkes2") return SimKind::hawkes2;
  if (s == "nonstationary_poisson" || s == "nsp") return SimKind::nonstationary_poisson;
  if (s == "nonstationary_renewal" || s == "nsr") return SimKind::nonstationary_renewal;
  if (s == "stationary_renewal" || s == "sr") return SimKind::stationary_renewal;
  if (s == "self_correcting" || s == "sc") return SimKind::self_correcting;
  if (s == "homogeneous_poisson" || s == "hp") return SimKind::homogeneous_poisson;
  throw std::invalid_argument("unknown simulator kind: " + s);
}

inline std::string sim_kind_name(SimKind k) {
  switch (k) {
    case SimKind::hawkes1: return "hawkes1";
    case SimKind::hawkes2: return "hawkes2";
    case SimKind::nonstationary_poisson: return "nonstationary_poisson";
    case SimKind::nonstationary_renewal: return "nonstationary_renewal";
    case SimKind::stationary_renewal: return "stationary_renewal";
    case SimKind::self_correcting: return "self_correcting";
    default: return "homogeneous_poisson";
  }
}

struct SimulatorSpec {
  SimKind kind = SimKind::homogeneous_poisson;
  std::map<std::string, double> params;
  double support_end = 100.0;

  double param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw std::invalid_argument("missing simulator parameter: " + name);
    return it->second;
  }
};

// Parameters calibrated so that 1000-sequence mean counts land on the
// benchmark statistics (Hawkes kernels are alpha * beta * exp(-beta * tau),
// so the branching ratio is alpha itself).
inline SimulatorSpec default_spec(SimKind kind, double support_end = 100.0) {
  SimulatorSpec spec;
  spec.kind = kind;
  spec.support_end = support_end;
  switch (kind) {
    case SimKind::hawkes1:
      spec.params = {{"mu", 0.2}, {"alpha1", 0.8}, {"beta1", 1.0}};
      break;
    case SimKind::hawkes2:
      spec.params = {{"mu", 0.2}, {"alpha1", 0.4}, {"beta1", 1.0}, {"alpha2", 0.4}, {"beta2", 20.0}};
      break;
    case SimKind::nonstationary_poisson:
      spec.params = {{"base", 1.0}, {"amplitude", 0.99}, {"period", support_end}};
      break;
    case SimKind::nonstationary_renewal:
      spec.params = {{"log_sigma", 0.3}, {"base", 1.0}, {"amplitude", 0.99}, {"period", support_end}};
      break;
    case SimKind::stationary_renewal:
      spec.params = {{"log_sigma", 1.5}};
      break;
    case SimKind::self_correcting:
      spec.params = {{"mu", 1.0}, {"alpha", 1.0}};
      break;
    case SimKind::homogeneous_poisson:
      spec.params = {{"rate", 1.0}};
      break;
  }
  return spec;
}

// Conditional intensity / bound as functions of (candidate time, events so far).
using IntensityFn = std::function<double(double t, std::span<const double> history)>;

// Ogata thinning with a locally valid bound: upper_bound(t, history) must
// dominate the intensity from t until the next proposal. Each proposal
// (accepted or not) advances the clock and refreshes the bound, so a bound
// equal to the current intensity works for intensities that decay between
// events. Bound violations abort rather than silently biasing the draw.
inline EventSequence thinning_sample(const IntensityFn& intensity, const IntensityFn& upper_bound,
                                     double support_end, Rng& rng) {
  std::vector<double> events;
  double t = 0.0;
  for (;;) {
    const double bound = upper_bound(t, events);
    if (bound < 0.0) throw std::runtime_error("thinning_sample: negative bound");
    if (bound == 0.0) break;
    t += rng.exponential(bound);
    if (t > support_end) break;
    const double lam = intensity(t, events);
    if (lam > bound * (1.0 + 1e-9))
      throw std::runtime_error("thinning_sample: intensity " + std::to_string(lam) +
                               " exceeds bound " + std::to_string(bound) + " at t=" + std::to_string(t));
    if (rng.uniform() * bound < lam) events.push_back(t);
  }
  return make_sequence(std::move(events), support_end);
}

namespace detail {

struct HawkesKernel {
  double alpha;  // branching mass of this kernel
  double beta;   // decay rate
};

inline EventSequence sample_hawkes(double mu, const std::vector<HawkesKernel>& kernels,
                                   double support_end, Rng& rng) {
  auto lambda = [mu, &kernels](double t, std::span<const double> history) {
    double rate = mu;
    for (double ti : history) {
      if (ti >= t) break;
      for (const auto& k : kernels) rate += k.alpha * k.beta * std::exp(-k.beta * (t - ti));
    }
    return rate;
  };
  // Between events the intensity only decays, so the current value bounds it.
  auto bound = [&lambda](double t, std::span<const double> history) {
    return lambda(t, history);
  };
  return thinning_sample(lambda, bound, support_end, rng);
}

inline EventSequence sample_sin_poisson(double base, double amplitude, double period,
                                        double support_end, Rng& rng) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto lambda = [=](double t, std::span<const double>) {
    return base + amplitude * std::sin(two_pi * t / period);
  };
  auto bound = [=](double, std::span<const double>) { return base + amplitude; };
  return thinning_sample(lambda, bound, support_end, rng);
}

// Lognormal renewal with unit mean gap: mu_log = -sigma_log^2 / 2.
inline EventSequence sample_stationary_renewal(double sigma_log, double support_end, Rng& rng) {
  const double mu_log = -0.5 * sigma_log * sigma_log;
  std::vector<double> events;
  double t = 0.0;
  for (;;) {
    t += rng.lognormal(mu_log, sigma_log);
    if (t > support_end) break;
    events.push_back(t);
  }
  return make_sequence(std::move(events), support_end);
}

// Renewal process in operational time tau = Lambda(t), mapped back through
// the inverse of Lambda(t) = base*t + amplitude*(period/2pi)*(1 - cos(2pi t/period)).
inline EventSequence sample_nonstationary_renewal(double sigma_log, double base, double amplitude,
                                                  double period, double support_end, Rng& rng) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto big_lambda = [=](double t) {
    return base * t + amplitude * (period / two_pi) * (1.0 - std::cos(two_pi * t / period));
  };
  auto rate = [=](double t) { return base + amplitude * std::sin(two_pi * t / period); };
  auto invert = [&](double tau, double lo) {
    // Lambda is increasing; bisect on [lo, support_end].
    double hi = support_end;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (big_lambda(mid) < tau)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-12 * support_end) break;
    }
    (void)rate;
    return 0.5 * (lo + hi);
  };

  const double mu_log = -0.5 * sigma_log * sigma_log;
  const double tau_end = big_lambda(support_end);
  std::vector<double> events;
  double tau = 0.0;
  double t_prev = 0.0;
  for (;;) {
    tau += rng.lognormal(mu_log, sigma_log);
    if (tau > tau_end) break;
    const double t = invert(tau, t_prev);
    events.push_back(t);
    t_prev = t;
  }
  return make_sequence(std::move(events), support_end);
}

// lambda*(t) = exp(mu*t - alpha*N(t)). Gaps invert exactly in log space, so
// no thinning (and no overflow for mu*t up to the support).
inline EventSequence sample_self_correcting(double mu, double alpha, double support_end, Rng& rng) {
  std::vector<double> events;
  double t = 0.0;
  double n = 0.0;
  for (;;) {
    const double x = mu * t - alpha * n;  // log intensity now
    const double u = rng.exponential(1.0);
    t += std::log1p(mu * u * std::exp(-x)) / mu;
    if (t > support_end) break;
    events.push_back(t);
    n += 1.0;
  }
  return make_sequence(std::move(events), support_end);
}

inline EventSequence sample_homogeneous_poisson(double rate, double support_end, Rng& rng) {
  std::vector<double> events;
  if (rate > 0.0) {
    double t = 0.0;
    for (;;) {
      t += rng.exponential(rate);
      if (t > support_end) break;
      events.push_back(t);
    }
  }
  return make_sequence(std::move(events), support_end);
}

}  // namespace detail

inline void validate_spec(const SimulatorSpec& spec) {
  switch (spec.kind) {
    case SimKind::hawkes1:
    case SimKind::hawkes2: {
      if (spec.param("mu") <= 0.0) throw std::invalid_argument("hawkes: mu must be positive");
      double branching = spec.param("alpha1");
      if (spec.param("beta1") <= 0.0) throw std::invalid_argument("hawkes: beta must be positive");
      if (spec.kind == SimKind::hawkes2) {
        branching += spec.param("alpha2");
        if (spec.param("beta2") <= 0.0) throw std::invalid_argument("hawkes: beta must be positive");
      }
      if (branching >= 1.0)
        throw std::invalid_argument("hawkes: branching ratio must be < 1 for stationarity");
      break;
    }
    case SimKind::nonstationary_poisson:
    case SimKind::nonstationary_renewal:
      if (spec.param("base") < spec.param("amplitude"))
        throw std::invalid_argument("sin rate: base must be >= amplitude (nonnegative intensity)");
      if (spec.param("period") <= 0.0) throw std::invalid_argument("sin rate: period must be positive");
      break;
    case SimKind::stationary_renewal:
      if (spec.param("log_sigma") <= 0.0) throw std::invalid_argument("renewal: log_sigma must be positive");
      break;
    case SimKind::self_correcting:
      if (spec.param("mu") <= 0.0 || spec.param("alpha") <= 0.0)
        throw std::invalid_argument("self_correcting: mu, alpha must be positive");
      break;
    case SimKind::homogeneous_poisson:
      if (spec.param("rate") < 0.0) throw std::invalid_argument("poisson: rate must be nonnegative");
      break;
  }
  if (spec.support_end <= 0.0) throw std::invalid_argument("support_end must be positive");
}

inline EventSequence simulate_one(const SimulatorSpec& spec, Rng& rng) {
  const double T = spec.support_end;
  switch (spec.kind) {
    case SimKind::hawkes1:
      return detail::sample_hawkes(spec.param("mu"),
                                   {{spec.param("alpha1"), spec.param("beta1")}}, T, rng);
    case SimKind::hawkes2:
      return detail::sample_hawkes(spec.param("mu"),
                                   {{spec.param("alpha1"), spec.param("beta1")},
                                    {spec.param("alpha2"), spec.param("beta2")}},
                                   T, rng);
    case SimKind::nonstationary_poisson:
      return detail::sample_sin_poisson(spec.param("base"), spec.param("amplitude"),
                                        spec.param("period"), T, rng);
    case SimKind::nonstationary_renewal:
      return detail::sample_nonstationary_renewal(spec.param("log_sigma"), spec.param("base"),
                                                  spec.param("amplitude"), spec.param("period"), T,
                                                  rng);
    case SimKind::stationary_renewal:
      return detail::sample_stationary_renewal(spec.param("log_sigma"), T, rng);
    case SimKind::self_correcting:
      return detail::sample_self_correcting(spec.param("mu"), spec.param("alpha"), T, rng);
    default:
      return detail::sample_homogeneous_poisson(spec.param("rate"), T, rng);
  }
}

// n independent draws. Each sequence uses its own (seed, index) stream, so
// the result does not depend on evaluation order.
inline TPPDataset simulate(const SimulatorSpec& spec, int n_sequences, std::uint64_t seed) {
  if (n_sequences <= 0) throw std::invalid_argument("simulate: n_sequences must be positive");
  validate_spec(spec);
  TPPDataset out;
  out.support_end = spec.support_end;
  out.split = Split::train;
  out.sequences.reserve(n_sequences);
  for (int i = 0; i < n_sequences; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    out.sequences.push_back(simulate_one(spec, rng));
  }
  return out;
}

}  // namespace eventflow
