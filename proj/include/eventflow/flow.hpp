#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "eventflow/rng.hpp"

namespace eventflow {

// Categorical distribution over event counts 0..n_max.
class CountDistribution {
 public:
  explicit CountDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("CountDistribution: empty support");
    double total = 0.0;
    for (double p : probs_) {
      if (p < 0.0) throw std::invalid_argument("CountDistribution: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6)
      throw std::invalid_argument("CountDistribution: probabilities must sum to 1");
    cumulative_.resize(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
    cumulative_.back() = 1.0;
  }

  static CountDistribution from_counts(const std::vector<int>& counts) {
    if (counts.empty()) throw std::invalid_argument("from_counts: empty sample");
    int n_max = 0;
    for (int c : counts) {
      if (c < 0) throw std::invalid_argument("from_counts: negative count");
      n_max = std::max(n_max, c);
    }
    std::vector<double> probs(n_max + 1, 0.0);
    for (int c : counts) probs[c] += 1.0 / counts.size();
    return CountDistribution(std::move(probs));
  }

  static CountDistribution point_mass(int n) {
    std::vector<double> probs(n + 1, 0.0);
    probs[n] = 1.0;
    return CountDistribution(std::move(probs));
  }

  int n_max() const { return static_cast<int>(probs_.size()) - 1; }
  const std::vector<double>& probs() const { return probs_; }

  double mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < probs_.size(); ++n) m += n * probs_[n];
    return m;
  }

  int sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                     static_cast<std::ptrdiff_t>(probs_.size()) - 1));
  }

 private:
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

// Reference TPP: a mixed binomial process whose count distribution is taken
// from the data and whose event positions are i.i.d. standard normal on the
// model scale (sequences are normalized into [-1, 1]).
struct ReferenceSpec {
  CountDistribution count_source;
};

// A balanced pair: equal-length sorted vectors at model scale.
struct CouplingDraw {
  Eigen::VectorXd gamma0;
  Eigen::VectorXd gamma1;
};

// Event positions mid-flow. The count stays fixed along the whole
// trajectory; order may break once noise or learned dynamics act on it.
struct FlowState {
  Eigen::VectorXd positions;
  double s = 0.0;
};

inline int sample_reference_counts(const CountDistribution& count_source, Rng& rng) {
  return count_source.sample(rng);
}

inline Eigen::VectorXd sorted_standard_normal(int n, Rng& rng) {
  std::vector<double> draws(n);
  for (double& d : draws) d = rng.normal();
  std::sort(draws.begin(), draws.end());
  return Eigen::Map<Eigen::VectorXd>(draws.data(), n);
}

// Draw from the balanced coupling: gamma1 passes through, gamma0 is N(gamma1)
// sorted standard-normal draws paired with gamma1 by rank.
inline CouplingDraw sample_balanced_pair(const Eigen::VectorXd& gamma1, Rng& rng) {
  return CouplingDraw{sorted_standard_normal(static_cast<int>(gamma1.size()), rng), gamma1};
}

inline FlowState interpolate(const CouplingDraw& pair, double s) {
  if (pair.gamma0.size() != pair.gamma1.size())
    throw std::invalid_argument("interpolate: coupling is not balanced");
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("interpolate: s outside [0, 1]");
  return FlowState{(1.0 - s) * pair.gamma0 + s * pair.gamma1, s};
}

inline FlowState perturb(const FlowState& state, double sigma, Rng& rng) {
  if (sigma <= 0.0) throw std::invalid_argument("perturb: sigma must be positive");
  FlowState out{state.positions, state.s};
  for (int k = 0; k < out.positions.size(); ++k) out.positions[k] += sigma * rng.normal();
  return out;
}

// The conditional velocity gamma1 - gamma0, constant in s.
inline Eigen::VectorXd target_velocity(const CouplingDraw& pair) {
  if (pair.gamma0.size() != pair.gamma1.size())
    throw std::invalid_argument("target_velocity: coupling is not balanced");
  return pair.gamma1 - pair.gamma0;
}

}  // namespace eventflow
