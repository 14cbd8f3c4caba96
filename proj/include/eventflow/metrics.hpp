#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eventflow/sequences.hpp"

namespace eventflow {

// Counting-process distance between two sorted sequences on [0, t_end]:
// matched-index L1 over the shorter length plus a boundary penalty
// (t_end - t) for each unmatched event of the longer sequence.
inline double sequence_distance(const std::vector<double>& a, const std::vector<double>& b,
                                double t_end) {
  const auto* shorter = &a;
  const auto* longer = &b;
  if (shorter->size() > longer->size()) std::swap(shorter, longer);
  double d = 0.0;
  for (std::size_t k = 0; k < longer->size(); ++k) {
    const double t = (*longer)[k];
    if (t > t_end) throw std::invalid_argument("sequence_distance: event beyond t_end");
    d += (k < shorter->size()) ? std::abs((*shorter)[k] - t) : (t_end - t);
  }
  for (double t : *shorter)
    if (t > t_end) throw std::invalid_argument("sequence_distance: event beyond t_end");
  return d;
}

inline double sequence_distance(const EventSequence& a, const EventSequence& b, double t_end) {
  return sequence_distance(a.events, b.events, t_end);
}

// Forecast reporting uses the window-relative distance divided by the
// horizon. Both sequences live in window coordinates [0, dt]; the distance
// is translation invariant, so this equals evaluating at absolute
// coordinates with t_end = t0 + dt.
inline double normalized_forecast_distance(const std::vector<double>& truth,
                                           const std::vector<double>& generated, double dt) {
  return sequence_distance(truth, generated, dt) / dt;
}

// Square symmetric matrix of pairwise distances at a fixed support.
struct DistanceMatrix {
  Eigen::MatrixXd d;
  double support_end = 0.0;
};

inline DistanceMatrix pairwise_distances(const std::vector<EventSequence>& seqs, double t_end) {
  const int n = static_cast<int>(seqs.size());
  DistanceMatrix out{Eigen::MatrixXd::Zero(n, n), t_end};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dij = sequence_distance(seqs[i], seqs[j], t_end);
      out.d(i, j) = dij;
      out.d(j, i) = dij;
    }
  return out;
}

struct MmdResult {
  double value = 0.0;
  double bandwidth = 0.0;        // sigma of the exponential kernel
  bool degenerate_bandwidth = false;
};

// MMD with kernel k(x, y) = exp(-d(x, y) / (2 sigma^2)), sigma the median of
// all pairwise distances over the pooled samples. Biased V-statistic
// (diagonal included), square-rooted; nonnegative by construction.
inline MmdResult mmd(const std::vector<EventSequence>& sample_a,
                     const std::vector<EventSequence>& sample_b, double t_end) {
  const int m = static_cast<int>(sample_a.size());
  const int n = static_cast<int>(sample_b.size());
  if (m == 0 || n == 0) throw std::invalid_argument("mmd: both samples must be nonempty");

  std::vector<const EventSequence*> pool;
  pool.reserve(m + n);
  for (const auto& s : sample_a) pool.push_back(&s);
  for (const auto& s : sample_b) pool.push_back(&s);

  const int p = m + n;
  Eigen::MatrixXd dist(p, p);
  std::vector<double> offdiag;
  offdiag.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
  for (int i = 0; i < p; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < p; ++j) {
      const double dij = sequence_distance(*pool[i], *pool[j], t_end);
      dist(i, j) = dij;
      dist(j, i) = dij;
      offdiag.push_back(dij);
    }
  }

  auto mid = offdiag.begin() + offdiag.size() / 2;
  std::nth_element(offdiag.begin(), mid, offdiag.end());
  double sigma = *mid;
  MmdResult out;
  if (sigma <= 0.0) {
    sigma = 1e-8;
    out.degenerate_bandwidth = true;
  }
  out.bandwidth = sigma;

  const Eigen::MatrixXd kernel = (-dist.array() / (2.0 * sigma * sigma)).exp();
  const double kaa = kernel.topLeftCorner(m, m).sum() / (static_cast<double>(m) * m);
  const double kbb = kernel.bottomRightCorner(n, n).sum() / (static_cast<double>(n) * n);
  const double kab = kernel.topRightCorner(m, n).sum() / (static_cast<double>(m) * n);
  out.value = std::sqrt(std::max(0.0, kaa + kbb - 2.0 * kab));
  return out;
}

struct MareResult {
  double value = 0.0;
  int n_pairs = 0;     // pairs actually averaged
  int excluded = 0;    // zero-truth windows dropped
};

// Mean absolute relative error of predicted event counts. Windows with a
// zero true count cannot be scored and are excluded (count reported).
inline MareResult mare(const std::vector<int>& truth_counts,
                       const std::vector<int>& predicted_counts) {
  if (truth_counts.size() != predicted_counts.size())
    throw std::invalid_argument("mare: size mismatch");
  MareResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth_counts.size(); ++i) {
    if (truth_counts[i] <= 0) {
      ++out.excluded;
      continue;
    }
    sum += std::abs(predicted_counts[i] - truth_counts[i]) / static_cast<double>(truth_counts[i]);
    ++out.n_pairs;
  }
  if (out.n_pairs == 0) throw std::invalid_argument("mare: no scorable pairs");
  out.value = sum / out.n_pairs;
  return out;
}

struct MseResult {
  double value = 0.0;
  int n_pairs = 0;
  int excluded = 0;   // pairs where either window was empty
};

// MSE between the first true and first generated event time of each window.
inline MseResult single_step_mse(const std::vector<std::vector<double>>& truth_windows,
                                 const std::vector<std::vector<double>>& generated_windows) {
  if (truth_windows.size() != generated_windows.size())
    throw std::invalid_argument("single_step_mse: size mismatch");
  MseResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth_windows.size(); ++i) {
    if (truth_windows[i].empty() || generated_windows[i].empty()) {
      ++out.excluded;
      continue;
    }
    const double e = truth_windows[i].front() - generated_windows[i].front();
    sum += e * e;
    ++out.n_pairs;
  }
  if (out.n_pairs == 0) throw std::invalid_argument("single_step_mse: no scorable pairs");
  out.value = sum / out.n_pairs;
  return out;
}

// Report payload emitted by the evaluate CLI.
inline nlohmann::json metric_report(const std::string& metric, double value, int n_pairs,
                                    int excluded, std::optional<double> std_over_seeds = {}) {
  nlohmann::json rep;
  rep["metric"] = metric;
  rep["value"] = value;
  rep["n_pairs"] = n_pairs;
  rep["excluded"] = excluded;
  if (std_over_seeds) rep["std_over_seeds"] = *std_over_seeds;
  return rep;
}

}  // namespace eventflow
