#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace eventflow {

// A finite event sequence on the bounded support [0, support_end].
// Times are strictly increasing and stored at data scale; normalization to
// model scale happens only at model boundaries.
struct EventSequence {
  std::vector<double> events;
  double support_end = 0.0;
};

inline int count(const EventSequence& seq) {
  return static_cast<int>(seq.events.size());
}

// Validates and canonicalizes raw event times. Ties are broken by nudging
// later duplicates up by 1e-9 * support_end: the interpolant and the
// rank pairing both need a strict order, and the processes modeled here
// are simple (no coincident events).
inline EventSequence make_sequence(std::vector<double> events, double support_end) {
  if (!(support_end > 0.0) || !std::isfinite(support_end))
    throw std::invalid_argument("make_sequence: support_end must be positive and finite");
  for (double t : events) {
    if (!std::isfinite(t)) throw std::invalid_argument("make_sequence: non-finite event time");
    if (t < 0.0 || t > support_end)
      throw std::invalid_argument("make_sequence: event time outside [0, support_end]");
  }
  std::sort(events.begin(), events.end());
  const double eps = 1e-9 * support_end;
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i] <= events[i - 1]) events[i] = events[i - 1] + eps;
  }
  // A run of ties at the upper boundary can overshoot; push it back in.
  for (std::size_t i = events.size(); i-- > 1;) {
    if (events[i] > support_end) events[i] = support_end;
    if (i > 0 && events[i] <= events[i - 1]) events[i - 1] = events[i] - eps;
  }
  return EventSequence{std::move(events), support_end};
}

// Events in (window_start, window_end], re-expressed relative to the window.
inline EventSequence restrict(const EventSequence& seq, double window_start, double window_end) {
  if (!(0.0 <= window_start && window_start < window_end && window_end <= seq.support_end))
    throw std::invalid_argument("restrict: need 0 <= start < end <= support_end");
  EventSequence out;
  out.support_end = window_end - window_start;
  for (double t : seq.events) {
    if (t > window_start && t <= window_end) out.events.push_back(t - window_start);
  }
  return out;
}

enum class Split { train, val, test };

inline std::string split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    default: return "test";
  }
}

struct TPPDataset {
  std::vector<EventSequence> sequences;
  double support_end = 0.0;
  Split split = Split::train;
};

// Affine map between data scale [t_min, t_max] and model scale [-1, 1].
// Fit on the training split; out-of-range inputs are clamped on the model
// side (evaluation always happens at data scale).
class Normalizer {
 public:
  Normalizer(double t_min, double t_max) : t_min_(t_min), t_max_(t_max) {
    if (!(t_min < t_max)) throw std::invalid_argument("Normalizer: t_min must be < t_max");
  }

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  double normalize(double t) const {
    double z = 2.0 * (t - t_min_) / (t_max_ - t_min_) - 1.0;
    return std::clamp(z, -1.0, 1.0);
  }

  double denormalize(double z) const {
    return t_min_ + 0.5 * (z + 1.0) * (t_max_ - t_min_);
  }

  Eigen::VectorXd normalize(const EventSequence& seq) const {
    Eigen::VectorXd out(seq.events.size());
    for (int i = 0; i < out.size(); ++i) out[i] = normalize(seq.events[i]);
    return out;
  }

 private:
  double t_min_;
  double t_max_;
};

inline Normalizer fit_normalizer(const TPPDataset& train) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& seq : train.sequences) {
    for (double t : seq.events) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!(lo < hi)) throw std::invalid_argument("fit_normalizer: training data has no time spread");
  return Normalizer(lo, hi);
}

// 60/20/20 by sequence, in the order given.
inline std::array<TPPDataset, 3> split_dataset(std::vector<EventSequence> sequences, double support_end) {
  const std::size_t n = sequences.size();
  const std::size_t n_train = (n * 6) / 10;
  const std::size_t n_val = (n * 2) / 10;
  std::array<TPPDataset, 3> out;
  out[0] = {std::vector<EventSequence>(sequences.begin(), sequences.begin() + n_train), support_end, Split::train};
  out[1] = {std::vector<EventSequence>(sequences.begin() + n_train, sequences.begin() + n_train + n_val), support_end, Split::val};
  out[2] = {std::vector<EventSequence>(sequences.begin() + n_train + n_val, sequences.end()), support_end, Split::test};
  return out;
}

// ---------------------------------------------------------------------------
// Dataset directory format: train.jsonl / val.jsonl / test.jsonl, one record
// per line {"events": [...], "t_max": real}, plus meta.json.

inline void save_sequences_jsonl(const std::filesystem::path& file,
                                 const std::vector<EventSequence>& sequences) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  for (const auto& seq : sequences) {
    nlohmann::json rec;
    rec["events"] = seq.events;
    rec["t_max"] = seq.support_end;
    out << rec.dump() << "\n";
  }
}

inline std::vector<EventSequence> load_sequences_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file.string());
  std::vector<EventSequence> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto rec = nlohmann::json::parse(line);
    out.push_back(make_sequence(rec.at("events").get<std::vector<double>>(),
                                rec.at("t_max").get<double>()));
  }
  return out;
}

inline void save_dataset_dir(const std::filesystem::path& dir, const std::string& name,
                             std::uint64_t seed, const TPPDataset& train,
                             const TPPDataset& val, const TPPDataset& test) {
  std::filesystem::create_directories(dir);
  save_sequences_jsonl(dir / "train.jsonl", train.sequences);
  save_sequences_jsonl(dir / "val.jsonl", val.sequences);
  save_sequences_jsonl(dir / "test.jsonl", test.sequences);
  nlohmann::json meta;
  meta["support_end"] = train.support_end;
  meta["name"] = name;
  meta["seed"] = seed;
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << "\n";
}

struct DatasetMeta {
  double support_end = 0.0;
  std::string name;
  std::uint64_t seed = 0;
};

inline DatasetMeta load_dataset_meta(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw std::runtime_error("cannot open: " + (dir / "meta.json").string());
  nlohmann::json meta = nlohmann::json::parse(in);
  return DatasetMeta{meta.at("support_end").get<double>(), meta.at("name").get<std::string>(),
                     meta.value("seed", std::uint64_t{0})};
}

inline TPPDataset load_dataset_split(const std::filesystem::path& dir, Split split) {
  const DatasetMeta meta = load_dataset_meta(dir);
  TPPDataset out;
  out.sequences = load_sequences_jsonl(dir / (split_name(split) + ".jsonl"));
  out.support_end = meta.support_end;
  out.split = split;
  return out;
}

}  // namespace eventflow
