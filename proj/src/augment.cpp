#include "ati/augment.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ati {

void check_augment_config(const AugmentConfig& config) {
  if (!(config.dropout_prob >= 0.0 && config.dropout_prob <= 1.0)) {
    throw std::invalid_argument("dropout probability must lie in [0, 1]");
  }
  if (config.min_tracks < 1 || config.min_tracks > config.max_tracks) {
    throw std::invalid_argument("track counts must satisfy 1 <= min <= max");
  }
}

std::optional<int> draw_dropout_frame(int frame_count, double prob, Rng& rng) {
  if (!rng.bernoulli(prob)) return std::nullopt;
  return static_cast<int>(rng.uniform_int(0, frame_count));
}

Trajectory truncate_after(const Trajectory& traj, int t_d) {
  Trajectory out = traj;
  const auto first = traj.first_visible();
  const long keep = std::max<long>(t_d, first ? static_cast<long>(*first) : 0);
  for (std::size_t t = static_cast<std::size_t>(keep) + 1; t < out.points.size(); ++t) {
    out.points[t].visible = false;
  }
  return out;
}

Trajectory tail_dropout(const Trajectory& traj, const AugmentConfig& config, Rng& rng) {
  const auto t_d = draw_dropout_frame(static_cast<int>(traj.points.size()), config.dropout_prob, rng);
  return t_d ? truncate_after(traj, *t_d) : traj;
}

TrajectorySet tail_dropout(const TrajectorySet& set, const AugmentConfig& config) {
  check_augment_config(config);
  TrajectorySet out = set;
  if (config.per_clip) {
    auto rng = Rng::substream(config.seed, "clip");
    if (const auto t_d = draw_dropout_frame(set.frame_count, config.dropout_prob, rng)) {
      for (auto& traj : out.tracks) traj = truncate_after(traj, *t_d);
    }
    return out;
  }
  for (auto& traj : out.tracks) {
    auto rng = Rng::substream(config.seed, traj.id);
    traj = tail_dropout(traj, config, rng);
  }
  return out;
}

TrajectorySet subsample_tracks(const TrajectorySet& set, const AugmentConfig& config, Rng& rng) {
  check_augment_config(config);
  const int n = static_cast<int>(set.tracks.size());
  if (n == 0) throw std::invalid_argument("cannot subsample an empty track list");
  const int hi = std::min(config.max_tracks, n);
  const int lo = std::min(config.min_tracks, hi);
  const int k = static_cast<int>(rng.uniform_int(lo, hi));

  // Partial Fisher-Yates over indices.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<int>(rng.uniform_int(i, n - 1));
    std::swap(idx[i], idx[j]);
  }
  std::sort(idx.begin(), idx.begin() + k);

  TrajectorySet out{set.width, set.height, set.frame_count, {}};
  out.tracks.reserve(k);
  for (int i = 0; i < k; ++i) out.tracks.push_back(set.tracks[idx[i]]);
  return out;
}

TrajectorySet augment(const TrajectorySet& set, const AugmentConfig& config) {
  auto dropped = tail_dropout(set, config);
  if (dropped.tracks.empty()) return dropped;
  auto rng = Rng::substream(config.seed, "subsample");
  return subsample_tracks(dropped, config, rng);
}

}  // namespace ati
