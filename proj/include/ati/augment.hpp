#pragma once

#include <cstdint>
#include <optional>

#include "ati/core.hpp"
#include "ati/rng.hpp"

namespace ati {

struct AugmentConfig {
  double dropout_prob = 0.2;
  int min_tracks = 1;
  int max_tracks = 20;
  std::uint64_t seed = 0;
  /// One dropout frame shared by every track of a clip instead of one per track.
  bool per_clip = false;
};

/// Throws std::invalid_argument unless 0 <= p <= 1 and 1 <= min <= max.
void check_augment_config(const AugmentConfig& config);

/// Bernoulli(p) branch; when it fires, t_d ~ U{0, ..., frame_count}.
std::optional<int> draw_dropout_frame(int frame_count, double prob, Rng& rng);

/// Marks every frame strictly after `t_d` invisible; positions are kept. The
/// first visible frame is never hidden, so the track keeps a feature source.
Trajectory truncate_after(const Trajectory& traj, int t_d);

Trajectory tail_dropout(const Trajectory& traj, const AugmentConfig& config, Rng& rng);

/// Tail dropout over a whole set. Per-track mode draws from
/// Rng::substream(seed, track id), so the result does not depend on track
/// order; per-clip mode makes one draw from Rng::substream(seed, "clip").
TrajectorySet tail_dropout(const TrajectorySet& set, const AugmentConfig& config);

/// Keeps k ~ U{min, ..., min(max, n)} tracks chosen uniformly without
/// replacement, in their original order.
TrajectorySet subsample_tracks(const TrajectorySet& set, const AugmentConfig& config, Rng& rng);

/// Tail dropout followed by subsampling, both keyed by config.seed.
TrajectorySet augment(const TrajectorySet& set, const AugmentConfig& config);

}  // namespace ati
