#pragma once

#include <span>
#include <vector>

#include "ati/core.hpp"

namespace ati {

/// Weights below this are stored as exactly zero.
inline constexpr double kWeightFloor = 1e-6;

/// The Gaussian width actually used by the weight formula. Distances are
/// measured in latent cells and multiplied by `distance_scale` first; the
/// paper-normalized mode uses this to express distances as a fraction of the
/// latent grid diagonal.
struct EffectiveSigma {
  double sigma = 1.0;
  double distance_scale = 1.0;
};

EffectiveSigma resolve_sigma(const InjectorConfig& config, int grid_height, int grid_width);

struct LatentCell {
  int col = 0;
  int row = 0;
};

/// exp(-|phi - cell|^2 / (2 sigma)). The denominator is 2*sigma, not
/// 2*sigma^2.
double gaussian_weight(Point2 phi, LatentCell cell, double sigma);
double gaussian_weight(Point2 phi, LatentCell cell, const EffectiveSigma& sigma);

/// Bilinear read of all channels at a continuous latent position. Positions
/// are clamped into [0, W'-1] x [0, H'-1] first; lattice points return the
/// stored values exactly.
std::vector<double> sample_feature(const LatentGrid& grid, Point2 p);

struct WeightPlane {
  int height = 0;
  int width = 0;
  std::vector<double> weights;

  double at(int row, int col) const { return weights[static_cast<std::size_t>(row) * width + col]; }
};

/// Per-frame Gaussian mask of one track point. All zero when the point is
/// invisible or unlocated.
WeightPlane frame_mask(const TrackPoint& tp, int grid_height, int grid_width,
                       const EffectiveSigma& sigma, const InjectorConfig& config);

/// T' x H' x W' x (C+1) tensor: C feature channels followed by the aggregate
/// weight channel. Frame-major, row-major, channel-minor.
class ConditionTensor {
 public:
  ConditionTensor() = default;
  ConditionTensor(int latent_frames, int height, int width, int channels);
  ConditionTensor(int latent_frames, int height, int width, int channels,
                  std::vector<double> values);

  int latent_frames() const { return frames_; }
  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  int feature_channels() const { return channels_ - 1; }

  double& at(int frame, int row, int col, int ch) { return values_[index(frame, row, col, ch)]; }
  double at(int frame, int row, int col, int ch) const {
    return values_[index(frame, row, col, ch)];
  }
  double weight(int frame, int row, int col) const { return at(frame, row, col, channels_ - 1); }

  /// Channel values of one pixel.
  std::span<const double> pixel(int frame, int row, int col) const {
    return {values_.data() + index(frame, row, col, 0), static_cast<std::size_t>(channels_)};
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  friend bool operator==(const ConditionTensor&, const ConditionTensor&) = default;

 private:
  std::size_t index(int frame, int row, int col, int ch) const {
    return ((static_cast<std::size_t>(frame) * height_ + row) * width_ + col) * channels_ + ch;
  }

  int frames_ = 0;
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

/// Builds the trajectory condition for `set` over the image latent `grid`.
/// Throws ValidationError when the set has invariant violations and
/// DimensionError when the grid does not match the set's image size.
/// `threads` only splits work across latent frames; output is identical for
/// any value.
ConditionTensor compose_condition(const TrajectorySet& set, const LatentGrid& grid,
                                  const InjectorConfig& config, int threads = 1);

/// Mixes the condition into a base latent stream (one grid per latent frame).
std::vector<LatentGrid> blend_with_base(const ConditionTensor& cond,
                                        std::span<const LatentGrid> base, BlendMode mode);

/// Alternative to blending: base channels followed by all condition channels.
std::vector<LatentGrid> concat_with_base(const ConditionTensor& cond,
                                         std::span<const LatentGrid> base);
}  // namespace ati
