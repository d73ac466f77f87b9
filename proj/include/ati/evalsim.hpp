#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ati/core.hpp"

namespace ati {

using Rgb = std::array<double, 3>;

/// RGB image, values in [0, 1], row-major, channel-minor.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {0.0, 0.0, 0.0});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return values_.empty(); }

  double& at(int x, int y, int c) { return values_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return values_[index(x, y, c)]; }
  Rgb pixel(int x, int y) const { return {at(x, y, 0), at(x, y, 1), at(x, y, 2)}; }
  void set_pixel(int x, int y, Rgb rgb);

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3 + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

struct SyntheticVideo {
  std::vector<Image> frames;
  Rgb background{0.0, 0.0, 0.0};
};

/// Deterministic stand-in for a VAE encoder. Channels: patch mean R, G, B,
/// patch luma standard deviation, mean horizontal luma difference, mean
/// vertical luma difference, then zeros. Images whose sides are not
/// multiples of `stride` are padded by edge replication.
LatentGrid pseudo_encode(const Image& img, int stride, int channels);

/// `n` fully saturated colours with evenly spaced hues.
std::vector<Rgb> dot_palette(std::size_t n);

/// One frame per set frame; each visible point is an anti-aliased disc with
/// coverage from a 4x4 subpixel grid. Track k uses colors[k % colors.size()],
/// or dot_palette(track count) when `colors` is empty.
SyntheticVideo render_dots(const TrajectorySet& set, double radius,
                           std::span<const Rgb> colors = {}, Rgb background = {0.0, 0.0, 0.0});

/// Analytic point tracker. Each dot's colour is read at its start position in
/// frame 0; in every frame the tracker takes the coverage-weighted centroid of
/// matching pixels within 3 * radius of the previous estimate, and reports the
/// point invisible when too little matching coverage remains. Tracks are
/// named `ids[k]`, or "dot<k>" when `ids` is empty.
TrajectorySet track_dots(const SyntheticVideo& video, std::span<const Point2> starts,
                         double radius, std::span<const std::string> ids = {});

/// Writes frame_0000.png, frame_0001.png, ... into `dir`.
void save_video(const std::filesystem::path& dir, const SyntheticVideo& video);

}  // namespace ati
