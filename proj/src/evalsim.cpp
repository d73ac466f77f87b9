#include "ati/evalsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "ati/png_io.hpp"

namespace ati {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw DimensionError("image dimensions must be non-negative");
  values_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] = fill[k % 3];
}

void Image::set_pixel(int x, int y, Rgb rgb) {
  for (int c = 0; c < 3; ++c) at(x, y, c) = rgb[c];
}

namespace {

double luma(const Image& img, int x, int y) {
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
}

}  // namespace

LatentGrid pseudo_encode(const Image& img, int stride, int channels) {
  if (img.empty()) throw DimensionError("cannot encode an empty image");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (channels < 3) throw std::invalid_argument("pseudo encoder needs at least 3 channels");

  const int rows = (img.height() + stride - 1) / stride;
  const int cols = (img.width() + stride - 1) / stride;
  LatentGrid grid(rows, cols, channels);
  const int n = stride * stride;

  // Edge replication for padded patches.
  auto px = [&](int x) { return std::min(x, img.width() - 1); };
  auto py = [&](int y) { return std::min(y, img.height() - 1); };

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int x0 = c * stride;
      const int y0 = r * stride;
      // Sums are taken relative to the patch's first pixel so a constant
      // patch yields its value and zero spread exactly.
      const Rgb ref = img.pixel(px(x0), py(y0));
      const double lref = luma(img, px(x0), py(y0));
      Rgb dsum{0.0, 0.0, 0.0};
      double lsum = 0.0;
      double lsq = 0.0;
      double gx = 0.0;
      double gy = 0.0;
      for (int dy = 0; dy < stride; ++dy) {
        for (int dx = 0; dx < stride; ++dx) {
          const int x = px(x0 + dx);
          const int y = py(y0 + dy);
          for (int ch = 0; ch < 3; ++ch) dsum[ch] += img.at(x, y, ch) - ref[ch];
          const double l = luma(img, x, y);
          lsum += l - lref;
          lsq += (l - lref) * (l - lref);
          if (dx + 1 < stride) gx += luma(img, px(x0 + dx + 1), y) - l;
          if (dy + 1 < stride) gy += luma(img, x, py(y0 + dy + 1)) - l;
        }
      }
      for (int ch = 0; ch < 3; ++ch) grid.at(r, c, ch) = ref[ch] + dsum[ch] / n;
      const double lmean = lsum / n;
      const double pairs = double(stride) * (stride - 1);
      const double extra[3] = {std::sqrt(std::max(0.0, lsq / n - lmean * lmean)),
                               pairs > 0 ? gx / pairs : 0.0, pairs > 0 ? gy / pairs : 0.0};
      for (int k = 0; k < 3 && 3 + k < channels; ++k) grid.at(r, c, 3 + k) = extra[k];
    }
  }
  return grid;
}

std::vector<Rgb> dot_palette(std::size_t n) {
  std::vector<Rgb> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double h = 6.0 * double(k) / double(n);
    const int sector = static_cast<int>(h) % 6;
    const double f = h - std::floor(h);
    switch (sector) {
      case 0: out.push_back({1.0, f, 0.0}); break;
      case 1: out.push_back({1.0 - f, 1.0, 0.0}); break;
      case 2: out.push_back({0.0, 1.0, f}); break;
      case 3: out.push_back({0.0, 1.0 - f, 1.0}); break;
      case 4: out.push_back({f, 0.0, 1.0}); break;
      default: out.push_back({1.0, 0.0, 1.0 - f}); break;
    }
  }
  return out;
}

namespace {

constexpr int kSubsamples = 4;

void draw_disc(Image& img, Point2 center, double radius, const Rgb& color) {
  const int xmin = std::max(0, static_cast<int>(std::floor(center.x - radius)));
  const int ymin = std::max(0, static_cast<int>(std::floor(center.y - radius)));
  const int xmax = std::min(img.width() - 1, static_cast<int>(std::ceil(center.x + radius)));
  const int ymax = std::min(img.height() - 1, static_cast<int>(std::ceil(center.y + radius)));
  const double r2 = radius * radius;
  for (int y = ymin; y <= ymax; ++y) {
    for (int x = xmin; x <= xmax; ++x) {
      int inside = 0;
      for (int b = 0; b < kSubsamples; ++b) {
        for (int a = 0; a < kSubsamples; ++a) {
          const double sx = x + (a + 0.5) / kSubsamples - center.x;
          const double sy = y + (b + 0.5) / kSubsamples - center.y;
          inside += sx * sx + sy * sy <= r2 ? 1 : 0;
        }
      }
      if (inside == 0) continue;
      const double cov = double(inside) / (kSubsamples * kSubsamples);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = (1.0 - cov) * img.at(x, y, c) + cov * color[c];
    }
  }
}

}  // namespace

SyntheticVideo render_dots(const TrajectorySet& set, double radius, std::span<const Rgb> colors,
                           Rgb background) {
  if (!(radius >= 1.0)) throw std::invalid_argument("dot radius must be >= 1");
  std::vector<Rgb> palette(colors.begin(), colors.end());
  if (palette.empty()) palette = dot_palette(std::max<std::size_t>(1, set.tracks.size()));

  SyntheticVideo video{{}, background};
  video.frames.reserve(std::max(0, set.frame_count));
  for (int t = 0; t < set.frame_count; ++t) {
    Image frame(set.width, set.height, background);
    for (std::size_t k = 0; k < set.tracks.size(); ++k) {
      const auto& tp = set.tracks[k].points.at(t);
      if (tp.visible && tp.pos) draw_disc(frame, *tp.pos, radius, palette[k % palette.size()]);
    }
    video.frames.push_back(std::move(frame));
  }
  return video;
}

namespace {

// A pixel matches when its offset from the background is nearly parallel to
// the dot colour's offset: perpendicular residual <= kMaxTangent * projection.
constexpr double kMaxTangent = 0.25;
constexpr double kMinCoverage = 0.05;
// Minimum matched coverage, as a fraction of the full disc area.
constexpr double kMinMass = 0.3;

struct Signature {
  Rgb dir{};
  double norm2 = 0.0;
};

std::optional<Point2> locate(const Image& frame, const Rgb& bg, const Signature& sig, Point2 prev,
                             double radius) {
  const double half = 3.0 * radius;
  const int xmin = std::max(0, static_cast<int>(std::floor(prev.x - half)));
  const int ymin = std::max(0, static_cast<int>(std::floor(prev.y - half)));
  const int xmax = std::min(frame.width() - 1, static_cast<int>(std::ceil(prev.x + half)));
  const int ymax = std::min(frame.height() - 1, static_cast<int>(std::ceil(prev.y + half)));
  const double signorm = std::sqrt(sig.norm2);

  double mass = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (int y = ymin; y <= ymax; ++y) {
    for (int x = xmin; x <= xmax; ++x) {
      Rgb v;
      for (int c = 0; c < 3; ++c) v[c] = frame.at(x, y, c) - bg[c];
      const double a = (v[0] * sig.dir[0] + v[1] * sig.dir[1] + v[2] * sig.dir[2]) / sig.norm2;
      if (a < kMinCoverage) continue;
      double resid2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double e = v[c] - a * sig.dir[c];
        resid2 += e * e;
      }
      if (std::sqrt(resid2) > kMaxTangent * a * signorm) continue;
      const double w = std::min(a, 1.0);
      mass += w;
      sx += w * (x + 0.5);
      sy += w * (y + 0.5);
    }
  }
  if (mass < kMinMass * std::numbers::pi * radius * radius) return std::nullopt;
  return Point2{sx / mass, sy / mass};
}

}  // namespace

TrajectorySet track_dots(const SyntheticVideo& video, std::span<const Point2> starts,
                         double radius, std::span<const std::string> ids) {
  if (video.frames.empty()) throw std::invalid_argument("cannot track in an empty video");
  if (!ids.empty() && ids.size() != starts.size()) {
    throw std::invalid_argument("ids and starts differ in length");
  }
  const Image& first = video.frames.front();
  TrajectorySet out{first.width(), first.height(), static_cast<int>(video.frames.size()), {}};

  for (std::size_t k = 0; k < starts.size(); ++k) {
    const Point2 start = starts[k];
    if (!(start.x >= 0.0 && start.y >= 0.0 && start.x < first.width() &&
          start.y < first.height())) {
      throw std::invalid_argument("track start lies outside the frame");
    }
    Signature sig;
    const Rgb at_start = first.pixel(static_cast<int>(start.x), static_cast<int>(start.y));
    for (int c = 0; c < 3; ++c) {
      sig.dir[c] = at_start[c] - video.background[c];
      sig.norm2 += sig.dir[c] * sig.dir[c];
    }

    Trajectory traj{ids.empty() ? "dot" + std::to_string(k) : ids[k], {}};
    traj.points.reserve(video.frames.size());
    Point2 prev = start;
    for (const auto& frame : video.frames) {
      const auto found =
          sig.norm2 > 1e-6 ? locate(frame, video.background, sig, prev, radius) : std::nullopt;
      if (found) {
        prev = *found;
        traj.points.push_back(TrackPoint::at(*found));
      } else {
        traj.points.push_back(TrackPoint::hidden());
      }
    }
    out.tracks.push_back(std::move(traj));
  }
  return out;
}

void save_video(const std::filesystem::path& dir, const SyntheticVideo& video) {
  std::filesystem::create_directories(dir);
  for (std::size_t t = 0; t < video.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.png", t);
    save_png(dir / name, video.frames[t]);
  }
}

}  // namespace ati
