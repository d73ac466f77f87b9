#include "ati/injector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace ati {

EffectiveSigma resolve_sigma(const InjectorConfig& config, int grid_height, int grid_width) {
  if (grid_height < 1 || grid_width < 1) throw DimensionError("latent grid must be non-empty");
  switch (config.sigma_mode) {
    case SigmaMode::explicit_value:
      if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) {
        throw std::invalid_argument("explicit sigma must be positive");
      }
      return {config.sigma, 1.0};
    case SigmaMode::grid_derived:
      // Half weight at the diagonal neighbour: d^2 = 2, exp(-2 / (2 sigma)) = 1/2.
      return {2.0 / (2.0 * std::log(2.0)), 1.0};
    case SigmaMode::paper_normalized:
      return {1.0 / 440.0, 1.0 / std::hypot(double(grid_width), double(grid_height))};
  }
  throw std::invalid_argument("unknown sigma mode");
}

double gaussian_weight(Point2 phi, LatentCell cell, double sigma) {
  const double dx = phi.x - cell.col;
  const double dy = phi.y - cell.row;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma));
}

double gaussian_weight(Point2 phi, LatentCell cell, const EffectiveSigma& sigma) {
  if (sigma.distance_scale == 1.0) return gaussian_weight(phi, cell, sigma.sigma);
  const double k = sigma.distance_scale;
  const double dx = (phi.x - cell.col) * k;
  const double dy = (phi.y - cell.row) * k;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma.sigma));
}

std::vector<double> sample_feature(const LatentGrid& grid, Point2 p) {
  if (grid.empty()) throw DimensionError("cannot sample an empty latent grid");
  const double x = std::clamp(p.x, 0.0, double(grid.width() - 1));
  const double y = std::clamp(p.y, 0.0, double(grid.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, grid.width() - 1);
  const int y1 = std::min(y0 + 1, grid.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;

  std::vector<double> out(grid.channels());
  for (int c = 0; c < grid.channels(); ++c) {
    // a + f * (b - a) is exact on lattice points and over constant regions.
    const double v00 = grid.at(y0, x0, c);
    const double v01 = grid.at(y0, x1, c);
    const double top = v00 + fx * (v01 - v00);
    const double bottom = grid.at(y1, x0, c) + fx * (grid.at(y1, x1, c) - grid.at(y1, x0, c));
    out[c] = top + fy * (bottom - top);
  }
  return out;
}

WeightPlane frame_mask(const TrackPoint& tp, int grid_height, int grid_width,
                       const EffectiveSigma& sigma, const InjectorConfig& config) {
  WeightPlane plane{grid_height, grid_width,
                    std::vector<double>(static_cast<std::size_t>(grid_height) * grid_width, 0.0)};
  if (!tp.visible || !tp.pos) return plane;
  const Point2 phi = to_latent_coords(*tp.pos, config);
  for (int i = 0; i < grid_height; ++i) {
    for (int j = 0; j < grid_width; ++j) {
      const double w = gaussian_weight(phi, LatentCell{j, i}, sigma);
      plane.weights[static_cast<std::size_t>(i) * grid_width + j] = w < kWeightFloor ? 0.0 : w;
    }
  }
  return plane;
}

ConditionTensor::ConditionTensor(int latent_frames, int height, int width, int channels)
    : ConditionTensor(latent_frames, height, width, channels,
                      std::vector<double>(static_cast<std::size_t>(latent_frames) * height * width *
                                              channels,
                                          0.0)) {}

ConditionTensor::ConditionTensor(int latent_frames, int height, int width, int channels,
                                 std::vector<double> values)
    : frames_(latent_frames),
      height_(height),
      width_(width),
      channels_(channels),
      values_(std::move(values)) {
  if (latent_frames < 0 || height < 0 || width < 0 || channels < 1) {
    throw DimensionError("invalid condition tensor dimensions");
  }
  if (values_.size() != static_cast<std::size_t>(latent_frames) * height * width * channels) {
    throw DimensionError("condition tensor value count does not match T'*H'*W'*channels");
  }
}

namespace {

bool dims_consistent(int latent, int pixels, int stride) {
  const int lo = pixels / stride;
  const int hi = (pixels + stride - 1) / stride;
  return latent == lo || latent == hi;
}

struct SourceTrack {
  const Trajectory* traj;
  std::vector<double> feature;
};

void compose_frame(ConditionTensor& out, int tau, std::span<const SourceTrack> sources,
                   const EffectiveSigma& sigma, const InjectorConfig& config) {
  const int h = out.height();
  const int w = out.width();
  const int c = out.feature_channels();
  const std::size_t pixels = static_cast<std::size_t>(h) * w;
  const int t = tau * config.temporal_stride;

  std::vector<double> acc_weight(pixels, 0.0);
  std::vector<double> acc_feature(pixels * c, 0.0);
  std::vector<const SourceTrack*> winner(pixels, nullptr);

  for (const auto& src : sources) {
    const auto plane = frame_mask(src.traj->points[t], h, w, sigma, config);
    for (std::size_t px = 0; px < pixels; ++px) {
      const double wk = plane.weights[px];
      if (wk == 0.0) continue;
      if (config.composition == Composition::normalized_average) {
        acc_weight[px] += wk;
        for (int ch = 0; ch < c; ++ch) acc_feature[px * c + ch] += wk * src.feature[ch];
      } else if (wk > acc_weight[px]) {
        // Sources arrive in id order, so a tie keeps the lowest id.
        acc_weight[px] = wk;
        winner[px] = &src;
      }
    }
  }

  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const std::size_t px = static_cast<std::size_t>(i) * w + j;
      const double sum = acc_weight[px];
      if (sum == 0.0) continue;
      for (int ch = 0; ch < c; ++ch) {
        out.at(tau, i, j, ch) = config.composition == Composition::normalized_average
                                    ? acc_feature[px * c + ch] / sum
                                    : winner[px]->feature[ch];
      }
      out.at(tau, i, j, c) = std::min(1.0, sum);
    }
  }
}

}  // namespace

ConditionTensor compose_condition(const TrajectorySet& set, const LatentGrid& grid,
                                  const InjectorConfig& config, int threads) {
  check_config(config);
  require_valid(set);
  if (grid.empty()) throw DimensionError("latent grid is empty");
  if (!dims_consistent(grid.height(), set.height, config.spatial_stride) ||
      !dims_consistent(grid.width(), set.width, config.spatial_stride)) {
    throw DimensionError("latent grid " + std::to_string(grid.height()) + "x" +
                         std::to_string(grid.width()) + " does not match image " +
                         std::to_string(set.height) + "x" + std::to_string(set.width) +
                         " at stride " + std::to_string(config.spatial_stride));
  }

  const int frames = latent_frame_count(set.frame_count, config);
  ConditionTensor out(frames, grid.height(), grid.width(), grid.channels() + 1);
  if (set.tracks.empty()) return out;

  std::vector<SourceTrack> sources;
  sources.reserve(set.tracks.size());
  for (const auto& traj : set.tracks) {
    const auto& first = traj.points[*traj.first_visible()];
    sources.push_back({&traj, sample_feature(grid, to_latent_coords(*first.pos, config))});
  }
  std::sort(sources.begin(), sources.end(),
            [](const SourceTrack& a, const SourceTrack& b) { return a.traj->id < b.traj->id; });

  const auto sigma = resolve_sigma(config, grid.height(), grid.width());
  const int workers = std::clamp(threads, 1, frames);
  if (workers == 1) {
    for (int tau = 0; tau < frames; ++tau) compose_frame(out, tau, sources, sigma, config);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        for (int tau = k; tau < frames; tau += workers) {
          compose_frame(out, tau, sources, sigma, config);
        }
      });
    }
  }
  return out;
}

namespace {

void check_base(const ConditionTensor& cond, std::span<const LatentGrid> base) {
  if (static_cast<int>(base.size()) != cond.latent_frames()) {
    throw DimensionError("base stream has " + std::to_string(base.size()) +
                         " latent frames, condition has " + std::to_string(cond.latent_frames()));
  }
  for (const auto& g : base) {
    if (g.height() != cond.height() || g.width() != cond.width() ||
        g.channels() != cond.feature_channels()) {
      throw DimensionError("base latent grid does not match condition dimensions");
    }
  }
}

}  // namespace

std::vector<LatentGrid> blend_with_base(const ConditionTensor& cond,
                                        std::span<const LatentGrid> base, BlendMode mode) {
  check_base(cond, base);
  std::vector<LatentGrid> out(base.begin(), base.end());
  const int c = cond.feature_channels();
  for (int tau = 0; tau < cond.latent_frames(); ++tau) {
    auto& g = out[tau];
    for (int i = 0; i < cond.height(); ++i) {
      for (int j = 0; j < cond.width(); ++j) {
        const double w = cond.weight(tau, i, j);
        if (w == 0.0) continue;
        for (int ch = 0; ch < c; ++ch) {
          const double feat = cond.at(tau, i, j, ch);
          double& v = g.at(i, j, ch);
          if (mode == BlendMode::convex) {
            v = w == 1.0 ? feat : w * feat + (1.0 - w) * v;
          } else if (w > 0.5) {
            v = feat;
          }
        }
      }
    }
  }
  return out;
}

std::vector<LatentGrid> concat_with_base(const ConditionTensor& cond,
                                         std::span<const LatentGrid> base) {
  check_base(cond, base);
  std::vector<LatentGrid> out;
  out.reserve(base.size());
  const int cb = cond.feature_channels();
  const int cc = cond.channels();
  for (int tau = 0; tau < cond.latent_frames(); ++tau) {
    LatentGrid g(cond.height(), cond.width(), cb + cc);
    for (int i = 0; i < cond.height(); ++i) {
      for (int j = 0; j < cond.width(); ++j) {
        for (int ch = 0; ch < cb; ++ch) g.at(i, j, ch) = base[tau].at(i, j, ch);
        for (int ch = 0; ch < cc; ++ch) g.at(i, j, cb + ch) = cond.at(tau, i, j, ch);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace ati
