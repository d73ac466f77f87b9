#include "ati/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ati {

double norm(Point2 p) { return std::hypot(p.x, p.y); }

bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::optional<std::size_t> Trajectory::first_visible() const {
  for (std::size_t t = 0; t < points.size(); ++t) {
    if (points[t].visible && points[t].pos) return t;
  }
  return std::nullopt;
}

LatentGrid::LatentGrid(int height, int width, int channels, double fill)
    : LatentGrid(height, width, channels,
                 std::vector<double>(static_cast<std::size_t>(std::max(0, height)) *
                                         std::max(0, width) * std::max(0, channels),
                                     fill)) {}

LatentGrid::LatentGrid(int height, int width, int channels, std::vector<double> values)
    : height_(height), width_(width), channels_(channels), values_(std::move(values)) {
  if (height < 0 || width < 0 || channels < 0) {
    throw DimensionError("latent grid dimensions must be non-negative");
  }
  if (values_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw DimensionError("latent grid value count does not match H*W*C");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("latent grid values must be finite");
  }
}

void check_config(const InjectorConfig& config) {
  if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) {
    throw std::invalid_argument("sigma must be a positive finite number");
  }
  if (config.spatial_stride < 1) throw std::invalid_argument("spatial_stride must be >= 1");
  if (config.temporal_stride < 1) throw std::invalid_argument("temporal_stride must be >= 1");
}

std::string to_string(SigmaMode mode) {
  switch (mode) {
    case SigmaMode::paper_normalized: return "paper_normalized";
    case SigmaMode::grid_derived: return "grid_derived";
    case SigmaMode::explicit_value: return "explicit";
  }
  return "?";
}

std::string to_string(Composition mode) {
  return mode == Composition::normalized_average ? "normalized_average" : "max_weight";
}

std::string to_string(BlendMode mode) { return mode == BlendMode::convex ? "convex" : "replace"; }

SigmaMode parse_sigma_mode(const std::string& name) {
  if (name == "paper_normalized") return SigmaMode::paper_normalized;
  if (name == "grid_derived") return SigmaMode::grid_derived;
  if (name == "explicit") return SigmaMode::explicit_value;
  throw std::invalid_argument("unknown sigma mode: " + name);
}

Composition parse_composition(const std::string& name) {
  if (name == "normalized_average") return Composition::normalized_average;
  if (name == "max_weight") return Composition::max_weight;
  throw std::invalid_argument("unknown composition: " + name);
}

BlendMode parse_blend(const std::string& name) {
  if (name == "convex") return BlendMode::convex;
  if (name == "replace") return BlendMode::replace;
  throw std::invalid_argument("unknown blend mode: " + name);
}

std::vector<Violation> validate(const TrajectorySet& set) {
  std::vector<Violation> out;
  if (set.width < 1) out.push_back({"", std::nullopt, "width must be >= 1"});
  if (set.height < 1) out.push_back({"", std::nullopt, "height must be >= 1"});
  if (set.frame_count < 1) out.push_back({"", std::nullopt, "frame_count must be >= 1"});

  std::set<std::string> seen;
  for (const auto& track : set.tracks) {
    if (!seen.insert(track.id).second) {
      out.push_back({track.id, std::nullopt, "duplicate track id"});
    }
    if (static_cast<long>(track.points.size()) != set.frame_count) {
      out.push_back({track.id, std::nullopt,
                     "track has " + std::to_string(track.points.size()) + " points, expected " +
                         std::to_string(set.frame_count)});
    }
    bool any_visible = false;
    for (std::size_t t = 0; t < track.points.size(); ++t) {
      const auto& tp = track.points[t];
      const int frame = static_cast<int>(t);
      if (tp.visible && !tp.pos) {
        out.push_back({track.id, frame, "visible point has no position"});
      }
      if (tp.pos && !is_finite(*tp.pos)) {
        out.push_back({track.id, frame, "position is not finite"});
      }
      any_visible = any_visible || (tp.visible && tp.pos);
    }
    if (!any_visible) out.push_back({track.id, std::nullopt, "track has no visible frame"});
  }
  return out;
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string msg = std::to_string(violations.size()) + " trajectory violation(s)";
  if (!violations.empty()) {
    const auto& v = violations.front();
    msg += ": ";
    if (!v.track_id.empty()) msg += "track \"" + v.track_id + "\" ";
    if (v.frame) msg += "frame " + std::to_string(*v.frame) + " ";
    msg += v.message;
  }
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(describe(violations)), violations_(std::move(violations)) {}

void require_valid(const TrajectorySet& set) {
  auto violations = validate(set);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Point2 to_latent_coords(Point2 p, const InjectorConfig& config) {
  const double s = config.spatial_stride;
  return {p.x / s, p.y / s};
}

int frame_to_latent_frame(int t, const InjectorConfig& config) {
  return t / config.temporal_stride;
}

int latent_frame_count(int frame_count, const InjectorConfig& config) {
  const int r = config.temporal_stride;
  return (frame_count + r - 1) / r;
}

}  // namespace ati
