#include "ati/trajgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ati {

Point2 CameraPath::apply(int frame, Point2 p) const {
  const auto& tf = frames.at(frame);
  if (tf.scale == 1.0 && tf.rotation == 0.0) return p + tf.translation;
  const double c = std::cos(tf.rotation);
  const double s = std::sin(tf.rotation);
  const Point2 d = p - pivot;
  const Point2 r{c * d.x - s * d.y, s * d.x + c * d.y};
  return pivot + tf.scale * r + tf.translation;
}

CameraPath identity_path(int frame_count, Point2 pivot) {
  return {pivot, std::vector<SimilarityTransform>(std::max(0, frame_count))};
}

CameraPath pan_path(int frame_count, Point2 velocity) {
  return linear_path(frame_count, {}, 0.0, 0.0, velocity);
}

CameraPath linear_path(int frame_count, Point2 pivot, double scale_rate, double angular_rate,
                       Point2 velocity) {
  CameraPath path{pivot, {}};
  path.frames.reserve(std::max(0, frame_count));
  for (int t = 0; t < frame_count; ++t) {
    const double scale = 1.0 + scale_rate * t;
    if (!(scale > 0.0)) throw std::invalid_argument("camera scale must stay positive");
    path.frames.push_back({scale, angular_rate * t, double(t) * velocity});
  }
  return path;
}

CameraPath compose(const CameraPath& first, const CameraPath& second) {
  if (first.frames.size() != second.frames.size()) {
    throw DimensionError("cannot compose camera paths of different lengths");
  }
  // second(first(x)) expressed about first.pivot: the linear parts multiply and
  // the image of first.pivot fixes the translation.
  CameraPath out{first.pivot, {}};
  out.frames.reserve(first.frames.size());
  for (std::size_t t = 0; t < first.frames.size(); ++t) {
    const auto& a = first.frames[t];
    const auto& b = second.frames[t];
    const Point2 moved_pivot = second.apply(static_cast<int>(t), first.pivot + a.translation);
    out.frames.push_back({a.scale * b.scale, a.rotation + b.rotation, moved_pivot - first.pivot});
  }
  return out;
}

std::vector<Point2> seed_grid(int width, int height, int n) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
  if (n < 1) throw std::invalid_argument("point count must be >= 1");
  const int rows = std::max(1, static_cast<int>(std::lround(std::sqrt(double(n) * height / width))));
  const int cols = (n + rows - 1) / rows;
  std::vector<Point2> out;
  out.reserve(n);
  for (int r = 0; r < rows && static_cast<int>(out.size()) < n; ++r) {
    for (int c = 0; c < cols && static_cast<int>(out.size()) < n; ++c) {
      out.push_back({(c + 0.5) * width / cols, (r + 0.5) * height / rows});
    }
  }
  return out;
}

Trajectory static_track(Point2 p, int frame_count, std::string id) {
  if (frame_count < 1) throw std::invalid_argument("frame_count must be >= 1");
  return {std::move(id), std::vector<TrackPoint>(frame_count, TrackPoint::at(p))};
}

Trajectory linear_track(Point2 start, Point2 end, int frame_count, std::string id) {
  if (frame_count < 2) throw std::invalid_argument("linear_track needs at least 2 frames");
  Trajectory traj{std::move(id), {}};
  traj.points.reserve(frame_count);
  const Point2 delta = end - start;
  for (int t = 0; t < frame_count; ++t) {
    const double u = double(t) / (frame_count - 1);
    traj.points.push_back(TrackPoint::at(start + u * delta));
  }
  return traj;
}

namespace {

Point2 unit_from(Point2 center, Point2 p) {
  const Point2 d = p - center;
  const double r = norm(d);
  return r == 0.0 ? Point2{} : Point2{d.x / r, d.y / r};
}

}  // namespace

std::vector<Trajectory> radial_zoom(std::span<const Point2> points, Point2 center, double speed,
                                    int frame_count, const std::string& prefix) {
  if (frame_count < 1) throw std::invalid_argument("frame_count must be >= 1");
  std::vector<Trajectory> out;
  out.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point2 p = points[k];
    const Point2 u = unit_from(center, p);
    Trajectory traj{prefix + std::to_string(k), {}};
    traj.points.reserve(frame_count);
    for (int t = 0; t < frame_count; ++t) {
      traj.points.push_back(TrackPoint::at(p + (t * speed) * u));
    }
    out.push_back(std::move(traj));
  }
  return out;
}

Trajectory add_radial_motion(const Trajectory& traj, Point2 center, double speed) {
  const auto first = traj.first_visible();
  if (!first) return traj;
  const Point2 u = unit_from(center, *traj.points[*first].pos);
  Trajectory out = traj;
  for (std::size_t t = 0; t < out.points.size(); ++t) {
    auto& pos = out.points[t].pos;
    if (pos) *pos = *pos + (double(t) * speed) * u;
  }
  return out;
}

TrajectorySet dolly_zoom(std::span<const Point2> subject, std::span<const Point2> background,
                         Point2 center, double speed, int frame_count, int width, int height) {
  TrajectorySet set{width, height, frame_count, {}};
  for (std::size_t k = 0; k < subject.size(); ++k) {
    set.tracks.push_back(static_track(subject[k], frame_count, "subject" + std::to_string(k)));
  }
  for (auto& traj : radial_zoom(background, center, speed, frame_count, "background")) {
    set.tracks.push_back(std::move(traj));
  }
  return set;
}

namespace {

template <typename Pred>
TrajectorySet apply_camera_if(const TrajectorySet& set, const CameraPath& path, Pred selected) {
  if (static_cast<long>(path.frames.size()) != set.frame_count) {
    throw DimensionError("camera path has " + std::to_string(path.frames.size()) +
                         " frames, set has " + std::to_string(set.frame_count));
  }
  TrajectorySet out = set;
  for (auto& traj : out.tracks) {
    if (!selected(traj)) continue;
    for (std::size_t t = 0; t < traj.points.size() && t < path.frames.size(); ++t) {
      auto& pos = traj.points[t].pos;
      if (pos) *pos = path.apply(static_cast<int>(t), *pos);
    }
  }
  return out;
}

}  // namespace

TrajectorySet apply_camera(const TrajectorySet& set, const CameraPath& path) {
  return apply_camera_if(set, path, [](const Trajectory&) { return true; });
}

TrajectorySet apply_camera(const TrajectorySet& set, const CameraPath& path,
                           std::span<const std::string> track_ids) {
  const std::set<std::string> wanted(track_ids.begin(), track_ids.end());
  return apply_camera_if(set, path,
                         [&](const Trajectory& traj) { return wanted.contains(traj.id); });
}

TrajectorySet mark_out_of_frame(const TrajectorySet& set) {
  TrajectorySet out = set;
  for (auto& traj : out.tracks) {
    for (auto& tp : traj.points) {
      if (!tp.pos) continue;
      const auto [x, y] = *tp.pos;
      if (x < 0.0 || y < 0.0 || x >= set.width || y >= set.height) tp.visible = false;
    }
  }
  return out;
}

}  // namespace ati
