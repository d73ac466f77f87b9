#pragma once

#include <span>
#include <string>
#include <vector>

#include "ati/core.hpp"

namespace ati {

/// Per-frame 2D similarity: x -> pivot + scale * R(rotation) * (x - pivot) + translation.
struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;  // radians
  Point2 translation;

  friend bool operator==(const SimilarityTransform&, const SimilarityTransform&) = default;
};

struct CameraPath {
  Point2 pivot;
  std::vector<SimilarityTransform> frames;

  Point2 apply(int frame, Point2 p) const;
};

/// All frames identity.
CameraPath identity_path(int frame_count, Point2 pivot = {});

/// translation_t = t * velocity.
CameraPath pan_path(int frame_count, Point2 velocity);

/// scale_t = 1 + rate * t, rotation_t = angular_rate * t, translation_t = t * velocity, about `pivot`.
CameraPath linear_path(int frame_count, Point2 pivot, double scale_rate, double angular_rate,
                       Point2 velocity);

/// Per-frame composition: the returned path applies `first`, then `second`.
CameraPath compose(const CameraPath& first, const CameraPath& second);

/// Centers of an aspect-matched r x c tiling, row-major, truncated to n.
std::vector<Point2> seed_grid(int width, int height, int n);

Trajectory static_track(Point2 p, int frame_count, std::string id = "static");

/// frame t at start + t/(T-1) * (end - start). Requires frame_count >= 2.
Trajectory linear_track(Point2 start, Point2 end, int frame_count, std::string id = "linear");

/// Moves each point along its direction from `center` by `speed` pixels per
/// frame; a point on the center stays put. Track ids are `prefix` + index.
std::vector<Trajectory> radial_zoom(std::span<const Point2> points, Point2 center, double speed,
                                    int frame_count, const std::string& prefix = "zoom");

/// Adds radial motion to an existing track: phi_t += t * speed * u, where u is
/// the unit direction from `center` to the track's first visible position.
Trajectory add_radial_motion(const Trajectory& traj, Point2 center, double speed);

/// Subject points become static tracks ("subject<k>"); background points get
/// radial zoom tracks ("background<k>").
TrajectorySet dolly_zoom(std::span<const Point2> subject, std::span<const Point2> background,
                         Point2 center, double speed, int frame_count, int width, int height);

/// Applies the camera to every located point (visible or occluded); visibility
/// is left alone. Throws DimensionError when the path length differs from
/// frame_count.
TrajectorySet apply_camera(const TrajectorySet& set, const CameraPath& path);

/// Same, restricted to the tracks whose id is in `track_ids`.
TrajectorySet apply_camera(const TrajectorySet& set, const CameraPath& path,
                           std::span<const std::string> track_ids);

/// Hides every located point outside [0, width) x [0, height). Producers call
/// this so out-of-frame motion is carried by visibility.
TrajectorySet mark_out_of_frame(const TrajectorySet& set);

}  // namespace ati
