#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ati {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input (JSON schema, ATIC header, PNG payload).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Shapes of two operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Image-space coordinate: origin top-left, x rightward, y downward.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double k, Point2 p) { return {k * p.x, k * p.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

double norm(Point2 p);
bool is_finite(Point2 p);

/// One frame of a track. A located-but-occluded point has a position and
/// visible == false; a point with no position must be invisible.
struct TrackPoint {
  std::optional<Point2> pos;
  bool visible = false;

  static TrackPoint at(Point2 p) { return {p, true}; }
  static TrackPoint hidden() { return {}; }

  friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

struct Trajectory {
  std::string id;
  std::vector<TrackPoint> points;

  /// Index of the earliest visible frame, if any.
  std::optional<std::size_t> first_visible() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct TrajectorySet {
  int width = 1;
  int height = 1;
  int frame_count = 1;
  std::vector<Trajectory> tracks;

  friend bool operator==(const TrajectorySet&, const TrajectorySet&) = default;
};

/// Single-image latent feature map, row-major with channel-minor layout.
class LatentGrid {
 public:
  LatentGrid() = default;
  LatentGrid(int height, int width, int channels, double fill = 0.0);
  LatentGrid(int height, int width, int channels, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return values_.empty(); }

  double& at(int row, int col, int ch) { return values_[index(row, col, ch)]; }
  double at(int row, int col, int ch) const { return values_[index(row, col, ch)]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  friend bool operator==(const LatentGrid&, const LatentGrid&) = default;

 private:
  std::size_t index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

enum class SigmaMode { paper_normalized, grid_derived, explicit_value };
enum class Composition { normalized_average, max_weight };
enum class BlendMode { convex, replace };

struct InjectorConfig {
  SigmaMode sigma_mode = SigmaMode::grid_derived;
  double sigma = 1.0;
  int spatial_stride = 8;
  int temporal_stride = 1;
  Composition composition = Composition::normalized_average;
  BlendMode blend = BlendMode::convex;
};

/// Throws std::invalid_argument when sigma or a stride is out of range.
void check_config(const InjectorConfig& config);

std::string to_string(SigmaMode mode);
std::string to_string(Composition mode);
std::string to_string(BlendMode mode);
SigmaMode parse_sigma_mode(const std::string& name);
Composition parse_composition(const std::string& name);
BlendMode parse_blend(const std::string& name);

struct Violation {
  std::string track_id;           // empty for set-level violations
  std::optional<int> frame;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Raised by operations whose precondition is a valid set.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError unless validate(set) is empty.
void require_valid(const TrajectorySet& set);

/// Every invariant violation in the set. Empty means the set is well formed.
std::vector<Violation> validate(const TrajectorySet& set);

Point2 to_latent_coords(Point2 p, const InjectorConfig& config);
int frame_to_latent_frame(int t, const InjectorConfig& config);

/// ceil(frame_count / temporal_stride)
int latent_frame_count(int frame_count, const InjectorConfig& config);

}  // namespace ati
