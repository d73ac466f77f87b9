#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ati/core.hpp"

namespace ati {

/// pred and gt disagree on ids, frame count or image size.
class MetricsMismatch : public Error {
 public:
  using Error::Error;
};

/// Euclidean distance in pixels when both points are located and the ground
/// truth is visible.
std::optional<double> frame_distance(const TrackPoint& pred, const TrackPoint& gt);

/// Fraction of gt-visible (track, frame) pairs whose prediction lies strictly
/// closer than tau * diag(gt image). Invisible or missing predictions fail.
/// Returns 0 when no frame of gt is visible.
double acc_at(const TrajectorySet& pred, const TrajectorySet& gt, double tau);

/// Fraction of gt-visible (track, frame) pairs predicted visible.
double appearance_rate(const TrajectorySet& pred, const TrajectorySet& gt);

struct TrackMetrics {
  std::string id;
  int gt_visible_frames = 0;
  // Absent when the track has no gt-visible frame.
  std::optional<double> acc_005;
  std::optional<double> acc_001;
  std::optional<double> appearance_rate;
  /// Fraction of gt-invisible frames that pred reports visible.
  std::optional<double> false_positive_rate;
};

struct AggregateMetrics {
  double acc_005 = 0.0;
  double acc_001 = 0.0;
  double appearance_rate = 0.0;
};

struct MetricsReport {
  std::vector<TrackMetrics> per_track;
  /// Weighted by gt-visible frames over the whole set.
  AggregateMetrics aggregate;
  /// Unweighted mean over tracks that have gt-visible frames.
  AggregateMetrics track_mean;
  std::optional<double> false_positive_rate;
  int gt_visible_frames = 0;
};

MetricsReport report(const TrajectorySet& pred, const TrajectorySet& gt);

/// "Acc@0.05  Acc@0.01  App. Rate" header plus one row of percentages with one
/// decimal, optionally prefixed by a row label.
std::string format_table(const MetricsReport& r, const std::string& label = "");

std::string report_to_json(const MetricsReport& r);

}  // namespace ati
