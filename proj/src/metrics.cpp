#include "ati/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"

namespace ati {

namespace {

void check_compatible(const TrajectorySet& pred, const TrajectorySet& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw MetricsMismatch("image size differs between prediction and ground truth");
  }
  if (pred.frame_count != gt.frame_count) {
    throw MetricsMismatch("frame count differs between prediction and ground truth");
  }
  if (pred.tracks.size() != gt.tracks.size()) {
    throw MetricsMismatch("track count differs between prediction and ground truth");
  }
}

/// gt tracks paired with the pred track of the same id.
std::vector<std::pair<const Trajectory*, const Trajectory*>> pair_tracks(const TrajectorySet& pred,
                                                                         const TrajectorySet& gt) {
  check_compatible(pred, gt);
  std::map<std::string, const Trajectory*> by_id;
  for (const auto& t : pred.tracks) {
    if (!by_id.emplace(t.id, &t).second) throw MetricsMismatch("duplicate prediction id " + t.id);
  }
  std::vector<std::pair<const Trajectory*, const Trajectory*>> out;
  out.reserve(gt.tracks.size());
  for (const auto& g : gt.tracks) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw MetricsMismatch("no prediction for track " + g.id);
    if (it->second->points.size() != g.points.size()) {
      throw MetricsMismatch("track " + g.id + " length differs");
    }
    out.emplace_back(it->second, &g);
  }
  return out;
}

double diagonal(const TrajectorySet& gt) { return std::hypot(double(gt.width), double(gt.height)); }

bool gt_visible(const TrackPoint& gt) { return gt.visible && gt.pos.has_value(); }

bool hit(const TrackPoint& pred, const TrackPoint& gt, double threshold) {
  if (!pred.visible) return false;
  const auto d = frame_distance(pred, gt);
  return d && *d < threshold;
}

struct Counts {
  int total = 0;
  int hit_005 = 0;
  int hit_001 = 0;
  int appeared = 0;
  int gt_hidden = 0;
  int false_visible = 0;
};

Counts count_track(const Trajectory& pred, const Trajectory& gt, double diag) {
  Counts c;
  for (std::size_t t = 0; t < gt.points.size(); ++t) {
    const auto& g = gt.points[t];
    const auto& p = pred.points[t];
    if (!gt_visible(g)) {
      ++c.gt_hidden;
      c.false_visible += p.visible ? 1 : 0;
      continue;
    }
    ++c.total;
    c.hit_005 += hit(p, g, 0.05 * diag) ? 1 : 0;
    c.hit_001 += hit(p, g, 0.01 * diag) ? 1 : 0;
    c.appeared += p.visible ? 1 : 0;
  }
  return c;
}

std::optional<double> ratio(int num, int den) {
  if (den == 0) return std::nullopt;
  return double(num) / den;
}

}  // namespace

std::optional<double> frame_distance(const TrackPoint& pred, const TrackPoint& gt) {
  if (!gt_visible(gt) || !pred.pos) return std::nullopt;
  return norm(*pred.pos - *gt.pos);
}

double acc_at(const TrajectorySet& pred, const TrajectorySet& gt, double tau) {
  const double threshold = tau * diagonal(gt);
  int total = 0;
  int hits = 0;
  for (const auto& [p, g] : pair_tracks(pred, gt)) {
    for (std::size_t t = 0; t < g->points.size(); ++t) {
      if (!gt_visible(g->points[t])) continue;
      ++total;
      hits += hit(p->points[t], g->points[t], threshold) ? 1 : 0;
    }
  }
  return total == 0 ? 0.0 : double(hits) / total;
}

double appearance_rate(const TrajectorySet& pred, const TrajectorySet& gt) {
  int total = 0;
  int appeared = 0;
  for (const auto& [p, g] : pair_tracks(pred, gt)) {
    for (std::size_t t = 0; t < g->points.size(); ++t) {
      if (!gt_visible(g->points[t])) continue;
      ++total;
      appeared += p->points[t].visible ? 1 : 0;
    }
  }
  return total == 0 ? 0.0 : double(appeared) / total;
}

MetricsReport report(const TrajectorySet& pred, const TrajectorySet& gt) {
  const double diag = diagonal(gt);
  MetricsReport r;
  Counts sum;
  int scored_tracks = 0;
  for (const auto& [p, g] : pair_tracks(pred, gt)) {
    const Counts c = count_track(*p, *g, diag);
    TrackMetrics tm{g->id, c.total, ratio(c.hit_005, c.total), ratio(c.hit_001, c.total),
                    ratio(c.appeared, c.total), ratio(c.false_visible, c.gt_hidden)};
    if (c.total > 0) {
      ++scored_tracks;
      r.track_mean.acc_005 += *tm.acc_005;
      r.track_mean.acc_001 += *tm.acc_001;
      r.track_mean.appearance_rate += *tm.appearance_rate;
    }
    r.per_track.push_back(std::move(tm));
    sum.total += c.total;
    sum.hit_005 += c.hit_005;
    sum.hit_001 += c.hit_001;
    sum.appeared += c.appeared;
    sum.gt_hidden += c.gt_hidden;
    sum.false_visible += c.false_visible;
  }
  if (scored_tracks > 0) {
    r.track_mean.acc_005 /= scored_tracks;
    r.track_mean.acc_001 /= scored_tracks;
    r.track_mean.appearance_rate /= scored_tracks;
  }
  r.gt_visible_frames = sum.total;
  r.aggregate.acc_005 = ratio(sum.hit_005, sum.total).value_or(0.0);
  r.aggregate.acc_001 = ratio(sum.hit_001, sum.total).value_or(0.0);
  r.aggregate.appearance_rate = ratio(sum.appeared, sum.total).value_or(0.0);
  r.false_positive_rate = ratio(sum.false_visible, sum.gt_hidden);
  return r;
}

std::string format_table(const MetricsReport& r, const std::string& label) {
  const int label_width = label.empty() ? 0 : static_cast<int>(label.size());
  char buf[256];
  std::string out;
  if (label_width > 0) out += std::string(label_width, ' ') + "  ";
  out += "Acc@0.05  Acc@0.01  App. Rate\n";
  if (label_width > 0) out += label + "  ";
  std::snprintf(buf, sizeof buf, "%8.1f  %8.1f  %9.1f\n", 100.0 * r.aggregate.acc_005,
                100.0 * r.aggregate.acc_001, 100.0 * r.aggregate.appearance_rate);
  out += buf;
  return out;
}

std::string report_to_json(const MetricsReport& r) {
  using ordered_json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  auto agg = [](const AggregateMetrics& a) {
    ordered_json j;
    j["acc_005"] = a.acc_005;
    j["acc_001"] = a.acc_001;
    j["appearance_rate"] = a.appearance_rate;
    return j;
  };
  ordered_json doc;
  doc["aggregate"] = agg(r.aggregate);
  doc["track_mean"] = agg(r.track_mean);
  doc["false_positive_rate"] = opt(r.false_positive_rate);
  doc["gt_visible_frames"] = r.gt_visible_frames;
  auto& tracks = doc["per_track"] = ordered_json::array();
  for (const auto& t : r.per_track) {
    ordered_json j;
    j["id"] = t.id;
    j["gt_visible_frames"] = t.gt_visible_frames;
    j["acc_005"] = opt(t.acc_005);
    j["acc_001"] = opt(t.acc_001);
    j["appearance_rate"] = opt(t.appearance_rate);
    j["false_positive_rate"] = opt(t.false_positive_rate);
    tracks.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace ati
