#include "doctest.h"

#include <algorithm>
#include <random>

#include "ati/metrics.hpp"
#include "test_support.hpp"

using namespace ati;
using ati::testing::visible_track;

namespace {

// 300 x 400 image, diagonal 500.
TrajectorySet single(const std::vector<Point2>& pts) {
  return {300, 400, static_cast<int>(pts.size()), {visible_track("a", pts)}};
}

// Brute-force reference written directly from the definition.
double brute_acc(const TrajectorySet& pred, const TrajectorySet& gt, double tau) {
  const double thr = tau * std::sqrt(double(gt.width) * gt.width + double(gt.height) * gt.height);
  int total = 0;
  int hits = 0;
  for (const auto& g : gt.tracks) {
    const auto& p = *std::find_if(pred.tracks.begin(), pred.tracks.end(),
                                  [&](const Trajectory& t) { return t.id == g.id; });
    for (std::size_t f = 0; f < g.points.size(); ++f) {
      if (!g.points[f].visible) continue;
      ++total;
      const auto& pp = p.points[f];
      if (pp.visible && pp.pos) {
        const double dx = pp.pos->x - g.points[f].pos->x;
        const double dy = pp.pos->y - g.points[f].pos->y;
        hits += std::sqrt(dx * dx + dy * dy) < thr ? 1 : 0;
      }
    }
  }
  return total ? double(hits) / total : 0.0;
}

TrajectorySet jitter(std::mt19937_64& gen, const TrajectorySet& gt, double sigma) {
  std::normal_distribution<double> n(0.0, sigma);
  std::bernoulli_distribution drop(0.1);
  auto pred = gt;
  for (auto& t : pred.tracks) {
    for (auto& tp : t.points) {
      if (!tp.pos) continue;
      *tp.pos = *tp.pos + Point2{n(gen), n(gen)};
      if (drop(gen)) tp.visible = !tp.visible;
    }
  }
  return pred;
}

}  // namespace

TEST_CASE("frame_distance") {
  CHECK(*frame_distance(TrackPoint::at({3, 4}), TrackPoint::at({0, 0})) == 5.0);
  CHECK_FALSE(frame_distance(TrackPoint::at({3, 4}), TrackPoint{Point2{0, 0}, false}));
  CHECK_FALSE(frame_distance(TrackPoint::hidden(), TrackPoint::at({0, 0})));
}

TEST_CASE("accuracy and appearance examples") {
  const auto gt = single({{100, 100}, {100, 100}, {100, 100}, {100, 100}});
  const auto pred = single({{100, 100}, {110, 100}, {100, 120}, {130, 100}});
  CHECK(acc_at(pred, gt, 0.05) == doctest::Approx(0.75));
  CHECK(acc_at(pred, gt, 0.01) == doctest::Approx(0.25));

  auto hidden = pred;
  hidden.tracks[0].points[3].visible = false;
  CHECK(appearance_rate(hidden, gt) == doctest::Approx(0.75));
  // Invisible predictions never count as accurate, even at the exact spot.
  hidden.tracks[0].points[0].visible = false;
  CHECK(acc_at(hidden, gt, 0.05) == doctest::Approx(0.5));

  // Exactly on the threshold is a miss.
  const auto edge = single({{100, 100}, {125, 100}, {100, 100}, {100, 100}});
  CHECK(acc_at(edge, gt, 0.05) == doctest::Approx(0.75));
}

TEST_CASE("tracks without visible gt frames are skipped") {
  TrajectorySet gt{300, 400, 2, {visible_track("a", {{1, 1}, {2, 2}}), visible_track("b", {{5, 5}, {5, 5}})}};
  gt.tracks[1].points[0].visible = false;
  gt.tracks[1].points[1].visible = false;
  auto pred = gt;
  pred.tracks[1].points[0].visible = true;
  const auto r = report(pred, gt);
  REQUIRE(r.per_track.size() == 2);
  CHECK_FALSE(r.per_track[1].acc_005.has_value());
  CHECK_FALSE(r.per_track[1].appearance_rate.has_value());
  CHECK(*r.per_track[1].false_positive_rate == 0.5);
  CHECK(r.aggregate.acc_005 == 1.0);
  CHECK(r.track_mean.acc_005 == 1.0);
  CHECK(r.gt_visible_frames == 2);
  CHECK(*r.false_positive_rate == 0.5);

  TrajectorySet empty{300, 400, 1, {}};
  CHECK(acc_at(empty, empty, 0.05) == 0.0);
  CHECK(appearance_rate(empty, empty) == 0.0);
}

TEST_CASE("aggregate is frame weighted") {
  const std::vector<Point2> here(4, {50, 50});
  TrajectorySet gt{300, 400, 4, {visible_track("a", here), visible_track("b", here)}};
  auto pred = gt;
  pred.tracks[1].points[2].pos = Point2{150, 50};
  pred.tracks[1].points[3].pos = Point2{150, 50};
  const auto r = report(pred, gt);
  CHECK(*r.per_track[0].acc_005 == 1.0);
  CHECK(*r.per_track[1].acc_005 == 0.5);
  CHECK(r.aggregate.acc_005 == doctest::Approx(0.75));
  CHECK(format_table(r) == "Acc@0.05  Acc@0.01  App. Rate\n    75.0      75.0      100.0\n");

  // Unequal lengths: frame weighting differs from the track mean.
  gt.tracks[0].points[3].visible = false;
  gt.tracks[0].points[2].visible = false;
  gt.tracks[0].points[1].visible = false;
  const auto w = report(pred, gt);
  CHECK(w.aggregate.acc_005 == doctest::Approx(3.0 / 5.0));
  CHECK(w.track_mean.acc_005 == doctest::Approx(0.75));
}

TEST_CASE("perfect prediction scores 100") {
  std::mt19937_64 gen(12);
  const auto gt = ati::testing::random_set(gen, 832, 480, 10, 8);
  const auto r = report(gt, gt);
  CHECK(r.aggregate.acc_005 == 1.0);
  CHECK(r.aggregate.acc_001 == 1.0);
  CHECK(r.aggregate.appearance_rate == 1.0);
  CHECK(*r.false_positive_rate == 0.0);
  CHECK(format_table(r, "ours") ==
        "      Acc@0.05  Acc@0.01  App. Rate\nours     100.0     100.0      100.0\n");
}

TEST_CASE("metric properties on random predictions") {
  std::mt19937_64 gen(31);
  for (int k = 0; k < 300; ++k) {
    const auto gt = ati::testing::random_set(gen, 64 + k, 48 + 2 * k, 1 + k % 9, 1 + k % 6);
    const auto pred = jitter(gen, gt, 0.02 * (64 + k));

    const double a1 = acc_at(pred, gt, 0.01);
    const double a5 = acc_at(pred, gt, 0.05);
    CHECK(a1 <= a5);
    CHECK(a5 <= appearance_rate(pred, gt) + 1e-12);
    CHECK(a1 == doctest::Approx(brute_acc(pred, gt, 0.01)));
    CHECK(a5 == doctest::Approx(brute_acc(pred, gt, 0.05)));

    // Scaling the image and every point by 2 changes nothing.
    auto scale = [](TrajectorySet s) {
      s.width *= 2;
      s.height *= 2;
      for (auto& t : s.tracks) {
        for (auto& tp : t.points) {
          if (tp.pos) *tp.pos = 2.0 * *tp.pos;
        }
      }
      return s;
    };
    CHECK(acc_at(scale(pred), scale(gt), 0.05) == a5);
    CHECK(acc_at(scale(pred), scale(gt), 0.01) == a1);

    auto shuffled = pred;
    std::shuffle(shuffled.tracks.begin(), shuffled.tracks.end(), gen);
    CHECK(acc_at(shuffled, gt, 0.05) == a5);
    CHECK(report(shuffled, gt).aggregate.appearance_rate == report(pred, gt).aggregate.appearance_rate);
  }
}

TEST_CASE("mismatched inputs throw") {
  const auto gt = single({{1, 1}, {2, 2}});
  auto other = gt;
  other.tracks[0].id = "b";
  CHECK_THROWS_AS(report(other, gt), MetricsMismatch);
  other = gt;
  other.width = 301;
  CHECK_THROWS_AS(acc_at(other, gt, 0.05), MetricsMismatch);
  other = gt;
  other.tracks.push_back(other.tracks[0]);
  other.tracks[1].id = "c";
  CHECK_THROWS_AS(appearance_rate(other, gt), MetricsMismatch);
  other = gt;
  other.frame_count = 3;
  CHECK_THROWS_AS(report(other, gt), MetricsMismatch);
}

TEST_CASE("report JSON carries per-track values") {
  const auto gt = single({{1, 1}, {2, 2}});
  const auto json = report_to_json(report(gt, gt));
  CHECK(json.find("\"acc_005\": 1.0") != std::string::npos);
  CHECK(json.find("\"false_positive_rate\": null") != std::string::npos);
  CHECK(json.find("\"id\": \"a\"") != std::string::npos);
}
