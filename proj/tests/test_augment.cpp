#include "doctest.h"

#include <map>
#include <set>

#include "ati/augment.hpp"
#include "test_support.hpp"

using namespace ati;
using ati::testing::visible_track;

namespace {

Trajectory ramp(int frames, std::string id = "r") {
  std::vector<Point2> pts;
  for (int t = 0; t < frames; ++t) pts.push_back({double(t), 2.0 * t});
  return visible_track(std::move(id), pts);
}

TrajectorySet many_tracks(int n, int frames = 4) {
  TrajectorySet set{100, 100, frames, {}};
  for (int k = 0; k < n; ++k) {
    std::vector<Point2> pts(frames, {double(k), double(k)});
    set.tracks.push_back(visible_track("k" + std::to_string(k), pts));
  }
  return set;
}

}  // namespace

TEST_CASE("Rng is reproducible and substreams differ") {
  Rng a(42);
  Rng b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  auto s1 = Rng::substream(42, "p1");
  auto s2 = Rng::substream(42, "p2");
  auto s1b = Rng::substream(42, "p1");
  const auto v1 = s1.next();
  CHECK(v1 == s1b.next());
  CHECK(v1 != s2.next());

  // std::mt19937_64 with the default seed: 10000th output is fixed by the standard.
  std::mt19937_64 reference;
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ull);

  Rng r(1);
  for (int k = 0; k < 1000; ++k) {
    const auto v = r.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(r.uniform_int(5, 5) == 5);
  CHECK_THROWS(r.uniform_int(2, 1));
}

TEST_CASE("tail dropout with p = 0 never changes the track") {
  AugmentConfig cfg;
  cfg.dropout_prob = 0.0;
  Rng rng(3);
  const auto t = ramp(10);
  for (int k = 0; k < 1000; ++k) CHECK(tail_dropout(t, cfg, rng) == t);
}

TEST_CASE("truncate_after keeps frames up to t_d") {
  const auto t = ramp(6);
  CHECK(truncate_after(t, 6) == t);  // t_d = T: nothing strictly after
  CHECK(truncate_after(t, 5) == t);
  const auto cut = truncate_after(t, 2);
  for (int f = 0; f < 6; ++f) {
    CHECK(cut.points[f].pos == t.points[f].pos);
    CHECK(cut.points[f].visible == (f <= 2));
  }
  const auto zero = truncate_after(t, 0);
  CHECK(zero.points[0].visible);
  CHECK_FALSE(zero.points[1].visible);

  // A track that starts late keeps its first visible frame.
  auto late = t;
  late.points[0] = TrackPoint::hidden();
  late.points[1].visible = false;
  const auto kept = truncate_after(late, 0);
  CHECK(kept.points[2].visible);
  CHECK_FALSE(kept.points[3].visible);
  CHECK(kept.first_visible() == 2u);
}

TEST_CASE("tail dropout with p = 1 always draws a frame") {
  AugmentConfig cfg;
  cfg.dropout_prob = 1.0;
  Rng rng(5);
  std::set<int> seen;
  for (int k = 0; k < 2000; ++k) {
    const auto t_d = draw_dropout_frame(4, 1.0, rng);
    REQUIRE(t_d.has_value());
    seen.insert(*t_d);
  }
  CHECK(seen == std::set<int>{0, 1, 2, 3, 4});
}

TEST_CASE("tail dropout is monotone and keeps positions") {
  std::mt19937_64 gen(77);
  AugmentConfig cfg;
  cfg.dropout_prob = 0.7;
  Rng rng(77);
  for (int k = 0; k < 2000; ++k) {
    const auto set = ati::testing::random_set(gen, 50, 50, 1 + k % 12, 1);
    const auto& before = set.tracks[0];
    const auto after = tail_dropout(before, cfg, rng);
    REQUIRE(after.points.size() == before.points.size());
    CHECK(after.id == before.id);
    for (std::size_t t = 0; t < before.points.size(); ++t) {
      CHECK(after.points[t].pos == before.points[t].pos);
      if (!before.points[t].visible) CHECK_FALSE(after.points[t].visible);
    }
    CHECK(after.first_visible().has_value());
    // A second truncation never restores visibility.
    const auto again = tail_dropout(after, cfg, rng);
    for (std::size_t t = 0; t < before.points.size(); ++t) {
      if (!after.points[t].visible) CHECK_FALSE(again.points[t].visible);
    }
  }
}

TEST_CASE("tail dropout Bernoulli branch frequency") {
  Rng rng(2025);
  int fired = 0;
  const int trials = 100000;
  for (int k = 0; k < trials; ++k) fired += draw_dropout_frame(10, 0.2, rng) ? 1 : 0;
  const double freq = double(fired) / trials;
  CHECK(freq >= 0.19);
  CHECK(freq <= 0.21);
}

TEST_CASE("set-level tail dropout is independent of track order") {
  std::mt19937_64 gen(4);
  auto set = ati::testing::random_set(gen, 64, 64, 8, 12);
  AugmentConfig cfg;
  cfg.dropout_prob = 0.5;
  cfg.seed = 99;
  const auto a = tail_dropout(set, cfg);
  std::reverse(set.tracks.begin(), set.tracks.end());
  auto b = tail_dropout(set, cfg);
  std::reverse(b.tracks.begin(), b.tracks.end());
  CHECK(a == b);
  CHECK(validate(a).empty());
}

TEST_CASE("per-clip tail dropout shares one frame") {
  auto set = many_tracks(6, 10);
  AugmentConfig cfg;
  cfg.dropout_prob = 1.0;
  cfg.per_clip = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto out = tail_dropout(set, cfg);
    const auto pattern = out.tracks[0].points;
    for (const auto& t : out.tracks) {
      for (std::size_t f = 0; f < pattern.size(); ++f) {
        CHECK(t.points[f].visible == pattern[f].visible);
      }
    }
  }
}

TEST_CASE("subsample_tracks") {
  AugmentConfig cfg;
  Rng rng(10);

  SUBCASE("single track is always kept") {
    const auto set = many_tracks(1);
    for (int k = 0; k < 100; ++k) CHECK(subsample_tracks(set, cfg, rng) == set);
  }
  SUBCASE("defaults keep between 1 and 20 of 120 seeds") {
    const auto set = many_tracks(120);
    std::set<std::size_t> sizes;
    for (int k = 0; k < 3000; ++k) {
      const auto out = subsample_tracks(set, cfg, rng);
      CHECK(out.tracks.size() >= 1);
      CHECK(out.tracks.size() <= 20);
      sizes.insert(out.tracks.size());
      CHECK(validate(out).empty());
    }
    CHECK(sizes.size() == 20);
  }
  SUBCASE("order preserved and subset of input") {
    const auto set = many_tracks(30);
    for (int k = 0; k < 200; ++k) {
      const auto out = subsample_tracks(set, cfg, rng);
      std::size_t cursor = 0;
      for (const auto& t : out.tracks) {
        while (cursor < set.tracks.size() && !(set.tracks[cursor] == t)) ++cursor;
        REQUIRE(cursor < set.tracks.size());
        ++cursor;
      }
    }
  }
  SUBCASE("fixed k selects uniformly") {
    cfg.min_tracks = 5;
    cfg.max_tracks = 5;
    const auto set = many_tracks(50);
    std::map<std::string, int> hits;
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) {
      const auto out = subsample_tracks(set, cfg, rng);
      std::set<std::string> ids;
      for (const auto& t : out.tracks) ids.insert(t.id);
      CHECK(ids.size() == 5);
      for (const auto& id : ids) ++hits[id];
    }
    REQUIRE(hits.size() == 50);
    for (const auto& [id, n] : hits) {
      CHECK(double(n) / draws == doctest::Approx(0.1).epsilon(0.1));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(subsample_tracks(TrajectorySet{}, cfg, rng), std::invalid_argument);
    cfg.min_tracks = 3;
    cfg.max_tracks = 2;
    CHECK_THROWS_AS(subsample_tracks(many_tracks(4), cfg, rng), std::invalid_argument);
  }
}

TEST_CASE("augment is reproducible for a seed") {
  std::mt19937_64 gen(8);
  const auto set = ati::testing::random_set(gen, 64, 64, 9, 40);
  AugmentConfig cfg;
  cfg.seed = 1234;
  const auto a = augment(set, cfg);
  CHECK(a == augment(set, cfg));
  cfg.seed = 1235;
  CHECK_FALSE(a == augment(set, cfg));
}
