#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ati/trajgen.hpp"
#include "test_support.hpp"

using namespace ati;

namespace {

double nearest_neighbor(const std::vector<Point2>& pts, std::size_t k) {
  double best = INFINITY;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j != k) best = std::min(best, norm(pts[j] - pts[k]));
  }
  return best;
}

CameraPath random_path(std::mt19937_64& gen, int frames) {
  std::uniform_real_distribution<double> s(0.5, 2.0);
  std::uniform_real_distribution<double> r(-3.0, 3.0);
  std::uniform_real_distribution<double> t(-50.0, 50.0);
  CameraPath path{{t(gen), t(gen)}, {}};
  for (int f = 0; f < frames; ++f) path.frames.push_back({s(gen), r(gen), {t(gen), t(gen)}});
  return path;
}

}  // namespace

TEST_CASE("seed_grid examples") {
  const auto one = seed_grid(100, 60, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Point2{50, 30});

  const auto four = seed_grid(64, 64, 4);
  REQUIRE(four.size() == 4);
  CHECK(four[0] == Point2{16, 16});
  CHECK(four[1] == Point2{48, 16});
  CHECK(four[2] == Point2{16, 48});
  CHECK(four[3] == Point2{48, 48});

  CHECK_THROWS_AS(seed_grid(0, 10, 3), std::invalid_argument);
  CHECK_THROWS_AS(seed_grid(10, 10, 0), std::invalid_argument);
}

TEST_CASE("seed_grid with 120 points is approximately equidistant") {
  const auto pts = seed_grid(832, 480, 120);
  REQUIRE(pts.size() == 120);
  double mean_nn = 0.0;
  double min_pair = INFINITY;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double nn = nearest_neighbor(pts, k);
    mean_nn += nn;
    min_pair = std::min(min_pair, nn);
    CHECK(pts[k].x > 0.0);
    CHECK(pts[k].x < 832.0);
    CHECK(pts[k].y > 0.0);
    CHECK(pts[k].y < 480.0);
  }
  mean_nn /= pts.size();
  CHECK(std::abs(min_pair - mean_nn) <= 0.25 * mean_nn);
}

TEST_CASE("seed_grid is deterministic and scale covariant") {
  for (int n : {1, 5, 12, 37, 120}) {
    const auto a = seed_grid(320, 200, n);
    CHECK(a == seed_grid(320, 200, n));
    const auto b = seed_grid(640, 400, n);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] == 2.0 * a[k]);
  }
}

TEST_CASE("static and linear tracks") {
  const auto s = static_track({10, 10}, 5);
  REQUIRE(s.points.size() == 5);
  for (const auto& tp : s.points) CHECK(tp == TrackPoint::at({10, 10}));
  CHECK(static_track({1, 2}, 1).points.size() == 1);

  auto same = linear_track({3, 4}, {3, 4}, 6, "x");
  CHECK(same == static_track({3, 4}, 6, "x"));

  const auto line = linear_track({0, 0}, {10, 0}, 11);
  for (int t = 0; t < 11; ++t) CHECK(line.points[t] == TrackPoint::at({double(t), 0}));

  const auto odd = linear_track({2, 8}, {12, -4}, 7);
  CHECK(*odd.points[3].pos == Point2{7, 2});

  CHECK_THROWS_AS(linear_track({0, 0}, {1, 1}, 1), std::invalid_argument);
}

TEST_CASE("radial_zoom") {
  const Point2 c{50, 40};
  const std::vector<Point2> pts{c, c + Point2{10, 0}};
  const auto tracks = radial_zoom(pts, c, 2.0, 5);
  REQUIRE(tracks.size() == 2);
  for (const auto& tp : tracks[0].points) CHECK(*tp.pos == c);
  CHECK(*tracks[1].points[3].pos == c + Point2{16, 0});

  for (const auto& t : radial_zoom(pts, c, 0.0, 4)) {
    for (const auto& tp : t.points) CHECK(*tp.pos == *t.points[0].pos);
  }
}

TEST_CASE("radial_zoom keeps direction and grows radius affinely") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 400.0);
  std::uniform_real_distribution<double> sp(-3.0, 3.0);
  std::vector<Point2> pts;
  for (int k = 0; k < 50; ++k) pts.push_back({u(gen), u(gen)});
  const Point2 c{200, 200};
  const double speed = sp(gen);
  for (const auto& t : radial_zoom(pts, c, speed, 12)) {
    const Point2 d0 = *t.points[0].pos - c;
    const double a0 = std::atan2(d0.y, d0.x);
    const double r0 = norm(d0);
    for (int f = 0; f < 12; ++f) {
      const Point2 d = *t.points[f].pos - c;
      const double r = r0 + f * speed;
      if (r > 1e-6) CHECK(std::abs(std::remainder(std::atan2(d.y, d.x) - a0, 2 * std::numbers::pi)) < 1e-9);
      CHECK(std::abs(norm(d) - std::abs(r)) < 1e-9);
    }
  }
}

TEST_CASE("dolly_zoom") {
  const Point2 c{100, 100};
  const std::vector<Point2> subject{{100, 100}};
  const std::vector<Point2> background{{150, 100}};
  const auto both = dolly_zoom(subject, background, c, 2.0, 6, 200, 200);
  REQUIRE(both.tracks.size() == 2);
  CHECK(both.tracks[0] == static_track({100, 100}, 6, "subject0"));
  CHECK(*both.tracks[1].points[5].pos == Point2{160, 100});
  CHECK(validate(both).empty());

  const auto still = dolly_zoom(subject, {}, c, 2.0, 6, 200, 200);
  CHECK(still.tracks.size() == 1);
  const auto zoom_only = dolly_zoom({}, background, c, 2.0, 6, 200, 200);
  CHECK(zoom_only.tracks == radial_zoom(background, c, 2.0, 6, "background"));
}

TEST_CASE("apply_camera examples") {
  TrajectorySet set{200, 100, 5, {static_track({100, 50}, 5, "a"), static_track({110, 50}, 5, "b")}};
  set.tracks[0].points[2].visible = false;

  CHECK(apply_camera(set, identity_path(5, {100, 50})) == set);

  const auto panned = apply_camera(set, pan_path(5, {3, 0}));
  for (int t = 0; t < 5; ++t) {
    CHECK(*panned.tracks[1].points[t].pos == Point2{110.0 + 3 * t, 50});
    CHECK(panned.tracks[0].points[t].visible == set.tracks[0].points[t].visible);
  }
  // Zero pan equals the static track.
  CHECK(apply_camera(set, pan_path(5, {0, 0})) == set);

  const auto zoomed = apply_camera(set, linear_path(5, {100, 50}, 0.1, 0.0, {}));
  CHECK(zoomed.tracks[1].points[2].pos->x == doctest::Approx(112.0).epsilon(1e-12));

  const std::vector<std::string> only_b{"b"};
  const auto partial = apply_camera(set, pan_path(5, {1, 1}), only_b);
  CHECK(partial.tracks[0] == set.tracks[0]);
  CHECK(*partial.tracks[1].points[4].pos == Point2{114, 54});

  CHECK_THROWS_AS(apply_camera(set, pan_path(4, {1, 0})), DimensionError);
}

TEST_CASE("apply_camera composes") {
  std::mt19937_64 gen(17);
  for (int k = 0; k < 200; ++k) {
    const auto set = ati::testing::random_set(gen, 320, 240, 6, 4);
    const auto a = random_path(gen, 6);
    const auto b = random_path(gen, 6);
    const auto twice = apply_camera(apply_camera(set, a), b);
    const auto once = apply_camera(set, compose(a, b));
    for (std::size_t n = 0; n < set.tracks.size(); ++n) {
      for (int t = 0; t < 6; ++t) {
        const auto p = *twice.tracks[n].points[t].pos;
        const auto q = *once.tracks[n].points[t].pos;
        CHECK(norm(p - q) < 1e-9);
        CHECK(twice.tracks[n].points[t].visible == once.tracks[n].points[t].visible);
      }
    }
  }
}

TEST_CASE("generated sets validate") {
  const auto seeds = seed_grid(320, 192, 12);
  TrajectorySet set{320, 192, 9, radial_zoom(seeds, {160, 96}, 1.5, 9, "z")};
  CHECK(validate(set).empty());
  CHECK(validate(apply_camera(set, pan_path(9, {2, -1}))).empty());
  CHECK(validate(mark_out_of_frame(set)).empty());
}

TEST_CASE("mark_out_of_frame hides points that leave the image") {
  TrajectorySet set{100, 100, 3, {linear_track({50, 50}, {150, 50}, 3, "a")}};
  const auto out = mark_out_of_frame(set);
  CHECK(out.tracks[0].points[0].visible);
  CHECK_FALSE(out.tracks[0].points[1].visible);  // x = 100 is outside [0, 100)
  CHECK_FALSE(out.tracks[0].points[2].visible);
  CHECK(out.tracks[0].points[2].pos == set.tracks[0].points[2].pos);
}

TEST_CASE("add_radial_motion on a static track equals radial_zoom") {
  const Point2 c{64, 64};
  const Point2 p{80, 52};
  const auto moved = add_radial_motion(static_track(p, 7, "zoom0"), c, 1.25);
  const std::vector<Point2> pts{p};
  CHECK(moved == radial_zoom(pts, c, 1.25, 7)[0]);
}
