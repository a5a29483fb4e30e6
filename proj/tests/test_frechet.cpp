#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rfpca/frechet.hpp"
#include "test_support.hpp"

using namespace rfpca;
using testsupport::random_point;
using testsupport::random_tangent;

namespace {
const ManifoldSpec s2 = make_sphere(2);
const ManifoldSpec so3 = make_so3();
}  // namespace

TEST_CASE("singleton and symmetric two-point means") {
  const Point single = frechet_mean_point(s2, {{{1, 0, 0}}});
  CHECK(vm::dist(single.coords, {1, 0, 0}) < 1e-12);

  const Point mid = frechet_mean_point(s2, {{{1, 0, 0}}, {{0, 1, 0}}});
  CHECK(mid.coords[0] == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-9));
  CHECK(mid.coords[1] == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-9));
  CHECK(std::abs(mid.coords[2]) < 1e-9);
}

TEST_CASE("two-point mean is the geodesic midpoint") {
  const Point p1{{1, 0, 0}}, p2{{0, 0.6, 0.8}};
  const Point mean = frechet_mean_point(s2, {p1, p2});
  CHECK(mean.coords[0] == Catch::Approx(0.707107).margin(1e-6));
  CHECK(mean.coords[1] == Catch::Approx(0.424264).margin(1e-6));
  CHECK(mean.coords[2] == Catch::Approx(0.565685).margin(1e-6));

  const Point midpoint = exp_map(s2, {p1, vm::scaled(log_map(s2, p1, p2).coords, 0.5)});
  CHECK(geodesic_distance(s2, mean, midpoint) < 1e-9);
}

TEST_CASE("mean matches the grid-search oracle on small point sets") {
  std::mt19937_64 gen(41);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<Point> pts;
    const Point center = random_point(gen, s2);
    const int count = 2 + rep;
    for (int i = 0; i < count; ++i)
      pts.push_back(exp_map(s2, random_tangent(gen, s2, center, 0.2 + 0.2 * i)));
    const Point fitted = frechet_mean_point(s2, pts);
    const Point oracle = testsupport::grid_search_frechet_mean_s2(pts);
    CHECK(geodesic_distance(s2, fitted, oracle) < 2e-3);
  }
}

TEST_CASE("gradient vanishes and perturbations cannot improve the objective") {
  std::mt19937_64 gen(42);
  for (const auto& spec : {s2, so3}) {
    std::vector<Point> pts;
    const Point center = random_point(gen, spec);
    for (int i = 0; i < 6; ++i)
      pts.push_back(exp_map(spec, random_tangent(gen, spec, center, 0.5)));
    const FrechetConfig config;
    const Point mean = frechet_mean_point(spec, pts, config);

    Vec grad(spec.ambient_dim, 0.0);
    for (const auto& x : pts) vm::axpy(1.0 / pts.size(), log_map(spec, mean, x).coords, grad);
    CHECK(vm::norm(grad) <= config.gradient_tolerance);

    const double at_mean = frechet_objective(spec, pts, mean);
    for (int trial = 0; trial < 50; ++trial) {
      const Point nudged = exp_map(spec, random_tangent(gen, spec, mean, 1e-3));
      CHECK(at_mean <= frechet_objective(spec, pts, nudged));
    }
  }
}

TEST_CASE("rotating the inputs rotates the mean") {
  std::mt19937_64 gen(43);

  // Sphere: an arbitrary ambient rotation.
  std::vector<Point> pts;
  const Point center = random_point(gen, s2);
  for (int i = 0; i < 5; ++i) pts.push_back(exp_map(s2, random_tangent(gen, s2, center, 0.4)));
  const Vec rot = rotation_between({0.0, 0.0, 1.0}, {1 / std::sqrt(3.0), 1 / std::sqrt(3.0),
                                                     1 / std::sqrt(3.0)});
  std::vector<Point> rotated;
  for (const auto& p : pts) rotated.push_back({vm::mat_vec(rot, p.coords, 3)});
  const Point mean = frechet_mean_point(s2, pts);
  const Point mean_rotated = frechet_mean_point(s2, rotated);
  CHECK(vm::dist(mean_rotated.coords, vm::mat_vec(rot, mean.coords, 3)) < 1e-9);

  // SO(3): left translation by a fixed rotation.
  std::vector<Point> rots, translated;
  const Point base = random_point(gen, so3);
  for (int i = 0; i < 5; ++i) rots.push_back(exp_map(so3, random_tangent(gen, so3, base, 0.4)));
  const Point q = random_point(gen, so3);
  for (const auto& r : rots) translated.push_back({vm::mat_mul(q.coords, r.coords, 3)});
  const Point m1 = frechet_mean_point(so3, rots);
  const Point m2 = frechet_mean_point(so3, translated);
  CHECK(vm::dist(m2.coords, vm::mat_mul(q.coords, m1.coords, 3)) < 1e-9);
}

TEST_CASE("no convergence is reported, not hidden") {
  FrechetConfig strict;
  strict.max_iterations = 1;
  strict.gradient_tolerance = 1e-18;
  // Asymmetric pair: the projected ambient average is not yet stationary.
  std::vector<Point> pts{{{1, 0, 0}}, {{0, 0.6, 0.8}}};
  CHECK_THROWS_AS(frechet_mean_point(s2, pts, strict), Error);
  try {
    frechet_mean_point(s2, pts, strict);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("mean curve: singleton sample reproduces itself") {
  std::mt19937_64 gen(44);
  TrajectorySample s{"a", uniform_grid(6), {}};
  for (int j = 0; j < 6; ++j) s.points.push_back(random_point(gen, s2));
  const auto mean = frechet_mean_curve(s2, {s});
  for (int j = 0; j < 6; ++j) CHECK(geodesic_distance(s2, mean[j], s.points[j]) < 1e-9);
}

TEST_CASE("mean curve: mirrored pair recovers the center curve") {
  std::mt19937_64 gen(45);
  for (const auto& spec : {s2, so3}) {
    // A continuous center curve, as the warm start along the grid assumes.
    const int m = 8;
    const auto grid = uniform_grid(m);
    const Point anchor = random_point(gen, spec);
    const auto direction = random_tangent(gen, spec, anchor, 1.2);
    std::vector<Point> truth(m);
    TrajectorySample a{"a", grid, std::vector<Point>(m)};
    TrajectorySample b{"b", grid, std::vector<Point>(m)};
    for (int j = 0; j < m; ++j) {
      truth[j] = exp_map(spec, {anchor, vm::scaled(direction.coords, grid[j])});
      const auto v = random_tangent(gen, spec, truth[j], 0.7);
      a.points[j] = exp_map(spec, v);
      b.points[j] = exp_map(spec, {truth[j], vm::scaled(v.coords, -1.0)});
    }
    const auto mean = frechet_mean_curve(spec, {a, b});
    for (int j = 0; j < m; ++j) CHECK(geodesic_distance(spec, mean[j], truth[j]) < 1e-6);
  }
}

TEST_CASE("warm start changes nothing on well-separated data") {
  std::mt19937_64 gen(46);
  const int m = 10;
  std::vector<TrajectorySample> samples;
  const Point anchor = random_point(gen, s2);
  for (int i = 0; i < 7; ++i) {
    TrajectorySample s{"s" + std::to_string(i), uniform_grid(m), std::vector<Point>(m)};
    for (int j = 0; j < m; ++j)
      s.points[j] = exp_map(s2, random_tangent(gen, s2, anchor, 0.3));
    samples.push_back(std::move(s));
  }
  const auto warm = frechet_mean_curve(s2, samples);
  // Cold start: every time point solved independently.
  std::vector<Point> column(samples.size());
  for (int j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i].points[j];
    const Point cold = frechet_mean_point(s2, column);
    CHECK(geodesic_distance(s2, warm[j], cold) < 1e-8);
  }
}

TEST_CASE("antipodal data surface LogUndefined") {
  // A point antipodal to the starting iterate breaks the log map; the
  // error carries through instead of being masked.
  const Point init{{0, 0, 1}};
  std::vector<Point> pts{{{0, 0, -1}}, {{1, 0, 0}}};
  try {
    frechet_mean_point(s2, pts, {}, init);
    FAIL("expected LogUndefined");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LogUndefined);
  }
}

TEST_CASE("mean curve rejects mismatched grids") {
  TrajectorySample a{"a", uniform_grid(3), {{{1, 0, 0}}, {{1, 0, 0}}, {{1, 0, 0}}}};
  TrajectorySample b{"b", uniform_grid(4),
                     {{{1, 0, 0}}, {{1, 0, 0}}, {{1, 0, 0}}, {{1, 0, 0}}}};
  CHECK_THROWS_AS(frechet_mean_curve(s2, {a, b}), Error);
}
