#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "iuvd/pipeline.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace iuvd;

namespace {

LabeledMesh sphere_mesh(double radius, const Vec3& center = Vec3::Zero(), int segments = 128, int rings = 64) {
  SphereConfig cfg;
  cfg.radius = radius;
  cfg.center = center;
  cfg.segments = segments;
  cfg.rings = rings;
  return template_part_mesh(generate_sphere_template(cfg), 0);
}

// Mean |n_gt - n_pred| with the nearest prediction point found by exhaustive search.
double brute_force_normals(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n, std::uint64_t seed) {
  const FlatMesh g = FlatMesh::from_labeled(gt);
  const FlatMesh p = FlatMesh::from_labeled(pred);
  const SurfaceSamples s = sample_surface(g, n, seed);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Vec3 normal = Vec3::Zero();
    for (const auto& f : p.faces) {
      Vec3 bary;
      const Vec3 q = closest_point_on_triangle(s.points[i], p.positions[f[0]], p.positions[f[1]], p.positions[f[2]], bary);
      const double d = (q - s.points[i]).squaredNorm();
      if (d < best) {
        best = d;
        normal = (bary[0] * p.normals[f[0]] + bary[1] * p.normals[f[1]] + bary[2] * p.normals[f[2]]).normalized();
      }
    }
    sum += (s.normals[i] - normal).norm();
  }
  return sum / n;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("identical meshes score zero") {
  const LabeledMesh s = sphere_mesh(0.5, Vec3::Zero(), 32, 16);
  const MetricsReport r = evaluate_metrics(s, s, 2000, 1);
  CHECK(r.p2s_cm < 1e-9);
  CHECK(r.inverse_p2s_cm < 1e-9);
  CHECK(r.chamfer_cm < 1e-9);
  CHECK(r.normal_pointwise < 1e-6);
  CHECK(r.samples == 2000);
}

TEST_CASE("concentric spheres are one offset apart") {
  const double delta = 0.01;
  const LabeledMesh a = sphere_mesh(0.5);
  const LabeledMesh b = sphere_mesh(0.5 + delta);
  const MetricsReport r = p2s_chamfer(a, b, 10000, 7);
  CHECK(r.chamfer_cm == doctest::Approx(100.0 * delta).epsilon(0.05));
  CHECK(r.p2s_cm == doctest::Approx(100.0 * delta).epsilon(0.05));
}

TEST_CASE("chamfer is symmetric") {
  const LabeledMesh a = sphere_mesh(0.5, Vec3::Zero(), 32, 16);
  const LabeledMesh b = sphere_mesh(0.45, Vec3(0.03, 0.0, 0.0), 24, 12);
  const MetricsReport ab = p2s_chamfer(a, b, 3000, 5);
  const MetricsReport ba = p2s_chamfer(b, a, 3000, 5);
  CHECK(ab.chamfer_cm == ba.chamfer_cm);
  CHECK(ab.p2s_cm == ba.inverse_p2s_cm);
}

TEST_CASE("too few samples or empty meshes are errors") {
  const LabeledMesh a = sphere_mesh(0.5, Vec3::Zero(), 16, 8);
  CHECK_THROWS_AS(p2s_chamfer(a, a, 10, 1), Error);
  CHECK_THROWS_AS(p2s_chamfer(a, LabeledMesh{}, 1000, 1), Error);
  CHECK_THROWS_AS(normal_consistency(LabeledMesh{}, a, 1000, 1), Error);
}

TEST_CASE("sampling is deterministic for a seed") {
  const FlatMesh m = FlatMesh::from_labeled(sphere_mesh(0.5, Vec3::Zero(), 16, 8));
  const SurfaceSamples a = sample_surface(m, 100, 42);
  const SurfaceSamples b = sample_surface(m, 100, 42);
  const SurfaceSamples c = sample_surface(m, 100, 43);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
}

TEST_CASE("normal consistency of a sphere with its half-turn is zero") {
  const LabeledMesh a = sphere_mesh(0.5, Vec3::Zero(), 64, 32);
  LabeledMesh b = a;
  const Eigen::AngleAxisd turn(std::numbers::pi, Vec3::UnitY());
  for (auto& v : b.vertices) v = turn * v;
  CHECK(normal_consistency(a, a, 2000, 3) < 1e-6);
  CHECK(normal_consistency(a, b, 2000, 3) < 1e-6);
}

TEST_CASE("normal consistency of an offset sphere matches brute force") {
  const LabeledMesh a = sphere_mesh(0.5, Vec3::Zero(), 24, 12);
  const LabeledMesh b = sphere_mesh(0.5, Vec3(0.05, 0.0, 0.0), 24, 12);
  const double fast = normal_consistency(a, b, 1000, 9);
  CHECK(fast > 0.01);
  CHECK(fast == doctest::Approx(brute_force_normals(a, b, 1000, 9)).epsilon(1e-9));
}

TEST_CASE("displaced template pushes the surface out by h") {
  SphereConfig cfg;
  cfg.radius = 0.5;
  const TemplateModel s = generate_sphere_template(cfg);
  const LabeledMesh d = displaced_template(s, DisplacementField::constant(0.02), 2);
  REQUIRE(!d.empty());
  CHECK(d.face_count() == s.face_count() * 4);
  const double sag = cfg.radius * (1.0 - std::cos(std::numbers::pi / cfg.rings));
  for (const auto& v : d.vertices) {
    CHECK(v.norm() <= 0.52 + 1e-9);
    CHECK(v.norm() >= 0.52 - sag - 1e-9);
  }
}

TEST_CASE("timing summary") {
  const TimingSummary one = summarize({4.0});
  CHECK(one.min == 4.0);
  CHECK(one.max == 4.0);
  CHECK(one.median == 4.0);
  const TimingSummary odd = summarize({3.0, 1.0, 2.0});
  CHECK(odd.median == 2.0);
  CHECK(odd.min == 1.0);
  CHECK(odd.max == 3.0);
  CHECK(summarize({1.0, 2.0, 3.0, 10.0}).median == 2.5);
}

TEST_CASE("complexity ratio arithmetic") {
  const double expect = 24.0 * 64 * 64 * 21 / (257.0 * 257.0 * 257.0);
  CHECK(complexity_ratio(24, 64, 64, 21, 257) == doctest::Approx(expect));
  CHECK(std::abs(complexity_ratio(24, 64, 64, 21, 257) - 0.122) <= 0.001);
}

TEST_CASE("representation names") {
  for (Representation r : all_representations()) CHECK(parse_representation(to_string(r)) == r);
  CHECK(all_representations().size() == 5);
  CHECK(is_xyz(Representation::kXyzOctree));
  CHECK_FALSE(is_xyz(Representation::kIuvdFeedback));
  CHECK_THROWS_AS(parse_representation("uvd-magic"), ConfigError);
}

TEST_CASE("XYZ runs need a BVH") {
  const PreparedTemplate prep = prepare_template(generate_sphere_template(), AtlasOptions{16});
  SphereOracle ball(Vec3::Zero(), 0.5);
  CHECK_THROWS_AS(run_representation(Representation::kXyzFull, prep, ball, PipelineConfig{}), Error);
}

TEST_CASE("bench with one repeat reports degenerate statistics") {
  const PreparedTemplate prep = prepare_template(generate_toy_mannequin(), AtlasOptions{16});
  auto oracle = make_provider("oracle:sin");
  BenchConfig cfg;
  cfg.repeats = 1;
  cfg.reps = {Representation::kIuvdFull, Representation::kIuvdFeedback, Representation::kXyzOctree};
  cfg.pipeline.xyz_n = 33;
  const BenchReport r = run_benchmark(prep, *oracle, cfg);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    for (const TimingSummary* t : {&row.sdf_ms, &row.inference_ms, &row.extraction_ms, &row.total_ms}) {
      CHECK(t->min == t->max);
      CHECK(t->median == t->min);
    }
    CHECK(row.counts_consistent);
  }
  CHECK(r.rows[1].inferred_points < r.rows[0].inferred_points);
  CHECK(r.paper_complexity_ratio == doctest::Approx(complexity_ratio(24, 64, 64, 21, 257)));
  CHECK(r.complexity_ratio == doctest::Approx(complexity_ratio(6, 16, 16, 21, 33)));

  const auto j = nlohmann::json::parse(bench_to_json(r));
  CHECK(j["rows"].size() == 3);
  const std::string csv = bench_to_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

}  // TEST_SUITE
