#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "iuvd/pipeline.hpp"
#include "test_util.hpp"

using namespace iuvd;

namespace {

TemplateModel single_triangle() {
  PartMesh p;
  p.name = "tri";
  p.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  p.normals.assign(3, Vec3::UnitZ());
  p.faces = {{0, 1, 2}};
  p.face_uv = {{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}};
  TemplateModel m;
  m.parts.push_back(p);
  return m;
}

// Quad at height z; one part per call.
PartMesh quad_at(double z, int part_index) {
  PartMesh p = generate_quad_template(1.0).parts[0];
  for (auto& v : p.vertices) v.z() = z;
  p.part_index = part_index;
  p.name = "quad" + std::to_string(part_index);
  return p;
}

}  // namespace

TEST_SUITE("atlas") {

TEST_CASE("identity parameterization rasterizes to x = u, y = v") {
  const AtlasMaps a = rasterize_atlas(single_triangle(), 64, 64);
  std::size_t covered = 0;
  for (int v = 0; v < 64; ++v)
    for (int u = 0; u < 64; ++u) {
      const Vec2 uv = a.texel_uv(u, v);
      const double s = uv.x() + uv.y();
      const bool masked = a.parts[0].mask_original[a.index(u, v)];
      // Centers exactly on the hypotenuse are settled by the fill rule.
      if (std::abs(s - 1.0) > 1e-12) CHECK(masked == (s < 1.0));
      if (!masked) continue;
      ++covered;
      const Vec3f p = a.parts[0].source_points[a.index(u, v)];
      CHECK(std::abs(p.x() - uv.x()) < 1e-6);
      CHECK(std::abs(p.y() - uv.y()) < 1e-6);
      CHECK(std::abs(p.z()) < 1e-6);
      CHECK(a.parts[0].normals[a.index(u, v)].z() == doctest::Approx(1.0));
    }
  CHECK(covered >= 64 * 63 / 2);
  CHECK(covered <= 64 * 65 / 2);
}

TEST_CASE("shared diagonal covers every texel exactly once") {
  // An overlap would throw; a gap would leave a texel unmasked.
  const AtlasMaps a = rasterize_atlas(generate_quad_template(), 32, 32);
  CHECK(a.masked_original_count() == 32u * 32u);
  for (int f : a.parts[0].face) CHECK((f == 0 || f == 1));
}

TEST_CASE("overlapping charts raise a chart-overlap error") {
  TemplateModel m = generate_quad_template();
  m.parts[0].face_uv[1] = m.parts[0].face_uv[0];
  CHECK_THROWS_AS(rasterize_atlas(m, 32, 32), Error);
}

TEST_CASE("resolution 4x4 is rejected") {
  CHECK_THROWS_AS(rasterize_atlas(generate_quad_template(), 4, 4), ConfigError);
}

TEST_CASE("sphere atlas points stay within the tessellation sagitta") {
  SphereConfig cfg;
  cfg.radius = 0.5;
  const TemplateModel s = generate_sphere_template(cfg);
  const AtlasMaps a = rasterize_atlas(s, 128, 128);
  // Widest triangle circumradius on this grid is about half a cell diagonal.
  const double step = std::numbers::pi / cfg.rings;
  const double sagitta = cfg.radius * (1.0 - std::cos(step * std::sqrt(2.0) / 2.0));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < a.texel_count(); ++i) {
    if (!a.parts[0].mask_original[i]) continue;
    const double r = a.parts[0].source_points[i].cast<double>().norm();
    CHECK(r <= cfg.radius + 1e-6);
    CHECK(r >= cfg.radius - sagitta - 1e-6);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("chart orientation follows the UV handedness") {
  TemplateModel m = generate_quad_template();
  CHECK(chart_orientation(rasterize_atlas(m, 16, 16), 0) == 1);
  for (auto& uv : m.parts[0].face_uv)
    for (auto& c : uv) c.x() = 1.0 - c.x();
  CHECK(chart_orientation(rasterize_atlas(m, 16, 16), 0) == -1);
}

TEST_CASE("zero dilation iterations leave the atlas unchanged") {
  const AtlasMaps a = rasterize_atlas(single_triangle(), 32, 32);
  const AtlasMaps b = dilate_and_extrapolate(a, 0);
  CHECK(b.parts[0].mask == a.parts[0].mask);
  CHECK(b.parts[0].source_points == a.parts[0].source_points);
}

TEST_CASE("a single texel spreads a constant extension to its ring") {
  AtlasMaps a = test::flat_atlas(9, 9, [](int u, int v) { return u == 4 && v == 4; });
  a.parts[0].source_points[a.index(4, 4)] = Vec3f(0.3f, -0.2f, 0.7f);
  const AtlasMaps b = dilate_and_extrapolate(a, 1);
  int count = 0;
  for (int v = 0; v < 9; ++v)
    for (int u = 0; u < 9; ++u) {
      const bool ring = std::abs(u - 4) <= 1 && std::abs(v - 4) <= 1;
      CHECK(static_cast<bool>(b.parts[0].mask[b.index(u, v)]) == ring);
      if (!ring) continue;
      ++count;
      CHECK((b.parts[0].source_points[b.index(u, v)] - Vec3f(0.3f, -0.2f, 0.7f)).norm() < 1e-7);
    }
  CHECK(count == 9);
  CHECK(b.parts[0].mask_original == a.parts[0].mask_original);
}

TEST_CASE("dilation continues a linear field") {
  auto inside = [](int u, int v) { return u >= 8 && u <= 16 && v >= 8 && v <= 16; };
  AtlasMaps a = test::flat_atlas(25, 25, inside);
  for (int v = 0; v < 25; ++v)
    for (int u = 0; u < 25; ++u)
      a.parts[0].source_points[a.index(u, v)] = Vec3f(0.01f * u, 0.01f * v, 0.01f * u);
  const AtlasMaps b = dilate_and_extrapolate(a, 2);
  int grown = 0;
  for (int v = 0; v < 25; ++v)
    for (int u = 0; u < 25; ++u) {
      const bool expect = u >= 6 && u <= 18 && v >= 6 && v <= 18;
      CHECK(static_cast<bool>(b.parts[0].mask[b.index(u, v)]) == expect);
      if (!expect || inside(u, v)) continue;
      ++grown;
      const Vec3f p = b.parts[0].source_points[b.index(u, v)];
      CHECK(std::abs(p.z() - 0.01f * u) < 1e-5);
      CHECK(std::abs(p.x() - 0.01f * u) < 1e-5);
      CHECK(std::abs(p.y() - 0.01f * v) < 1e-5);
      CHECK(b.parts[0].normals[b.index(u, v)].norm() == doctest::Approx(1.0f));
    }
  CHECK(grown == 13 * 13 - 9 * 9);
}

TEST_CASE("front-facing triangle with no occluder is fully visible") {
  const TemplateModel m = single_triangle();
  AtlasMaps a = rasterize_atlas(m, 32, 32);
  a = compute_visibility(a, m, m.camera_or_default(), 128);
  for (std::size_t i = 0; i < a.texel_count(); ++i)
    if (a.parts[0].mask[i]) CHECK(a.parts[0].visible[i] == 1);
}

TEST_CASE("the far quad of two parallel quads is hidden") {
  TemplateModel m;
  m.parts.push_back(quad_at(0.5, 0));
  m.parts.push_back(quad_at(0.0, 1));
  AtlasMaps a = rasterize_atlas(m, 16, 16);
  a = compute_visibility(a, m, m.camera_or_default(), 256);
  std::size_t near_visible = 0, far_visible = 0, n = 0;
  for (std::size_t i = 0; i < a.texel_count(); ++i) {
    if (!a.parts[0].mask_original[i]) continue;
    ++n;
    near_visible += a.parts[0].visible[i];
    far_visible += a.parts[1].visible[i];
  }
  CHECK(near_visible == n);
  CHECK(far_visible == 0);
}

TEST_CASE("half of a sphere faces the camera") {
  const TemplateModel s = generate_sphere_template();
  const int res = 512;
  AtlasMaps a = rasterize_atlas(s, 128, 128);
  a = compute_visibility(a, s, s.camera_or_default(), res);
  // Equirectangular texels cover area proportional to cos(latitude).
  double vis = 0.0, total = 0.0;
  const double r = 0.5;
  const double pixel = 2.0 / (res * s.camera_or_default().scale);
  // Points within a pixel of the silhouette see empty neighbors and pass.
  const double rim = std::sqrt(2.0 * r * 2.0 * pixel) / r;
  for (std::size_t i = 0; i < a.texel_count(); ++i) {
    if (!a.parts[0].mask_original[i]) continue;
    const Vec3 p = a.parts[0].source_points[i].cast<double>() / r;
    const double w = std::sqrt(std::max(0.0, 1.0 - p.y() * p.y()));
    total += w;
    vis += w * a.parts[0].visible[i];
    if (p.z() > 0.02) CHECK(a.parts[0].visible[i] == 1);
    if (p.z() < -rim) CHECK(a.parts[0].visible[i] == 0);
  }
  const double fraction = vis / total;
  CHECK(fraction >= 0.5 - 0.01);
  CHECK(fraction <= 0.5 + 0.5 * rim + 0.01);
}

TEST_CASE("degenerate camera scale is rejected by visibility") {
  const TemplateModel m = single_triangle();
  const AtlasMaps a = rasterize_atlas(m, 16, 16);
  Camera c;
  c.scale = 0.0;
  CHECK_THROWS_AS(compute_visibility(a, m, c, 64), ConfigError);
}

TEST_CASE("atlas file round trip") {
  PreparedTemplate prep = prepare_template(generate_toy_mannequin(), AtlasOptions{32});
  const auto path = std::filesystem::temp_directory_path() / "iuvd_test_atlas.iuva";
  save_atlas(prep.atlas, path);
  const AtlasMaps b = load_atlas(path);
  REQUIRE(b.part_count() == prep.atlas.part_count());
  CHECK(b.width == 32);
  CHECK(b.height == 32);
  for (int i = 0; i < b.part_count(); ++i) {
    CHECK(b.parts[i].source_points == prep.atlas.parts[i].source_points);
    CHECK(b.parts[i].normals == prep.atlas.parts[i].normals);
    CHECK(b.parts[i].mask == prep.atlas.parts[i].mask);
    CHECK(b.parts[i].mask_original == prep.atlas.parts[i].mask_original);
    CHECK(b.parts[i].visible == prep.atlas.parts[i].visible);
    CHECK(b.parts[i].orientation == prep.atlas.parts[i].orientation);
  }
}

TEST_CASE("sqrt and linear scaling produce different valid atlases") {
  const TemplateModel toy = generate_toy_mannequin();
  AtlasOptions lin{64};
  AtlasOptions sq{64};
  sq.uv_scale = UvScaleMode::kSqrt;
  const PreparedTemplate a = prepare_template(toy, lin);
  const PreparedTemplate b = prepare_template(toy, sq);
  CHECK(a.atlas.masked_original_count() != b.atlas.masked_original_count());
  CHECK(b.atlas.masked_original_count() > a.atlas.masked_original_count());
  CHECK_NOTHROW(validate_template(a.model));
  CHECK_NOTHROW(validate_template(b.model));
}

}  // TEST_SUITE
