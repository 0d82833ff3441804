#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>

#include "doctest.h"
#include "iuvd/error.hpp"
#include "iuvd/pipeline.hpp"
#include "iuvd/uv_scaling.hpp"

using namespace iuvd;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("iuvd_test_" + name);
}

// Mean 3D triangle area over mean UV triangle area, summed independently.
double area_ratio(const PartMesh& p) {
  double xyz = 0.0, uv = 0.0;
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    const Vec3i& t = p.faces[f];
    const Vec3 a = p.vertices[t[0]], b = p.vertices[t[1]], c = p.vertices[t[2]];
    xyz += 0.5 * (b - a).cross(c - a).norm();
    const Vec2 e1 = p.face_uv[f][1] - p.face_uv[f][0];
    const Vec2 e2 = p.face_uv[f][2] - p.face_uv[f][0];
    uv += 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  }
  return xyz / uv;
}

TemplateModel two_quads(double size_a, double size_b) {
  TemplateModel m;
  for (int i = 0; i < 2; ++i) {
    PartMesh p = generate_quad_template(i == 0 ? size_a : size_b).parts[0];
    p.part_index = i;
    p.name = "quad" + std::to_string(i);
    // Shrink the chart so there is room to grow.
    for (auto& uv : p.face_uv)
      for (auto& c : uv) c = Vec2(0.25, 0.25) + 0.5 * c;
    m.parts.push_back(p);
  }
  return m;
}

}  // namespace

TEST_SUITE("template") {

TEST_CASE("quad template is a minimal well-formed input") {
  const TemplateModel quad = generate_quad_template();
  REQUIRE(quad.part_count() == 1);
  CHECK(quad.parts[0].vertices.size() == 4);
  CHECK(quad.parts[0].faces.size() == 2);
  CHECK_NOTHROW(validate_template(quad));

  const auto path = temp_path("quad.obj");
  save_template(quad, path);
  const TemplateModel back = load_template(path);
  CHECK(back.part_count() == 1);
  CHECK(back.parts[0].vertices.size() == 4);
  CHECK(back.parts[0].faces.size() == 2);
}

TEST_CASE("OBJ without texture coordinates is rejected") {
  const auto path = temp_path("nouv.obj");
  {
    std::ofstream out(path);
    out << "v 0 0 0\nv 1 0 0\nv 0 1 0\ng part_0\nf 1 2 3\n";
  }
  try {
    load_template(path);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lacks UV parameterization") != std::string::npos);
  }
}

TEST_CASE("missing template file is a config error") {
  CHECK_THROWS_AS(load_template(temp_path("does_not_exist.obj")), ConfigError);
}

TEST_CASE("toy mannequin survives an OBJ round trip") {
  const TemplateModel toy = generate_toy_mannequin();
  REQUIRE(toy.part_count() == 6);
  const auto path = temp_path("toy.obj");
  save_template(toy, path);
  std::vector<std::string> warnings;
  const TemplateModel back = load_template(path, manifest_of(toy), &warnings);
  REQUIRE(back.part_count() == toy.part_count());
  for (int i = 0; i < toy.part_count(); ++i) {
    CHECK(back.parts[i].faces.size() == toy.parts[i].faces.size());
    CHECK(back.parts[i].vertices.size() == toy.parts[i].vertices.size());
    CHECK(back.parts[i].name == toy.parts[i].name);
  }
  CHECK(warnings.empty());
}

TEST_CASE("manifest round trip keeps passthrough and camera") {
  TemplateManifest m;
  m.parts = {"a", "b", "c"};
  m.passthrough = {1};
  Camera cam;
  cam.scale = 2.5;
  cam.translation = Vec2(0.1, -0.2);
  m.camera = cam;
  const auto path = temp_path("manifest.json");
  save_manifest(m, path);
  const TemplateManifest back = load_manifest(path);
  CHECK(back.parts == m.parts);
  CHECK(back.passthrough == m.passthrough);
  REQUIRE(back.camera.has_value());
  CHECK(back.camera->scale == doctest::Approx(2.5));
  CHECK(back.camera->translation.y() == doctest::Approx(-0.2));
}

TEST_CASE("toy mannequin charts are injective") {
  const TemplateModel toy = generate_toy_mannequin();
  CHECK_NOTHROW(check_uv_injective(toy));
  CHECK_NOTHROW(rasterize_atlas(toy, 64, 64));
  for (const auto& p : toy.parts) CHECK(count_nonmanifold_edges(p) == 0);
}

TEST_CASE("capsule tessellation matches the closed form") {
  CapsuleSpec arm;
  arm.radius = 0.5;
  arm.length = 1.0;
  const CapsuleRings r = capsule_rings(arm, 16);
  const PartMesh mesh = make_capsule(arm, 16, 0.05, 0);
  // Interior circles of latitude each carry one vertex per segment, plus two poles.
  const std::size_t circles = 2 * r.cap_rings + r.body_rings - 1;
  CHECK(mesh.vertices.size() == 16 * circles + 2);
  CHECK(mesh.vertices.size() == capsule_vertex_count(r));
  CHECK(mesh.faces.size() == capsule_face_count(r));

  // A closed genus-0 surface: V - E + F = 2, every edge shared by two faces.
  std::map<std::pair<int, int>, int> edges;
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  for (const auto& [e, n] : edges) CHECK(n == 2);
  const long euler = static_cast<long>(mesh.vertices.size()) - static_cast<long>(edges.size()) +
                     static_cast<long>(mesh.faces.size());
  CHECK(euler == 2);
}

TEST_CASE("tessellation below four segments is rejected") {
  MannequinConfig cfg = default_mannequin_config();
  cfg.tessellation = 2;
  CHECK_THROWS_AS(generate_toy_mannequin(cfg), ConfigError);
}

TEST_CASE("scale factors follow the area ratio") {
  const std::vector<double> r = {2.0, 1.0};
  const auto s = uv_scale_factors(r, UvScaleMode::kLinear);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(0.5));
  const auto q = uv_scale_factors(r, UvScaleMode::kSqrt);
  CHECK(q[1] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("equal ratios are a fixed point") {
  const TemplateModel m = two_quads(1.0, 1.0);
  const TemplateModel s = scale_uv_charts(m);
  for (int i = 0; i < 2; ++i)
    for (std::size_t f = 0; f < m.parts[i].face_uv.size(); ++f)
      for (int k = 0; k < 3; ++k)
        CHECK((s.parts[i].face_uv[f][k] - m.parts[i].face_uv[f][k]).norm() < 1e-12);
}

TEST_CASE("two quads with ratio 4:1 scale the smaller chart by one quarter") {
  const TemplateModel m = two_quads(2.0, 1.0);
  const auto r = uv_area_ratios(m);
  CHECK(r[0] == doctest::Approx(4.0 * r[1]));
  const TemplateModel s = scale_uv_charts(m);
  CHECK(area_ratio(s.parts[0]) == doctest::Approx(area_ratio(m.parts[0])));
  // Literal scaling multiplies UV lengths by r/r_max, so UV areas shrink by its square.
  CHECK(area_ratio(s.parts[1]) == doctest::Approx(area_ratio(m.parts[1]) * 16.0));
}

TEST_CASE("toy mannequin scaling invariants") {
  const TemplateModel toy = generate_toy_mannequin();
  std::vector<double> before;
  for (const auto& p : toy.parts) before.push_back(area_ratio(p));
  const double rmax = *std::max_element(before.begin(), before.end());
  const int imax = static_cast<int>(std::max_element(before.begin(), before.end()) - before.begin());

  const TemplateModel scaled = scale_uv_charts(toy);
  CHECK_NOTHROW(validate_template(scaled));
  for (int i = 0; i < toy.part_count(); ++i) {
    const double after = area_ratio(scaled.parts[i]);
    CHECK(after == doctest::Approx(rmax * rmax / before[i]).epsilon(1e-9));
    for (const auto& uv : scaled.parts[i].face_uv)
      for (const auto& c : uv) {
        CHECK(c.x() >= 0.0);
        CHECK(c.x() <= 1.0);
        CHECK(c.y() >= 0.0);
        CHECK(c.y() <= 1.0);
      }
  }
  for (std::size_t f = 0; f < toy.parts[imax].face_uv.size(); ++f)
    for (int k = 0; k < 3; ++k)
      CHECK((scaled.parts[imax].face_uv[f][k] - toy.parts[imax].face_uv[f][k]).norm() < 1e-12);
}

TEST_CASE("zero-area UV triangle names its part") {
  TemplateModel m = two_quads(1.0, 1.0);
  m.parts[1].face_uv[0] = {Vec2(0.5, 0.5), Vec2(0.5, 0.5), Vec2(0.6, 0.6)};
  try {
    uv_area_ratios(m);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("part 1") != std::string::npos);
  }
}

TEST_CASE("sphere template lies on its sphere") {
  SphereConfig cfg;
  cfg.radius = 0.5;
  const TemplateModel s = generate_sphere_template(cfg);
  for (const auto& v : s.parts[0].vertices) CHECK(v.norm() == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t i = 0; i < s.parts[0].vertices.size(); ++i)
    CHECK(s.parts[0].normals[i].dot(s.parts[0].vertices[i].normalized()) > 0.99);
}

TEST_CASE("camera rejects a degenerate scale") {
  Camera c;
  c.scale = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

}  // TEST_SUITE
