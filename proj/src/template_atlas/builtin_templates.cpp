#include <cmath>
#include <numbers>

#include "iuvd/error.hpp"
#include "iuvd/template_model.hpp"

namespace iuvd {
namespace {

// A meridian sample of a surface of revolution. The first and last samples
// must be poles (radial == 0).
struct ProfilePoint {
  double radial;
  double axial;
  Vec2 normal;  // (radial, axial) components
  double v;     // chart coordinate in [0, 1] before margins
};

struct Frame {
  Vec3 e1, e2, axis;  // right-handed: e1 x e2 = axis
};

Frame frame_around(const Vec3& axis_in) {
  Frame f;
  f.axis = axis_in.normalized();
  const Vec3 helper = std::abs(f.axis.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  f.e1 = (helper - helper.dot(f.axis) * f.axis).normalized();
  f.e2 = f.axis.cross(f.e1);
  return f;
}

PartMesh revolve(const std::vector<ProfilePoint>& profile, const Vec3& center, const Frame& frame,
                 int segments, double margin, int part_index, const std::string& name) {
  PartMesh mesh;
  mesh.part_index = part_index;
  mesh.name = name;
  const int rows = static_cast<int>(profile.size());
  const int circles = rows - 2;
  const double span = 1.0 - 2.0 * margin;
  auto chart = [&](double u, double v) { return Vec2(margin + span * u, margin + span * v); };

  auto emit = [&](const ProfilePoint& pp, double theta) {
    const Vec3 radial_dir = std::cos(theta) * frame.e1 + std::sin(theta) * frame.e2;
    mesh.vertices.push_back(center + pp.radial * radial_dir + pp.axial * frame.axis);
    mesh.normals.push_back(safe_normalized(pp.normal.x() * radial_dir + pp.normal.y() * frame.axis));
  };
  const int bottom = 0;
  emit(profile.front(), 0.0);
  for (int r = 1; r <= circles; ++r) {
    for (int m = 0; m < segments; ++m) emit(profile[r], 2.0 * std::numbers::pi * m / segments);
  }
  const int top = static_cast<int>(mesh.vertices.size());
  emit(profile.back(), 0.0);

  auto ring_vertex = [&](int r, int m) { return 1 + (r - 1) * segments + (m % segments); };
  auto u_of = [&](int m) { return static_cast<double>(m) / segments; };

  for (int m = 0; m < segments; ++m) {
    const double umid = (m + 0.5) / segments;
    mesh.faces.emplace_back(bottom, ring_vertex(1, m + 1), ring_vertex(1, m));
    mesh.face_uv.push_back({chart(umid, profile[0].v), chart(u_of(m + 1), profile[1].v),
                            chart(u_of(m), profile[1].v)});
  }
  for (int r = 1; r < circles; ++r) {
    for (int m = 0; m < segments; ++m) {
      const int a = ring_vertex(r, m), b = ring_vertex(r, m + 1);
      const int c = ring_vertex(r + 1, m + 1), d = ring_vertex(r + 1, m);
      const Vec2 ua = chart(u_of(m), profile[r].v), ub = chart(u_of(m + 1), profile[r].v);
      const Vec2 uc = chart(u_of(m + 1), profile[r + 1].v), ud = chart(u_of(m), profile[r + 1].v);
      mesh.faces.emplace_back(a, b, c);
      mesh.face_uv.push_back({ua, ub, uc});
      mesh.faces.emplace_back(a, c, d);
      mesh.face_uv.push_back({ua, uc, ud});
    }
  }
  for (int m = 0; m < segments; ++m) {
    const double umid = (m + 0.5) / segments;
    mesh.faces.emplace_back(ring_vertex(circles, m), ring_vertex(circles, m + 1), top);
    mesh.face_uv.push_back({chart(u_of(m), profile[circles].v), chart(u_of(m + 1), profile[circles].v),
                            chart(umid, profile.back().v)});
  }
  return mesh;
}

PartMesh flatten(const PartMesh& smooth) {
  PartMesh flat;
  flat.part_index = smooth.part_index;
  flat.name = smooth.name;
  flat.face_uv = smooth.face_uv;
  for (const auto& f : smooth.faces) {
    const Vec3& a = smooth.vertices[f[0]];
    const Vec3& b = smooth.vertices[f[1]];
    const Vec3& c = smooth.vertices[f[2]];
    const Vec3 n = safe_normalized((b - a).cross(c - a));
    const int base = static_cast<int>(flat.vertices.size());
    for (const Vec3* p : {&a, &b, &c}) {
      flat.vertices.push_back(*p);
      flat.normals.push_back(n);
    }
    flat.faces.emplace_back(base, base + 1, base + 2);
  }
  return flat;
}

}  // namespace

CapsuleRings capsule_rings(const CapsuleSpec& spec, int tessellation) {
  if (tessellation < 4) throw ConfigError("capsule tessellation must be >= 4 segments");
  if (!(spec.radius > 0.0) || spec.length < 0.0) throw ConfigError("capsule needs radius > 0 and length >= 0");
  CapsuleRings r;
  r.segments = tessellation;
  r.cap_rings = std::max(1, tessellation / 4);
  const double arc = 2.0 * std::numbers::pi * spec.radius / tessellation;
  r.body_rings = std::max(1, static_cast<int>(std::lround(spec.length / arc)));
  return r;
}

std::size_t capsule_vertex_count(const CapsuleRings& r) {
  return static_cast<std::size_t>(r.segments) * (2 * r.cap_rings + r.body_rings - 1) + 2;
}

std::size_t capsule_face_count(const CapsuleRings& r) {
  const std::size_t circles = 2 * r.cap_rings + r.body_rings - 1;
  return 2 * static_cast<std::size_t>(r.segments) * circles;
}

PartMesh make_capsule(const CapsuleSpec& spec, int tessellation, double uv_margin, int part_index) {
  const CapsuleRings rings = capsule_rings(spec, tessellation);
  const double r = spec.radius;
  const double half = 0.5 * spec.length;
  const double quarter = 0.5 * std::numbers::pi * r;
  const double total = 2.0 * quarter + spec.length;

  std::vector<ProfilePoint> profile;
  profile.push_back({0.0, -half - r, {0.0, -1.0}, 0.0});
  for (int k = 1; k <= rings.cap_rings; ++k) {
    const double phi = 0.5 * std::numbers::pi * k / rings.cap_rings;
    profile.push_back({r * std::sin(phi), -half - r * std::cos(phi), {std::sin(phi), -std::cos(phi)},
                       r * phi / total});
  }
  for (int j = 1; j <= rings.body_rings; ++j) {
    const double t = static_cast<double>(j) / rings.body_rings;
    profile.push_back({r, -half + t * spec.length, {1.0, 0.0}, (quarter + t * spec.length) / total});
  }
  for (int k = rings.cap_rings - 1; k >= 1; --k) {
    const double phi = 0.5 * std::numbers::pi * k / rings.cap_rings;  // from the top pole
    profile.push_back({r * std::sin(phi), half + r * std::cos(phi), {std::sin(phi), std::cos(phi)},
                       (total - r * phi) / total});
  }
  profile.push_back({0.0, half + r, {0.0, 1.0}, 1.0});
  return revolve(profile, spec.center, frame_around(spec.axis), rings.segments, uv_margin, part_index,
                 spec.name);
}

MannequinConfig default_mannequin_config() {
  MannequinConfig c;
  c.parts = {
      {"torso", {0.0, 1.15, 0.0}, Vec3::UnitY(), 0.15, 0.45},
      {"head", {0.0, 1.62, 0.0}, Vec3::UnitY(), 0.10, 0.04},
      {"left_arm", {0.25, 1.12, 0.0}, Vec3::UnitY(), 0.05, 0.50},
      {"right_arm", {-0.25, 1.12, 0.0}, Vec3::UnitY(), 0.05, 0.50},
      {"left_leg", {0.085, 0.45, 0.0}, Vec3::UnitY(), 0.07, 0.70},
      {"right_leg", {-0.085, 0.45, 0.0}, Vec3::UnitY(), 0.07, 0.70},
  };
  return c;
}

TemplateModel generate_toy_mannequin(const MannequinConfig& config) {
  if (config.tessellation < 4) throw ConfigError("mannequin tessellation must be >= 4 segments");
  if (config.uv_margin < 0.0 || config.uv_margin >= 0.5) throw ConfigError("uv margin must be in [0, 0.5)");
  TemplateModel model;
  for (std::size_t i = 0; i < config.parts.size(); ++i) {
    model.parts.push_back(
        make_capsule(config.parts[i], config.tessellation, config.uv_margin, static_cast<int>(i)));
  }
  validate_template(model);
  return model;
}

TemplateModel generate_sphere_template(const SphereConfig& config) {
  if (config.segments < 4 || config.rings < 2) throw ConfigError("sphere needs >= 4 segments and >= 2 rings");
  std::vector<ProfilePoint> profile;
  for (int k = 0; k <= config.rings; ++k) {
    const double phi = std::numbers::pi * k / config.rings;  // from the bottom pole
    const double s = std::sin(phi), c = -std::cos(phi);
    profile.push_back({config.radius * s, config.radius * c, {s, c}, static_cast<double>(k) / config.rings});
  }
  profile.front().radial = profile.back().radial = 0.0;
  TemplateModel model;
  PartMesh mesh = revolve(profile, config.center, frame_around(Vec3::UnitY()), config.segments,
                          config.uv_margin, 0, "sphere");
  model.parts.push_back(config.flat ? flatten(mesh) : std::move(mesh));
  validate_template(model);
  return model;
}

TemplateModel generate_quad_template(double size) {
  PartMesh quad;
  quad.name = "quad";
  quad.vertices = {{0, 0, 0}, {size, 0, 0}, {size, size, 0}, {0, size, 0}};
  quad.normals.assign(4, Vec3::UnitZ());
  quad.faces = {{0, 1, 2}, {0, 2, 3}};
  quad.face_uv = {{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1)}, {Vec2(0, 0), Vec2(1, 1), Vec2(0, 1)}};
  TemplateModel model;
  model.parts.push_back(std::move(quad));
  validate_template(model);
  return model;
}

}  // namespace iuvd
