#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iuvd/geometry.hpp"

namespace iuvd {

// One body part of the template: a triangle mesh with a UV chart.
// UVs are stored per face corner so a closed surface can be cut open
// along a seam without duplicating its 3D vertices.
struct PartMesh {
  int part_index = 0;
  std::string name;
  std::vector<Vec3> vertices;  // meters
  std::vector<Vec3> normals;   // unit, one per vertex
  std::vector<Vec3i> faces;
  std::vector<std::array<Vec2, 3>> face_uv;

  std::size_t face_count() const { return faces.size(); }
};

// Weak-perspective camera looking down -Z; larger z is closer to the viewer.
// Image-plane coordinates are scale * (x, y) + translation, with the visible
// frame spanning [-1, 1]^2.
struct Camera {
  double scale = 1.0;
  Vec2 translation = Vec2::Zero();

  Vec2 project(const Vec3& p) const { return scale * p.head<2>() + translation; }
  void validate() const;

  // Frames the box with a 10% border.
  static Camera fit(const Box3& bounds);
};

struct TemplateModel {
  std::vector<PartMesh> parts;
  std::vector<int> passthrough_parts;  // sorted, unique
  std::optional<Camera> camera;

  int part_count() const { return static_cast<int>(parts.size()); }
  std::size_t face_count() const;
  std::size_t vertex_count() const;
  bool is_passthrough(int part) const;
  Box3 bounds() const;
  double diagonal() const { return bounds().diagonal().norm(); }
  Camera camera_or_default() const { return camera ? *camera : Camera::fit(bounds()); }
};

// Area-weighted average of incident face normals.
std::vector<Vec3> area_weighted_normals(const std::vector<Vec3>& vertices,
                                        const std::vector<Vec3i>& faces);

// Checks the structural invariants: index ranges, UVs in [0,1]^2, unit
// normals, consecutive part indices. Throws ConfigError.
void validate_template(const TemplateModel& model);

// Throws ConfigError naming the first part whose UV triangles overlap.
void check_uv_injective(const TemplateModel& model);

// Edges shared by more than two faces, summed over parts.
std::size_t count_nonmanifold_edges(const PartMesh& part);

// --- file I/O ---------------------------------------------------------------

struct TemplateManifest {
  std::vector<std::string> parts;
  std::vector<int> passthrough;
  std::optional<Camera> camera;
};

TemplateManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const TemplateManifest& manifest, const std::filesystem::path& path);

// Reads an OBJ whose faces are grouped with `g part_<k>`. Non-fatal problems
// (non-manifold edges) are appended to `warnings` when it is non-null.
TemplateModel load_template(const std::filesystem::path& obj_path,
                            const TemplateManifest& manifest = {},
                            std::vector<std::string>* warnings = nullptr);

void save_template(const TemplateModel& model, const std::filesystem::path& obj_path);
TemplateManifest manifest_of(const TemplateModel& model);

// --- built-in templates -------------------------------------------------------

struct CapsuleSpec {
  std::string name;
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
  double radius = 0.1;
  double length = 0.2;  // cylinder section, excluding the caps
};

struct CapsuleRings {
  int segments = 0;    // around the axis
  int cap_rings = 0;   // latitude bands per hemispherical cap
  int body_rings = 0;  // bands along the cylinder
};

CapsuleRings capsule_rings(const CapsuleSpec& spec, int tessellation);
std::size_t capsule_vertex_count(const CapsuleRings& rings);
std::size_t capsule_face_count(const CapsuleRings& rings);
PartMesh make_capsule(const CapsuleSpec& spec, int tessellation, double uv_margin, int part_index);

struct MannequinConfig {
  std::vector<CapsuleSpec> parts;
  int tessellation = 32;
  double uv_margin = 0.05;
};

// Torso, head, two arms, two legs; roughly 1.7 m tall, standing on y = 0.
MannequinConfig default_mannequin_config();
TemplateModel generate_toy_mannequin(const MannequinConfig& config = default_mannequin_config());

struct SphereConfig {
  double radius = 0.5;
  Vec3 center = Vec3::Zero();
  int segments = 64;  // longitude
  int rings = 32;     // latitude
  double uv_margin = 0.05;
  // Duplicate vertices per face and use face normals. Lifting along a face
  // normal keeps the source point as the nearest surface point.
  bool flat = false;
};

// Single-part UV sphere with poles on the y axis and an equirectangular chart.
TemplateModel generate_sphere_template(const SphereConfig& config = {});

// One quad split into two triangles, UVs covering [0,1]^2, facing +z.
TemplateModel generate_quad_template(double size = 1.0);

}  // namespace iuvd
