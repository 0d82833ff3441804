#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "iuvd/atlas.hpp"
#include "iuvd/occupancy.hpp"
#include "iuvd/query.hpp"
#include "iuvd/surface.hpp"

namespace iuvd {

// Single triangle soup with the attributes the XYZ pipeline needs.
struct FlatMesh {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;  // per vertex
  std::vector<Vec3i> faces;
  std::vector<int> face_part;
  std::vector<std::array<Vec2, 3>> face_uv;

  static FlatMesh from_template(const TemplateModel& model);
  // Normals are area-weighted, chart coordinates zero.
  static FlatMesh from_labeled(const LabeledMesh& mesh);
};

struct NearestPoint {
  double sdf = 0.0;       // negative inside
  double distance = 0.0;  // unsigned
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // interpolated vertex normal
  Vec3 barycentric = Vec3::Zero();
  int face = -1;
};

// Closest point on triangle abc; barycentric weights of the result go to bary.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, Vec3& bary);

// Median-split AABB tree with at most four triangles per leaf. Inside/outside
// comes from angle-weighted pseudo-normals on the mesh welded by position.
class TriangleBvh {
 public:
  explicit TriangleBvh(FlatMesh mesh);

  NearestPoint nearest(const Vec3& p) const;
  const FlatMesh& mesh() const { return mesh_; }
  Box3 bounds() const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t max_leaf_size() const;
  // Triangle ids in leaf order; a permutation of all faces.
  const std::vector<int>& leaf_order() const { return order_; }

 private:
  struct Node {
    Box3 box;
    int left = -1, right = -1;  // children, -1 for leaves
    int first = 0, count = 0;   // range in order_
  };
  int build(int first, int count);
  Vec3 pseudo_normal(int face, const Vec3& bary) const;

  FlatMesh mesh_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Vec3> face_normal_;
  std::vector<int> weld_;                       // vertex -> welded id
  std::vector<Vec3> vertex_pseudo_;             // per welded vertex
  std::vector<std::array<Vec3, 3>> edge_pseudo_;  // per face: edges 01, 12, 20
};

FeatureVector features_xyz(const Vec3& p, const TriangleBvh& bvh, const NormalImages* cloth = nullptr,
                           const DepthBuffer* visibility = nullptr, SurfaceCoord* coord = nullptr);

enum class XyzStrategy { kFull, kOctree };

struct XyzQueryOptions {
  int n = 257;
  XyzStrategy strategy = XyzStrategy::kFull;
  int levels = 3;
  Box3 box;
  const NormalImages* cloth = nullptr;
  const DepthBuffer* visibility = nullptr;
  std::size_t chunk = 8192;
};

// Template bounds padded by alpha * d_max on every side.
Box3 xyz_query_box(const TemplateModel& model, double alpha, int d_max);

// N^3 grid over box, index (z * N + y) * N + x.
struct XyzVolume {
  int n = 0;
  Box3 box;
  std::vector<float> values;
  QueryStats stats;

  std::size_t index(int x, int y, int z) const { return (static_cast<std::size_t>(z) * n + y) * n + x; }
  Vec3 spacing() const { return box.sizes() / static_cast<double>(n - 1); }
  Vec3 point(int x, int y, int z) const {
    return box.min() + Vec3(x, y, z).cwiseProduct(spacing());
  }
};

XyzVolume xyz_query(OccupancyProvider& provider, const TriangleBvh& bvh, const XyzQueryOptions& options);

// Marching cubes on the grid; vertices labeled part -1.
LabeledMesh extract_xyz(const XyzVolume& volume, QueryStats* stats = nullptr, float iso = kIsoLevel);

// "XYZV", u32 N, f32 bounds (min xyz, max xyz), f32 grid.
void save_xyz_volume(const XyzVolume& volume, const std::filesystem::path& path);
XyzVolume load_xyz_volume(const std::filesystem::path& path);

}  // namespace iuvd
