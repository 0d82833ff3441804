#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "iuvd/atlas.hpp"
#include "iuvd/query.hpp"

namespace iuvd {

// Triangle mesh in continuous grid coordinates. For IUVD parts a vertex is
// (u, v, d) with texel centers at integer u, v; for XYZ grids it is (x, y, z)
// in voxel units.
struct GridMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3i> faces;
};

// Marching cubes over a scalar grid (axis 0 fastest). Triangles face away
// from values above iso. cell_filter(i0, i1, i2) selects the cells to visit
// (lower corner); the number of visited cells goes to cells_visited.
GridMesh marching_cubes(const GridShape& shape, std::span<const float> values, float iso,
                        const std::function<bool(int, int, int)>& cell_filter = {},
                        std::uint64_t* cells_visited = nullptr);

// Per-part meshes in (u, v, d). Visits only cells touching a masked column
// and adds the visit count to volume stats.
std::vector<GridMesh> marching_cubes_uvd(const IuvdVolume& volume, const AtlasMaps& atlas, float iso = kIsoLevel,
                                         std::uint64_t* cells_visited = nullptr);

// Drops triangles whose three vertices round to texels outside
// mask_original; removes orphaned vertices.
GridMesh crop_by_mask(const GridMesh& mesh, const AtlasMaps& atlas, int part);

enum class Provenance : std::uint8_t { kReconstructed = 0, kPassthrough = 1 };

struct LabeledMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3i> faces;
  std::vector<int> vertex_part;             // -1 for unlabeled geometry
  std::vector<Provenance> provenance;       // per vertex

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
  bool empty() const { return faces.empty(); }
  // Sorted distinct labels carried by faces (label of the first corner).
  std::vector<int> parts() const;
  LabeledMesh submesh(int part) const;
  void append(const LabeledMesh& other);
  // Throws on dangling indices or mismatched attribute arrays.
  void validate() const;
};

// Lifts (u, v, d) vertices to XYZ with bilinear atlas lookup. Flips winding on
// mirrored charts and drops triangles below 1e-12 m^2.
LabeledMesh transform_mesh_to_xyz(const GridMesh& mesh, const AtlasMaps& atlas, int part, double alpha);

// Template geometry of one part, labeled passthrough.
LabeledMesh template_part_mesh(const TemplateModel& model, int part);

// Concatenates part meshes in index order; passthrough parts of the template
// are replaced by template geometry.
LabeledMesh merge_parts(std::span<const LabeledMesh> parts, const TemplateModel& model);

// mesh_a with one part taken from mesh_b. Parts are re-emitted in ascending
// label order, so swapping a merged mesh with itself is the identity.
LabeledMesh swap_part(const LabeledMesh& mesh_a, const LabeledMesh& mesh_b, int part);

struct ExtractOptions {
  float iso = kIsoLevel;
  bool crop = true;
};

// Marching cubes, crop, lift and merge for a whole IUVD volume. Records
// extraction time and visited cells in stats.
LabeledMesh extract_surface(const IuvdVolume& volume, const AtlasMaps& atlas, const TemplateModel& model,
                            QueryStats* stats = nullptr, const ExtractOptions& options = {});

// OBJ groups faces as "g part_<k>"; binary PLY carries per-vertex int part
// and uchar provenance. load_mesh dispatches on the extension.
void save_obj(const LabeledMesh& mesh, const std::filesystem::path& path);
void save_ply(const LabeledMesh& mesh, const std::filesystem::path& path);
void save_mesh(const LabeledMesh& mesh, const std::filesystem::path& path);
LabeledMesh load_mesh(const std::filesystem::path& path);

}  // namespace iuvd
