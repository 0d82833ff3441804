#include <cmath>
#include <string>

#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"
#include "iuvd/surface.hpp"
#include "iuvd/timing.hpp"

namespace iuvd {

GridMesh crop_by_mask(const GridMesh& mesh, const AtlasMaps& atlas, int part) {
  const PartAtlas& pa = atlas.parts.at(part);
  auto inside = [&](const Vec3& x) {
    const int u = static_cast<int>(std::lround(x[0]));
    const int v = static_cast<int>(std::lround(x[1]));
    return atlas.in_range(u, v) && pa.mask_original[atlas.index(u, v)] != 0;
  };
  std::vector<std::uint8_t> keep_vertex(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) keep_vertex[i] = inside(mesh.vertices[i]);
  GridMesh out;
  std::vector<int> remap(mesh.vertices.size(), -1);
  for (const auto& f : mesh.faces) {
    if (!keep_vertex[f[0]] && !keep_vertex[f[1]] && !keep_vertex[f[2]]) continue;
    Vec3i g;
    for (int k = 0; k < 3; ++k) {
      int& r = remap[f[k]];
      if (r < 0) {
        r = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[f[k]]);
      }
      g[k] = r;
    }
    out.faces.push_back(g);
  }
  return out;
}

LabeledMesh transform_mesh_to_xyz(const GridMesh& mesh, const AtlasMaps& atlas, int part, double alpha) {
  if (part < 0 || part >= atlas.part_count()) throw Error("atlas has no part " + std::to_string(part));
  LabeledMesh out;
  out.vertices.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& x = mesh.vertices[i];
    out.vertices[i] = lift_to_xyz_bilinear(atlas, part, x[0], x[1], x[2], alpha);
  }
  const bool mirrored = atlas.parts[part].orientation < 0;
  std::vector<Vec3i> faces;
  faces.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    if (triangle_area(out.vertices[f[0]], out.vertices[f[1]], out.vertices[f[2]]) < 1e-12) continue;
    faces.push_back(mirrored ? Vec3i(f[0], f[2], f[1]) : f);
  }
  // drop vertices orphaned by the degenerate filter
  std::vector<int> remap(out.vertices.size(), -1);
  LabeledMesh result;
  for (const auto& f : faces) {
    Vec3i g;
    for (int k = 0; k < 3; ++k) {
      int& r = remap[f[k]];
      if (r < 0) {
        r = static_cast<int>(result.vertices.size());
        result.vertices.push_back(out.vertices[f[k]]);
      }
      g[k] = r;
    }
    result.faces.push_back(g);
  }
  result.vertex_part.assign(result.vertices.size(), part);
  result.provenance.assign(result.vertices.size(), Provenance::kReconstructed);
  return result;
}

LabeledMesh extract_surface(const IuvdVolume& volume, const AtlasMaps& atlas, const TemplateModel& model,
                            QueryStats* stats, const ExtractOptions& options) {
  if (volume.part_count() != atlas.part_count() || volume.width != atlas.width || volume.height != atlas.height)
    throw Error("volume and atlas dimensions differ");
  if (model.part_count() != atlas.part_count()) throw Error("template and atlas part counts differ");
  Stopwatch watch;
  std::uint64_t cells = 0;
  const auto uvd = marching_cubes_uvd(volume, atlas, options.iso, &cells);
  std::vector<LabeledMesh> parts(uvd.size());
  parallel_for(
      uvd.size(),
      [&](std::size_t p) {
        const int part = static_cast<int>(p);
        if (model.is_passthrough(part)) return;
        const GridMesh cropped = options.crop ? crop_by_mask(uvd[p], atlas, part) : uvd[p];
        parts[p] = transform_mesh_to_xyz(cropped, atlas, part, volume.alpha);
      },
      1);
  LabeledMesh merged = merge_parts(parts, model);
  if (stats) {
    stats->mc_cells = cells;
    stats->extraction_ms = watch.elapsed_ms();
  }
  return merged;
}

}  // namespace iuvd
