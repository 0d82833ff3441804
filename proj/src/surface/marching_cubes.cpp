#include <array>
#include <cmath>
#include <unordered_map>

#include "iuvd/parallel.hpp"
#include "iuvd/surface.hpp"
#include "mc_tables.hpp"

namespace iuvd {
namespace {

constexpr std::array<std::array<int, 3>, 8> kCorner = {{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};
constexpr std::array<std::array<int, 2>, 12> kEdge = {{
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
}};

}  // namespace

GridMesh marching_cubes(const GridShape& shape, std::span<const float> values, float iso,
                        const std::function<bool(int, int, int)>& cell_filter, std::uint64_t* cells_visited) {
  GridMesh mesh;
  std::uint64_t visited = 0;
  std::unordered_map<std::uint64_t, int> edge_vertex;

  auto vertex_on = [&](int i0, int i1, int i2, int edge) {
    const auto& a = kCorner[kEdge[edge][0]];
    const auto& b = kCorner[kEdge[edge][1]];
    const auto& lo = (a[0] + a[1] + a[2] < b[0] + b[1] + b[2]) ? a : b;
    const auto& hi = (&lo == &a) ? b : a;
    int axis = 0;
    while (lo[axis] == hi[axis]) ++axis;
    const int p0 = i0 + lo[0], p1 = i1 + lo[1], p2 = i2 + lo[2];
    const std::size_t lo_index = shape.index(p0, p1, p2);
    const std::uint64_t key = static_cast<std::uint64_t>(lo_index) * 3 + axis;
    const auto [it, inserted] = edge_vertex.try_emplace(key, static_cast<int>(mesh.vertices.size()));
    if (inserted) {
      const double v0 = values[lo_index];
      const double v1 = values[shape.index(i0 + hi[0], i1 + hi[1], i2 + hi[2])];
      const double t = std::abs(v1 - v0) > 1e-12 ? (iso - v0) / (v1 - v0) : 0.5;
      Vec3 p(p0, p1, p2);
      p[axis] += t;
      mesh.vertices.push_back(p);
    }
    return it->second;
  };

  for (int i2 = 0; i2 + 1 < shape.n2; ++i2) {
    for (int i1 = 0; i1 + 1 < shape.n1; ++i1) {
      for (int i0 = 0; i0 + 1 < shape.n0; ++i0) {
        if (cell_filter && !cell_filter(i0, i1, i2)) continue;
        ++visited;
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          const auto& o = kCorner[c];
          if (values[shape.index(i0 + o[0], i1 + o[1], i2 + o[2])] < iso) cube |= 1 << c;
        }
        if (mc::kEdgeTable[cube] == 0) continue;
        const int* tri = mc::kTriTable[cube];
        for (int t = 0; tri[t] >= 0; t += 3) {
          const int a = vertex_on(i0, i1, i2, tri[t]);
          const int b = vertex_on(i0, i1, i2, tri[t + 1]);
          const int c = vertex_on(i0, i1, i2, tri[t + 2]);
          mesh.faces.emplace_back(a, b, c);
        }
      }
    }
  }
  if (cells_visited) *cells_visited += visited;
  return mesh;
}

std::vector<GridMesh> marching_cubes_uvd(const IuvdVolume& volume, const AtlasMaps& atlas, float iso,
                                         std::uint64_t* cells_visited) {
  const GridShape shape{volume.depth, volume.width, volume.height};
  std::vector<GridMesh> meshes(volume.grids.size());
  std::vector<std::uint64_t> visits(volume.grids.size(), 0);
  parallel_for(
      volume.grids.size(),
      [&](std::size_t p) {
        const int part = static_cast<int>(p);
        auto touches_mask = [&](int, int u, int v) {
          return atlas.valid(part, u, v) || atlas.valid(part, u + 1, v) || atlas.valid(part, u, v + 1) ||
                 atlas.valid(part, u + 1, v + 1);
        };
        GridMesh m = marching_cubes(shape, volume.grids[p], iso, touches_mask, &visits[p]);
        // grid axes are (k, u, v); store as (u, v, d)
        for (Vec3& x : m.vertices) x = Vec3(x[1], x[2], volume.d_min + x[0]);
        // (k, u, v) -> (u, v, d) is an even permutation, so winding is kept.
        meshes[p] = std::move(m);
      },
      1);
  if (cells_visited)
    for (auto v : visits) *cells_visited += v;
  return meshes;
}

}  // namespace iuvd
