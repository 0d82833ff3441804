#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "iuvd/atlas.hpp"
#include "iuvd/occupancy.hpp"

namespace iuvd {

struct QueryOptions {
  double alpha = 1.0 / 128.0;
  int d_min = -10;
  int d_max = 10;
  int levels = 2;                        // octree only
  const NormalImages* cloth = nullptr;   // fills the cloth channel when set
  std::size_t chunk = 8192;              // provider batch size

  int depth() const { return d_max - d_min + 1; }
  void validate() const;
};

struct QueryStats {
  std::uint64_t inferred_points = 0;
  std::uint64_t filled_points = 0;
  std::uint64_t rounds = 0;        // provider round trips of the query loop
  std::uint64_t mc_cells = 0;      // set by extraction
  double sdf_ms = 0.0;             // feature assembly (SDF step)
  double inference_ms = 0.0;       // provider time
  double query_ms = 0.0;           // whole query-and-infer loop
  double extraction_ms = 0.0;

  std::uint64_t total_points() const { return inferred_points + filled_points; }
};

std::string stats_to_json(const QueryStats& stats, int indent = 2);

// Per-part U x V x D grids. Cell (u, v, k) holds the occupancy at
// d = d_min + k and lives at index (v * U + u) * D + k.
struct IuvdVolume {
  int width = 0;
  int height = 0;
  int depth = 0;
  double alpha = 1.0 / 128.0;
  int d_min = -10;
  std::vector<std::vector<float>> grids;
  QueryStats stats;

  int part_count() const { return static_cast<int>(grids.size()); }
  int d_max() const { return d_min + depth - 1; }
  std::size_t index(int u, int v, int k) const {
    return (static_cast<std::size_t>(v) * width + u) * depth + k;
  }
  float at(int part, int u, int v, int k) const { return grids[part][index(u, v, k)]; }
};

// Marching direction per texel; 0 on texels outside the mask.
struct DirectionMap {
  int width = 0;
  int height = 0;
  std::vector<std::vector<std::int8_t>> delta;

  int at(int part, int u, int v) const { return delta[part][static_cast<std::size_t>(v) * width + u]; }
};

// source_point + normal * (alpha * d) at a valid integer texel.
Vec3 lift_to_xyz(const AtlasMaps& atlas, int part, int u, int v, double d, double alpha);

// Same with fractional texel coordinates (texel centers at integers).
// Bilinear over the valid corners with renormalized weights; the normal is
// renormalized. Throws if no valid corner carries weight.
Vec3 lift_to_xyz_bilinear(const AtlasMaps& atlas, int part, double u, double v, double d, double alpha);

IuvdVolume full_space_query(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& options);

IuvdVolume octree_query_iuvd(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& options);

struct FeedbackResult {
  IuvdVolume volume;
  DirectionMap directions;
};

FeedbackResult feedback_query(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& options);

// Grid with axis 0 fastest.
struct GridShape {
  int n0 = 0, n1 = 0, n2 = 0;

  std::size_t size() const { return static_cast<std::size_t>(n0) * n1 * n2; }
  std::size_t index(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i2) * n1 + i1) * n0 + i0;
  }
};

// Infers values at the given grid indices, in order.
using OctreeEvaluator = std::function<void(std::span<const std::size_t>, std::span<float>)>;

struct OctreeResult {
  std::uint64_t inferred = 0;
  std::uint64_t filled = 0;
  std::vector<std::uint64_t> inferred_per_level;  // coarse first
};

// Coarse-to-fine boundary refinement. The lattice at stride s is
// {0, s, 2s, ...} plus the last index on every axis. A cell is refined when
// its masked corners disagree about the 0.5 level, or when it holds masked
// points but no masked corner; other cells take their corners' consensus.
// Points outside the mask end up at 0. mask may be null (all points masked).
OctreeResult octree_fill(const GridShape& shape, int levels, const std::vector<std::uint8_t>* mask,
                         const OctreeEvaluator& evaluate, std::vector<float>& values);

// "IUVD", u32 I, U, V, D, f32 alpha, i32 d_min, then per part f32 grid.
void save_volume(const IuvdVolume& volume, const std::filesystem::path& path);
IuvdVolume load_volume(const std::filesystem::path& path);
void save_stats(const QueryStats& stats, const std::filesystem::path& path);

}  // namespace iuvd
