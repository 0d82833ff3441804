#include <string>

#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"
#include "iuvd/query.hpp"
#include "iuvd/timing.hpp"

namespace iuvd {
namespace {

struct CellRef {
  int part, u, v, k;
};

struct Batch {
  std::vector<FeatureVector> features;
  std::vector<SurfaceCoord> coords;
  std::vector<Vec3> points;

  QueryBatchView view() const { return {points, features, coords}; }
};

// Feature assembly for IUVD cells: the closed-form replacement of the SDF step.
void assemble(const AtlasMaps& atlas, const QueryOptions& opt, ProviderInput input,
              std::span<const CellRef> cells, Batch& batch) {
  const std::size_t n = cells.size();
  batch.features.resize(n);
  batch.coords.resize(n);
  batch.points.resize(input == ProviderInput::kPoints ? n : 0);
  const bool want_points = input == ProviderInput::kPoints;
  parallel_for(n, [&](std::size_t i) {
    const CellRef& c = cells[i];
    const double d = opt.d_min + c.k;
    batch.features[i] = features_iuvd(atlas, c.part, c.u, c.v, d, opt.alpha, opt.cloth);
    const Vec2 uv = atlas.texel_uv(c.u, c.v);
    batch.coords[i] = {c.part, static_cast<float>(uv.x()), static_cast<float>(uv.y())};
    if (want_points) batch.points[i] = lift_to_xyz(atlas, c.part, c.u, c.v, d, opt.alpha);
  });
}

// Assembles and evaluates one round, accumulating the step timings.
std::vector<float> infer_cells(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& opt,
                               std::span<const CellRef> cells, QueryStats& stats) {
  std::vector<float> out(cells.size());
  if (cells.empty()) return out;
  Batch batch;
  {
    ScopedTimer t(stats.sdf_ms);
    assemble(atlas, opt, provider.input(), cells, batch);
  }
  {
    ScopedTimer t(stats.inference_ms);
    evaluate_chunked(provider, batch.view(), out, opt.chunk);
  }
  stats.inferred_points += cells.size();
  ++stats.rounds;
  return out;
}

IuvdVolume empty_volume(const AtlasMaps& atlas, const QueryOptions& opt) {
  if (atlas.part_count() == 0) throw Error("atlas has no parts");
  IuvdVolume vol;
  vol.width = atlas.width;
  vol.height = atlas.height;
  vol.depth = opt.depth();
  vol.alpha = opt.alpha;
  vol.d_min = opt.d_min;
  vol.grids.assign(atlas.parts.size(), std::vector<float>(atlas.texel_count() * opt.depth(), kOccupancyOutside));
  return vol;
}

}  // namespace

IuvdVolume full_space_query(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& opt) {
  opt.validate();
  Stopwatch watch;
  IuvdVolume vol = empty_volume(atlas, opt);
  std::vector<CellRef> cells;
  cells.reserve(atlas.masked_count() * vol.depth);
  for (int p = 0; p < atlas.part_count(); ++p)
    for (int v = 0; v < atlas.height; ++v)
      for (int u = 0; u < atlas.width; ++u)
        if (atlas.valid(p, u, v))
          for (int k = 0; k < vol.depth; ++k) cells.push_back({p, u, v, k});
  const auto values = infer_cells(atlas, provider, opt, cells, vol.stats);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellRef& c = cells[i];
    vol.grids[c.part][vol.index(c.u, c.v, c.k)] = values[i];
  }
  vol.stats.query_ms = watch.elapsed_ms();
  return vol;
}

IuvdVolume octree_query_iuvd(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& opt) {
  opt.validate();
  Stopwatch watch;
  IuvdVolume vol = empty_volume(atlas, opt);
  const GridShape shape{vol.depth, vol.width, vol.height};
  for (int p = 0; p < atlas.part_count(); ++p) {
    std::vector<std::uint8_t> mask(shape.size(), 0);
    for (int v = 0; v < atlas.height; ++v)
      for (int u = 0; u < atlas.width; ++u)
        if (atlas.valid(p, u, v))
          for (int k = 0; k < vol.depth; ++k) mask[shape.index(k, u, v)] = 1;
    std::vector<CellRef> cells;
    auto evaluate = [&](std::span<const std::size_t> indices, std::span<float> out) {
      cells.resize(indices.size());
      for (std::size_t j = 0; j < indices.size(); ++j) {
        const std::size_t i = indices[j];
        const std::size_t texel = i / static_cast<std::size_t>(vol.depth);
        cells[j] = {p, static_cast<int>(texel % vol.width), static_cast<int>(texel / vol.width),
                    static_cast<int>(i % static_cast<std::size_t>(vol.depth))};
      }
      const auto values = infer_cells(atlas, provider, opt, cells, vol.stats);
      std::copy(values.begin(), values.end(), out.begin());
    };
    const OctreeResult r = octree_fill(shape, opt.levels, &mask, evaluate, vol.grids[p]);
    vol.stats.filled_points += r.filled;
  }
  vol.stats.query_ms = watch.elapsed_ms();
  return vol;
}

FeedbackResult feedback_query(const AtlasMaps& atlas, OccupancyProvider& provider, const QueryOptions& opt) {
  opt.validate();
  Stopwatch watch;
  FeedbackResult res;
  IuvdVolume& vol = res.volume;
  vol = empty_volume(atlas, opt);
  DirectionMap& dir = res.directions;
  dir.width = atlas.width;
  dir.height = atlas.height;
  dir.delta.assign(atlas.parts.size(), std::vector<std::int8_t>(atlas.texel_count(), 0));

  struct Column {
    int part, u, v;
    int k;        // last inferred cell
    int delta;
    float last;
  };
  std::vector<Column> columns;
  std::vector<CellRef> cells;
  for (int p = 0; p < atlas.part_count(); ++p)
    for (int v = 0; v < atlas.height; ++v)
      for (int u = 0; u < atlas.width; ++u)
        if (atlas.valid(p, u, v)) {
          columns.push_back({p, u, v, -opt.d_min, 0, 0.0f});
          cells.push_back({p, u, v, -opt.d_min});
        }

  const int depth = vol.depth;
  auto fill_range = [&](const Column& c, int k_begin, int k_end, float value) {
    auto& grid = vol.grids[c.part];
    for (int k = k_begin; k < k_end; ++k) grid[vol.index(c.u, c.v, k)] = value;
  };
  auto finish = [&](const Column& c) {
    // Everything past the last inferred cell takes its side of the level.
    const float value = is_inside(c.last) ? kOccupancyInside : kOccupancyOutside;
    if (c.delta > 0) {
      fill_range(c, c.k + 1, depth, value);
    } else {
      fill_range(c, 0, c.k, value);
    }
  };

  // Initialization at d = 0 decides the marching direction per column.
  std::vector<float> values = infer_cells(atlas, provider, opt, cells, vol.stats);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    Column& c = columns[j];
    c.last = values[j];
    vol.grids[c.part][vol.index(c.u, c.v, c.k)] = c.last;
    if (is_inside(c.last)) {
      c.delta = +1;
      fill_range(c, 0, c.k, kOccupancyInside);
    } else {
      c.delta = -1;
      fill_range(c, c.k + 1, depth, kOccupancyOutside);
    }
    dir.delta[c.part][atlas.index(c.u, c.v)] = static_cast<std::int8_t>(c.delta);
    const int next = c.k + c.delta;
    if (next >= 0 && next < depth) active.push_back(j);
  }

  while (!active.empty()) {
    cells.clear();
    for (std::size_t j : active) {
      const Column& c = columns[j];
      cells.push_back({c.part, c.u, c.v, c.k + c.delta});
    }
    values = infer_cells(atlas, provider, opt, cells, vol.stats);
    std::vector<std::size_t> still;
    for (std::size_t a = 0; a < active.size(); ++a) {
      Column& c = columns[active[a]];
      const float f = values[a];
      const float prev = c.last;
      c.k += c.delta;
      c.last = f;
      vol.grids[c.part][vol.index(c.u, c.v, c.k)] = f;
      const bool crossed = (f - kIsoLevel) * (prev - kIsoLevel) < 0.0f;
      const int next = c.k + c.delta;
      if (crossed) {
        finish(c);
      } else if (next >= 0 && next < depth) {
        still.push_back(active[a]);
      }
    }
    active = std::move(still);
  }

  const std::uint64_t total = static_cast<std::uint64_t>(columns.size()) * depth;
  vol.stats.filled_points = total - vol.stats.inferred_points;
  vol.stats.query_ms = watch.elapsed_ms();
  return res;
}

}  // namespace iuvd
