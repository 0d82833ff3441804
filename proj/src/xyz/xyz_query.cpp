#include <fstream>
#include <numeric>

#include "iuvd/binary_io.hpp"
#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"
#include "iuvd/timing.hpp"
#include "iuvd/xyz.hpp"

namespace iuvd {
namespace {

// Points, then (when the provider needs them) features from the nearest-point
// search: the SDF step of the XYZ pipeline.
void infer_points(const XyzVolume& vol, OccupancyProvider& provider, const TriangleBvh& bvh,
                  const XyzQueryOptions& opt, std::span<const std::size_t> indices, std::span<float> out,
                  QueryStats& stats) {
  const std::size_t n = indices.size();
  if (n == 0) return;
  std::vector<Vec3> points(n);
  std::vector<FeatureVector> features;
  std::vector<SurfaceCoord> coords;
  const bool want_features = provider.input() == ProviderInput::kFeatures || provider.needs_coords();
  {
    ScopedTimer t(stats.sdf_ms);
    const std::size_t nn = static_cast<std::size_t>(vol.n);
    parallel_for(n, [&](std::size_t j) {
      const std::size_t i = indices[j];
      points[j] = vol.point(static_cast<int>(i % nn), static_cast<int>(i / nn % nn), static_cast<int>(i / (nn * nn)));
    });
    if (want_features) {
      features.resize(n);
      coords.resize(n);
      parallel_for(n, [&](std::size_t j) {
        features[j] = features_xyz(points[j], bvh, opt.cloth, opt.visibility, &coords[j]);
      }, 64);
    }
  }
  {
    ScopedTimer t(stats.inference_ms);
    evaluate_chunked(provider, QueryBatchView{points, features, coords}, out, opt.chunk);
  }
  stats.inferred_points += n;
  ++stats.rounds;
}

}  // namespace

Box3 xyz_query_box(const TemplateModel& model, double alpha, int d_max) {
  Box3 box = model.bounds();
  const Vec3 pad = Vec3::Constant(alpha * d_max);
  return Box3(box.min() - pad, box.max() + pad);
}

XyzVolume xyz_query(OccupancyProvider& provider, const TriangleBvh& bvh, const XyzQueryOptions& opt) {
  if (opt.n < 3 || opt.n % 2 == 0) throw ConfigError("XYZ resolution must be odd and >= 3");
  if (opt.box.isEmpty() || (opt.box.sizes().array() <= 0.0).any())
    throw ConfigError("XYZ query box must have positive extent");
  Stopwatch watch;
  XyzVolume vol;
  vol.n = opt.n;
  vol.box = opt.box;
  const std::size_t total = static_cast<std::size_t>(opt.n) * opt.n * opt.n;
  if (opt.strategy == XyzStrategy::kFull) {
    vol.values.assign(total, kOccupancyOutside);
    const std::size_t block = std::size_t{1} << 18;
    std::vector<std::size_t> indices;
    for (std::size_t begin = 0; begin < total; begin += block) {
      const std::size_t end = std::min(total, begin + block);
      indices.resize(end - begin);
      std::iota(indices.begin(), indices.end(), begin);
      infer_points(vol, provider, bvh, opt, indices,
                   std::span<float>(vol.values).subspan(begin, end - begin), vol.stats);
    }
  } else {
    const GridShape shape{opt.n, opt.n, opt.n};
    auto evaluate = [&](std::span<const std::size_t> indices, std::span<float> out) {
      infer_points(vol, provider, bvh, opt, indices, out, vol.stats);
    };
    const OctreeResult r = octree_fill(shape, opt.levels, nullptr, evaluate, vol.values);
    vol.stats.filled_points = r.filled;
  }
  vol.stats.query_ms = watch.elapsed_ms();
  return vol;
}

LabeledMesh extract_xyz(const XyzVolume& vol, QueryStats* stats, float iso) {
  Stopwatch watch;
  std::uint64_t cells = 0;
  const GridShape shape{vol.n, vol.n, vol.n};
  GridMesh g = marching_cubes(shape, vol.values, iso, {}, &cells);
  LabeledMesh out;
  const Vec3 h = vol.spacing();
  out.vertices.reserve(g.vertices.size());
  for (const Vec3& x : g.vertices) out.vertices.push_back(vol.box.min() + x.cwiseProduct(h));
  out.faces = std::move(g.faces);
  out.vertex_part.assign(out.vertices.size(), -1);
  out.provenance.assign(out.vertices.size(), Provenance::kReconstructed);
  if (stats) {
    stats->mc_cells = cells;
    stats->extraction_ms = watch.elapsed_ms();
  }
  return out;
}

void save_xyz_volume(const XyzVolume& vol, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write volume " + path.string());
  le::Writer w(out);
  w.magic("XYZV");
  w.u32(static_cast<std::uint32_t>(vol.n));
  for (int k = 0; k < 3; ++k) w.f32(static_cast<float>(vol.box.min()[k]));
  for (int k = 0; k < 3; ++k) w.f32(static_cast<float>(vol.box.max()[k]));
  for (float f : vol.values) w.f32(f);
  w.flush();
  if (!out) throw ConfigError("failed writing volume " + path.string());
}

XyzVolume load_xyz_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open volume " + path.string());
  le::Reader r(in, "volume " + path.string());
  r.expect_magic("XYZV");
  XyzVolume vol;
  vol.n = static_cast<int>(r.u32());
  if (vol.n < 2 || vol.n > 2048) throw ConfigError("volume " + path.string() + ": implausible resolution");
  Vec3 lo, hi;
  for (int k = 0; k < 3; ++k) lo[k] = r.f32();
  for (int k = 0; k < 3; ++k) hi[k] = r.f32();
  vol.box = Box3(lo, hi);
  vol.values.resize(static_cast<std::size_t>(vol.n) * vol.n * vol.n);
  for (float& f : vol.values) f = r.f32();
  return vol;
}

}  // namespace iuvd
