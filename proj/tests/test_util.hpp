#pragma once

#include <cmath>
#include <limits>

#include "iuvd/error.hpp"
#include "iuvd/pipeline.hpp"

namespace iuvd::test {

// One-part atlas over a flat sheet: texel (u, v) sits at (u, v, 0) * spacing
// with normal +z.
template <typename MaskFn>
AtlasMaps flat_atlas(int width, int height, MaskFn&& mask, double spacing = 0.01) {
  AtlasMaps a;
  a.width = width;
  a.height = height;
  a.parts.resize(1);
  PartAtlas& p = a.parts[0];
  const std::size_t n = a.texel_count();
  p.source_points.resize(n);
  p.normals.assign(n, Vec3f::UnitZ());
  p.mask.assign(n, 0);
  p.visible.assign(n, 1);
  p.face.assign(n, -1);
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u) {
      const std::size_t i = a.index(u, v);
      p.source_points[i] = Vec3f(static_cast<float>(u * spacing), static_cast<float>(v * spacing), 0.0f);
      p.mask[i] = mask(u, v) ? 1 : 0;
    }
  p.mask_original = p.mask;
  return a;
}

inline AtlasMaps flat_atlas(int width, int height) {
  return flat_atlas(width, height, [](int, int) { return true; });
}

// Occupancy 1 below the plane d = crossing (in D steps), 0 above.
class PlaneProvider final : public OccupancyProvider {
 public:
  explicit PlaneProvider(double crossing_m) : crossing_(crossing_m) {}
  ProviderInput input() const override { return ProviderInput::kFeatures; }
  std::string name() const override { return "plane"; }
  void evaluate(const QueryBatchView& b, std::span<float> out) override {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = b.features[i].sdf < crossing_ ? 1.0f : 0.0f;
  }

 private:
  double crossing_;
};

// Counts evaluations and batches.
class CountingProvider final : public OccupancyProvider {
 public:
  explicit CountingProvider(std::shared_ptr<OccupancyProvider> inner) : inner_(std::move(inner)) {}
  ProviderInput input() const override { return inner_->input(); }
  bool needs_coords() const override { return inner_->needs_coords(); }
  std::string name() const override { return "counting"; }
  void evaluate(const QueryBatchView& b, std::span<float> out) override {
    points += out.size();
    ++batches;
    inner_->evaluate(b, out);
  }
  std::uint64_t points = 0, batches = 0;

 private:
  std::shared_ptr<OccupancyProvider> inner_;
};

// Exhaustive nearest point over every triangle.
inline double brute_force_distance(const FlatMesh& m, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : m.faces) {
    Vec3 bary;
    const Vec3 q = closest_point_on_triangle(p, m.positions[f[0]], m.positions[f[1]], m.positions[f[2]], bary);
    best = std::min(best, (p - q).norm());
  }
  return best;
}

inline bool sides_equal(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (is_inside(a[i]) != is_inside(b[i])) return false;
  return true;
}

}  // namespace iuvd::test
