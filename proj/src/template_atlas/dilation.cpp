#include "iuvd/atlas.hpp"
#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"

namespace iuvd {
namespace {

constexpr int kDirs[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

void dilate_once(const AtlasMaps& atlas, PartAtlas& pa) {
  const PartAtlas prev = pa;
  auto valid = [&](int u, int v) { return atlas.in_range(u, v) && prev.mask[atlas.index(u, v)]; };
  for (int v = 0; v < atlas.height; ++v) {
    for (int u = 0; u < atlas.width; ++u) {
      const std::size_t idx = atlas.index(u, v);
      if (prev.mask[idx]) continue;
      Vec3 lin_p = Vec3::Zero(), lin_n = Vec3::Zero(), const_p = Vec3::Zero(), const_n = Vec3::Zero();
      int lin = 0, cst = 0;
      for (const auto& d : kDirs) {
        const int u1 = u + d[0], v1 = v + d[1];
        if (!valid(u1, v1)) continue;
        const std::size_t i1 = atlas.index(u1, v1);
        const Vec3 p1 = prev.source_points[i1].cast<double>();
        const Vec3 n1 = prev.normals[i1].cast<double>();
        const int u2 = u + 2 * d[0], v2 = v + 2 * d[1];
        if (valid(u2, v2)) {
          const std::size_t i2 = atlas.index(u2, v2);
          lin_p += 2.0 * p1 - prev.source_points[i2].cast<double>();
          lin_n += 2.0 * n1 - prev.normals[i2].cast<double>();
          ++lin;
        } else {
          const_p += p1;
          const_n += n1;
          ++cst;
        }
      }
      if (lin + cst == 0) continue;
      // constant extensions only when no neighbor has a second valid texel behind it
      const Vec3 p = lin > 0 ? Vec3(lin_p / lin) : Vec3(const_p / cst);
      const Vec3 n_raw = lin > 0 ? Vec3(lin_n / lin) : Vec3(const_n / cst);
      const Vec3 n = safe_normalized(n_raw, safe_normalized(const_n + lin_n));
      pa.source_points[idx] = p.cast<float>();
      pa.normals[idx] = n.cast<float>();
      pa.mask[idx] = 1;
    }
  }
}

}  // namespace

AtlasMaps dilate_and_extrapolate(AtlasMaps atlas, int iterations) {
  if (iterations < 0) throw ConfigError("dilation iterations must be >= 0");
  parallel_for(
      atlas.parts.size(),
      [&](std::size_t i) {
        for (int it = 0; it < iterations; ++it) dilate_once(atlas, atlas.parts[i]);
      },
      1);
  return atlas;
}

}  // namespace iuvd
