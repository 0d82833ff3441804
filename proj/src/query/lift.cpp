#include <cmath>
#include <string>

#include "iuvd/error.hpp"
#include "iuvd/query.hpp"

namespace iuvd {

void QueryOptions::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(d_min < 0 && 0 < d_max)) throw ConfigError("depth range must satisfy d_min < 0 < d_max");
  if (levels < 1) throw ConfigError("octree levels must be >= 1");
  if (chunk == 0) throw ConfigError("batch chunk must be positive");
}

Vec3 lift_to_xyz(const AtlasMaps& atlas, int part, int u, int v, double d, double alpha) {
  if (!atlas.valid(part, u, v))
    throw Error("lift requested off-chart at part " + std::to_string(part) + " texel (" + std::to_string(u) +
                ", " + std::to_string(v) + ")");
  const PartAtlas& pa = atlas.parts[part];
  const std::size_t idx = atlas.index(u, v);
  return pa.source_points[idx].cast<double>() + pa.normals[idx].cast<double>() * (alpha * d);
}

Vec3 lift_to_xyz_bilinear(const AtlasMaps& atlas, int part, double u, double v, double d, double alpha) {
  if (part < 0 || part >= atlas.part_count()) throw Error("lift requested for missing part " + std::to_string(part));
  const PartAtlas& pa = atlas.parts[part];
  const double fu = std::floor(u), fv = std::floor(v);
  const int u0 = static_cast<int>(fu), v0 = static_cast<int>(fv);
  const double tu = u - fu, tv = v - fv;
  Vec3 p = Vec3::Zero(), n = Vec3::Zero();
  double total = 0.0;
  for (int dv = 0; dv <= 1; ++dv) {
    for (int du = 0; du <= 1; ++du) {
      const double w = (du ? tu : 1.0 - tu) * (dv ? tv : 1.0 - tv);
      if (w <= 0.0 || !atlas.valid(part, u0 + du, v0 + dv)) continue;
      const std::size_t idx = atlas.index(u0 + du, v0 + dv);
      p += w * pa.source_points[idx].cast<double>();
      n += w * pa.normals[idx].cast<double>();
      total += w;
    }
  }
  if (total <= 0.0)
    throw Error("lift requested off the dilated mask at part " + std::to_string(part) + " (u=" +
                std::to_string(u) + ", v=" + std::to_string(v) + ")");
  p /= total;
  return p + safe_normalized(n) * (alpha * d);
}

}  // namespace iuvd
