#include <cmath>

#include "iuvd/error.hpp"
#include "iuvd/occupancy.hpp"

namespace iuvd {

NormalImages NormalImages::constant(int width, int height, const Vec3f& front, const Vec3f& back,
                                    const Camera& camera) {
  NormalImages img;
  img.width = width;
  img.height = height;
  img.front.assign(static_cast<std::size_t>(width) * height, front);
  img.back.assign(static_cast<std::size_t>(width) * height, back);
  img.camera = camera;
  return img;
}

Vec3f NormalImages::sample(const Vec3& p, bool use_front) const {
  const Vec2 ndc = camera.project(p);
  const double fx = std::floor((ndc.x() + 1.0) * 0.5 * width);
  const double fy = std::floor((ndc.y() + 1.0) * 0.5 * height);
  if (!(fx >= 0 && fy >= 0 && fx < width && fy < height)) return Vec3f::Zero();
  const std::size_t idx = static_cast<std::size_t>(fy) * width + static_cast<std::size_t>(fx);
  return use_front ? front[idx] : back[idx];
}

FeatureVector features_iuvd(const AtlasMaps& atlas, int part, int u, int v, double d, double alpha,
                            const NormalImages* cloth) {
  if (!atlas.valid(part, u, v)) throw Error("feature requested off-chart");
  const PartAtlas& pa = atlas.parts[part];
  const std::size_t idx = atlas.index(u, v);
  FeatureVector f;
  f.sdf = static_cast<float>(alpha * d);
  f.body_normal = pa.normals[idx];
  if (cloth) {
    const Vec3 p = pa.source_points[idx].cast<double>() + pa.normals[idx].cast<double>() * (alpha * d);
    f.cloth = cloth->sample(p, pa.visible[idx] != 0);
  }
  return f;
}

}  // namespace iuvd
