#include "iuvd/xyz.hpp"

namespace iuvd {

FeatureVector features_xyz(const Vec3& p, const TriangleBvh& bvh, const NormalImages* cloth,
                           const DepthBuffer* visibility, SurfaceCoord* coord) {
  const NearestPoint np = bvh.nearest(p);
  FeatureVector f;
  f.sdf = static_cast<float>(np.sdf);
  f.body_normal = np.normal.cast<float>();
  if (cloth) {
    const bool front = visibility ? visibility->visible(np.point) : true;
    f.cloth = cloth->sample(p, front);
  }
  if (coord) {
    const FlatMesh& m = bvh.mesh();
    const auto& uv = m.face_uv[np.face];
    const Vec2 c = np.barycentric[0] * uv[0] + np.barycentric[1] * uv[1] + np.barycentric[2] * uv[2];
    *coord = {m.face_part[np.face], static_cast<float>(c.x()), static_cast<float>(c.y())};
  }
  return f;
}

}  // namespace iuvd
