#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace iuvd {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec3f = Eigen::Vector3f;
using Vec3i = Eigen::Vector3i;
using Box3 = Eigen::AlignedBox3d;

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

// Signed area, positive for counter-clockwise winding.
inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  return 0.5 * (ab.x() * ac.y() - ab.y() * ac.x());
}

inline Vec3 safe_normalized(const Vec3& v, const Vec3& fallback = Vec3::UnitZ()) {
  const double n = v.norm();
  return n > 0.0 ? Vec3(v / n) : fallback;
}

}  // namespace iuvd
