#include <algorithm>
#include <cmath>
#include <limits>

#include "iuvd/atlas.hpp"
#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"

namespace iuvd {

DepthBuffer::DepthBuffer(const TemplateModel& model, const Camera& camera, int resolution)
    : camera_(camera), resolution_(resolution) {
  camera.validate();
  if (resolution < 1) throw ConfigError("visibility resolution must be positive");
  const Box3 box = model.bounds();
  tolerance_ = 1e-4 * std::max(box.sizes().z(), 1e-12);
  zmax_.assign(static_cast<std::size_t>(resolution) * resolution, -std::numeric_limits<double>::infinity());

  const double half = 0.5 * resolution;
  auto to_pixel = [&](const Vec3& p) {
    const Vec2 ndc = camera_.project(p);
    return Vec2((ndc.x() + 1.0) * half, (ndc.y() + 1.0) * half);
  };
  for (const auto& part : model.parts) {
    for (const auto& f : part.faces) {
      const Vec3& a = part.vertices[f[0]];
      const Vec3& b = part.vertices[f[1]];
      const Vec3& c = part.vertices[f[2]];
      const Vec2 pa = to_pixel(a), pb = to_pixel(b), pc = to_pixel(c);
      const double area = (pb - pa).x() * (pc - pa).y() - (pb - pa).y() * (pc - pa).x();
      if (area == 0.0) continue;
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min({pa.x(), pb.x(), pc.x()}) - 0.5)));
      const int x1 = std::min(resolution - 1, static_cast<int>(std::ceil(std::max({pa.x(), pb.x(), pc.x()}))));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min({pa.y(), pb.y(), pc.y()}) - 0.5)));
      const int y1 = std::min(resolution - 1, static_cast<int>(std::ceil(std::max({pa.y(), pb.y(), pc.y()}))));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const Vec2 q(x + 0.5, y + 0.5);
          const double w0 = ((pc - pb).x() * (q - pb).y() - (pc - pb).y() * (q - pb).x()) / area;
          const double w1 = ((pa - pc).x() * (q - pc).y() - (pa - pc).y() * (q - pc).x()) / area;
          const double w2 = 1.0 - w0 - w1;
          if (w0 < 0 || w1 < 0 || w2 < 0) continue;
          const double z = w0 * a.z() + w1 * b.z() + w2 * c.z();
          double& slot = zmax_[static_cast<std::size_t>(y) * resolution + x];
          slot = std::max(slot, z);
        }
      }
    }
  }
}

bool DepthBuffer::pixel_of(const Vec3& p, int& x, int& y) const {
  const Vec2 ndc = camera_.project(p);
  const double half = 0.5 * resolution_;
  const double fx = std::floor((ndc.x() + 1.0) * half);
  const double fy = std::floor((ndc.y() + 1.0) * half);
  if (!(fx >= 0 && fy >= 0 && fx < resolution_ && fy < resolution_)) return false;
  x = static_cast<int>(fx);
  y = static_cast<int>(fy);
  return true;
}

bool DepthBuffer::visible(const Vec3& p) const {
  int x = 0, y = 0;
  if (!pixel_of(p, x, y)) return true;
  double farthest = std::numeric_limits<double>::infinity();
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int xx = std::clamp(x + dx, 0, resolution_ - 1);
      const int yy = std::clamp(y + dy, 0, resolution_ - 1);
      farthest = std::min(farthest, zmax_[static_cast<std::size_t>(yy) * resolution_ + xx]);
    }
  }
  return p.z() >= farthest - tolerance_;
}

AtlasMaps compute_visibility(AtlasMaps atlas, const TemplateModel& model, const Camera& camera,
                             int resolution) {
  const DepthBuffer depth(model, camera, resolution);
  for (auto& pa : atlas.parts) {
    pa.visible.assign(atlas.texel_count(), 0);
    parallel_for(atlas.texel_count(), [&](std::size_t i) {
      if (pa.mask[i]) pa.visible[i] = depth.visible(pa.source_points[i].cast<double>()) ? 1 : 0;
    });
  }
  return atlas;
}

}  // namespace iuvd
