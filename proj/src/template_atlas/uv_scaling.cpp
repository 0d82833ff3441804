#include "iuvd/uv_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iuvd/error.hpp"

namespace iuvd {

std::vector<double> uv_area_ratios(const TemplateModel& model) {
  std::vector<double> ratios;
  ratios.reserve(model.parts.size());
  for (const auto& part : model.parts) {
    if (part.faces.empty()) throw ConfigError("part " + std::to_string(part.part_index) + " has no faces");
    double xyz = 0.0, uv = 0.0;
    for (std::size_t f = 0; f < part.faces.size(); ++f) {
      const auto& t = part.face_uv[f];
      const double a_uv = std::abs(triangle_area(t[0], t[1], t[2]));
      if (!(a_uv > 1e-14)) {
        throw ConfigError("zero UV area triangle " + std::to_string(f) + " in part " +
                          std::to_string(part.part_index));
      }
      const auto& tri = part.faces[f];
      xyz += triangle_area(part.vertices[tri[0]], part.vertices[tri[1]], part.vertices[tri[2]]);
      uv += a_uv;
    }
    if (!(xyz > 0.0)) throw ConfigError("part " + std::to_string(part.part_index) + " has zero surface area");
    // both means share the face count, so the ratio of sums is the ratio of means
    ratios.push_back(xyz / uv);
  }
  return ratios;
}

std::vector<double> uv_scale_factors(std::span<const double> ratios, UvScaleMode mode) {
  if (ratios.empty()) return {};
  const double max_ratio = *std::max_element(ratios.begin(), ratios.end());
  std::vector<double> factors;
  factors.reserve(ratios.size());
  for (double r : ratios) {
    const double linear = r / max_ratio;
    factors.push_back(mode == UvScaleMode::kSqrt ? std::sqrt(linear) : linear);
  }
  return factors;
}

TemplateModel scale_uv_charts(const TemplateModel& model, UvScaleMode mode) {
  const std::vector<double> ratios = uv_area_ratios(model);
  const std::vector<double> factors = uv_scale_factors(ratios, mode);
  TemplateModel scaled = model;
  for (std::size_t i = 0; i < scaled.parts.size(); ++i) {
    const double s = factors[i];
    if (s == 1.0) continue;
    PartMesh& part = scaled.parts[i];
    Vec2 centroid = Vec2::Zero();
    double total = 0.0;
    for (const auto& t : part.face_uv) {
      const double a = std::abs(triangle_area(t[0], t[1], t[2]));
      centroid += a * (t[0] + t[1] + t[2]) / 3.0;
      total += a;
    }
    centroid /= total;
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::max());
    Vec2 hi = -lo;
    for (auto& t : part.face_uv) {
      for (auto& uv : t) {
        uv = centroid + s * (uv - centroid);
        lo = lo.cwiseMin(uv);
        hi = hi.cwiseMax(uv);
      }
    }
    // shift back inside the unit square if the centroid sat near an edge
    const Vec2 shift = (-lo).cwiseMax(Vec2::Zero()) + (Vec2::Ones() - hi).cwiseMin(Vec2::Zero());
    if (shift.squaredNorm() > 0.0) {
      for (auto& t : part.face_uv)
        for (auto& uv : t) uv = (uv + shift).cwiseMax(Vec2::Zero()).cwiseMin(Vec2::Ones());
    }
  }
  return scaled;
}

}  // namespace iuvd
