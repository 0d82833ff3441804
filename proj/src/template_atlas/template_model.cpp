#include "iuvd/template_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "iuvd/error.hpp"

namespace iuvd {

void Camera::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("camera scale must be positive, got " + std::to_string(scale));
  }
}

Camera Camera::fit(const Box3& bounds) {
  Camera cam;
  const Vec3 extent = bounds.sizes();
  const double span = std::max({extent.x(), extent.y(), 1e-9});
  cam.scale = 2.0 / (1.1 * span);
  cam.translation = -cam.scale * bounds.center().head<2>();
  return cam;
}

std::size_t TemplateModel::face_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.faces.size();
  return n;
}

std::size_t TemplateModel::vertex_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.vertices.size();
  return n;
}

bool TemplateModel::is_passthrough(int part) const {
  return std::binary_search(passthrough_parts.begin(), passthrough_parts.end(), part);
}

Box3 TemplateModel::bounds() const {
  Box3 box;
  box.setEmpty();
  for (const auto& p : parts)
    for (const auto& v : p.vertices) box.extend(v);
  return box;
}

std::vector<Vec3> area_weighted_normals(const std::vector<Vec3>& vertices,
                                        const std::vector<Vec3i>& faces) {
  std::vector<Vec3> normals(vertices.size(), Vec3::Zero());
  for (const auto& f : faces) {
    // cross product magnitude is twice the area, so this is area weighting
    const Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
    for (int k = 0; k < 3; ++k) normals[f[k]] += n;
  }
  for (auto& n : normals) n = safe_normalized(n);
  return normals;
}

void validate_template(const TemplateModel& model) {
  if (model.parts.empty()) throw ConfigError("template has no parts");
  constexpr double kUvEps = 1e-9;
  for (int i = 0; i < model.part_count(); ++i) {
    const PartMesh& part = model.parts[i];
    const std::string where = "part " + std::to_string(i);
    if (part.part_index != i) throw ConfigError(where + ": part indices must be consecutive from 0");
    if (part.normals.size() != part.vertices.size())
      throw ConfigError(where + ": one normal per vertex required");
    if (part.face_uv.size() != part.faces.size())
      throw ConfigError("template lacks UV parameterization (" + where + ")");
    for (const auto& n : part.normals) {
      if (std::abs(n.norm() - 1.0) > 1e-6) throw ConfigError(where + ": vertex normal not unit length");
    }
    const int nv = static_cast<int>(part.vertices.size());
    for (std::size_t f = 0; f < part.faces.size(); ++f) {
      for (int k = 0; k < 3; ++k) {
        if (part.faces[f][k] < 0 || part.faces[f][k] >= nv)
          throw ConfigError(where + ": face index out of range");
        const Vec2& uv = part.face_uv[f][k];
        if (uv.x() < -kUvEps || uv.y() < -kUvEps || uv.x() > 1 + kUvEps || uv.y() > 1 + kUvEps)
          throw ConfigError(where + ": UV coordinate outside [0,1]^2");
      }
    }
  }
  for (int p : model.passthrough_parts) {
    if (p < 0 || p >= model.part_count())
      throw ConfigError("passthrough part " + std::to_string(p) + " out of range");
  }
}

namespace {

// Interiors overlap unless one of the six edge lines separates the triangles.
bool uv_interiors_overlap(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b, double eps) {
  auto separated_by_edges = [eps](const std::array<Vec2, 3>& t, const std::array<Vec2, 3>& o) {
    for (int e = 0; e < 3; ++e) {
      const Vec2 d = t[(e + 1) % 3] - t[e];
      const Vec2 axis(-d.y(), d.x());
      double tmin = std::numeric_limits<double>::max(), tmax = -tmin;
      double omin = tmin, omax = -tmin;
      for (int k = 0; k < 3; ++k) {
        const double pt = axis.dot(t[k]);
        const double po = axis.dot(o[k]);
        tmin = std::min(tmin, pt);
        tmax = std::max(tmax, pt);
        omin = std::min(omin, po);
        omax = std::max(omax, po);
      }
      const double scale = eps * std::max(1.0, axis.norm());
      if (tmax <= omin + scale || omax <= tmin + scale) return true;
    }
    return false;
  };
  return !separated_by_edges(a, b) && !separated_by_edges(b, a);
}

}  // namespace

void check_uv_injective(const TemplateModel& model) {
  for (const auto& part : model.parts) {
    const std::size_t n = part.face_uv.size();
    if (n < 2) continue;
    const int grid = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(n))), 1, 512);
    std::vector<std::vector<std::uint32_t>> cells(static_cast<std::size_t>(grid) * grid);
    std::vector<Eigen::Vector4i> ranges(n);
    auto cell_of = [grid](double x) {
      return std::clamp(static_cast<int>(std::floor(x * grid)), 0, grid - 1);
    };
    for (std::size_t f = 0; f < n; ++f) {
      const auto& t = part.face_uv[f];
      const double x0 = std::min({t[0].x(), t[1].x(), t[2].x()});
      const double x1 = std::max({t[0].x(), t[1].x(), t[2].x()});
      const double y0 = std::min({t[0].y(), t[1].y(), t[2].y()});
      const double y1 = std::max({t[0].y(), t[1].y(), t[2].y()});
      ranges[f] = {cell_of(x0), cell_of(x1), cell_of(y0), cell_of(y1)};
      for (int cy = ranges[f][2]; cy <= ranges[f][3]; ++cy)
        for (int cx = ranges[f][0]; cx <= ranges[f][1]; ++cx)
          cells[static_cast<std::size_t>(cy) * grid + cx].push_back(static_cast<std::uint32_t>(f));
    }
    for (int cy = 0; cy < grid; ++cy) {
      for (int cx = 0; cx < grid; ++cx) {
        const auto& bucket = cells[static_cast<std::size_t>(cy) * grid + cx];
        for (std::size_t i = 0; i < bucket.size(); ++i) {
          for (std::size_t j = i + 1; j < bucket.size(); ++j) {
            const auto& ra = ranges[bucket[i]];
            const auto& rb = ranges[bucket[j]];
            // test each pair only in the first cell the two ranges share
            if (cx != std::max(ra[0], rb[0]) || cy != std::max(ra[2], rb[2])) continue;
            if (uv_interiors_overlap(part.face_uv[bucket[i]], part.face_uv[bucket[j]], 1e-12)) {
              throw ConfigError("overlapping UV triangles in part " + std::to_string(part.part_index) +
                                " (faces " + std::to_string(bucket[i]) + " and " +
                                std::to_string(bucket[j]) + ")");
            }
          }
        }
      }
    }
  }
}

std::size_t count_nonmanifold_edges(const PartMesh& part) {
  std::map<std::pair<int, int>, int> edge_faces;
  for (const auto& f : part.faces) {
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_faces[{a, b}];
    }
  }
  return static_cast<std::size_t>(
      std::count_if(edge_faces.begin(), edge_faces.end(), [](const auto& e) { return e.second > 2; }));
}

}  // namespace iuvd
