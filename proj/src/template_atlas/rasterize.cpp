#include <algorithm>
#include <array>
#include <string>
#include <cmath>
#include <cstdint>

#include "iuvd/atlas.hpp"
#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"

namespace iuvd {
namespace {

constexpr std::int64_t kSubpixel = 256;

struct FixedPoint {
  std::int64_t x, y;
};

std::int64_t edge(const FixedPoint& a, const FixedPoint& b, const FixedPoint& p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

// Exactly one of a->b and b->a qualifies, so shared edges are owned once.
bool top_left(const FixedPoint& a, const FixedPoint& b) {
  const std::int64_t dx = b.x - a.x, dy = b.y - a.y;
  return dy < 0 || (dy == 0 && dx < 0);
}

bool covers(std::int64_t w, bool owns_edge) { return w > 0 || (w == 0 && owns_edge); }

void rasterize_part(const PartMesh& mesh, int width, int height, PartAtlas& out) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  out.source_points.assign(n, Vec3f::Zero());
  out.normals.assign(n, Vec3f::Zero());
  out.mask_original.assign(n, 0);
  out.visible.assign(n, 0);
  out.face.assign(n, -1);

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    std::array<int, 3> order{0, 1, 2};
    std::array<FixedPoint, 3> p;
    for (int k = 0; k < 3; ++k) {
      const Vec2& uv = mesh.face_uv[f][k];
      p[k] = {std::llround(uv.x() * width * kSubpixel), std::llround(uv.y() * height * kSubpixel)};
    }
    std::int64_t area = edge(p[0], p[1], p[2]);
    if (area == 0) continue;
    if (area < 0) {
      std::swap(p[1], p[2]);
      std::swap(order[1], order[2]);
      area = -area;
    }
    const bool own0 = top_left(p[1], p[2]);
    const bool own1 = top_left(p[2], p[0]);
    const bool own2 = top_left(p[0], p[1]);

    const std::int64_t min_x = std::min({p[0].x, p[1].x, p[2].x});
    const std::int64_t max_x = std::max({p[0].x, p[1].x, p[2].x});
    const std::int64_t min_y = std::min({p[0].y, p[1].y, p[2].y});
    const std::int64_t max_y = std::max({p[0].y, p[1].y, p[2].y});
    auto first_texel = [](std::int64_t lo) {
      // smallest t with t * S + S/2 >= lo
      return static_cast<int>(std::ceil((static_cast<double>(lo) - kSubpixel / 2) / kSubpixel));
    };
    auto last_texel = [](std::int64_t hi) {
      return static_cast<int>(std::floor((static_cast<double>(hi) - kSubpixel / 2) / kSubpixel));
    };
    const int x0 = std::max(0, first_texel(min_x)), x1 = std::min(width - 1, last_texel(max_x));
    const int y0 = std::max(0, first_texel(min_y)), y1 = std::min(height - 1, last_texel(max_y));

    const auto& tri = mesh.faces[f];
    const Vec3 P[3] = {mesh.vertices[tri[order[0]]], mesh.vertices[tri[order[1]]], mesh.vertices[tri[order[2]]]};
    const Vec3 N[3] = {mesh.normals[tri[order[0]]], mesh.normals[tri[order[1]]], mesh.normals[tri[order[2]]]};
    const double inv_area = 1.0 / static_cast<double>(area);

    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const FixedPoint c{x * kSubpixel + kSubpixel / 2, y * kSubpixel + kSubpixel / 2};
        const std::int64_t w0 = edge(p[1], p[2], c);
        const std::int64_t w1 = edge(p[2], p[0], c);
        const std::int64_t w2 = edge(p[0], p[1], c);
        if (!covers(w0, own0) || !covers(w1, own1) || !covers(w2, own2)) continue;
        const std::size_t idx = static_cast<std::size_t>(y) * width + x;
        if (out.face[idx] >= 0) {
          throw Error("UV chart overlap in part " + std::to_string(mesh.part_index) + " at texel (" +
                      std::to_string(x) + ", " + std::to_string(y) + "): faces " +
                      std::to_string(out.face[idx]) + " and " + std::to_string(f));
        }
        const double l0 = w0 * inv_area, l1 = w1 * inv_area, l2 = w2 * inv_area;
        out.source_points[idx] = (l0 * P[0] + l1 * P[1] + l2 * P[2]).cast<float>();
        out.normals[idx] = safe_normalized(l0 * N[0] + l1 * N[1] + l2 * N[2]).cast<float>();
        out.mask_original[idx] = 1;
        out.face[idx] = static_cast<std::int32_t>(f);
      }
    }
  }
  out.mask = out.mask_original;
}

}  // namespace

std::size_t AtlasMaps::masked_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += static_cast<std::size_t>(std::count(p.mask.begin(), p.mask.end(), 1));
  return n;
}

std::size_t AtlasMaps::masked_original_count() const {
  std::size_t n = 0;
  for (const auto& p : parts)
    n += static_cast<std::size_t>(std::count(p.mask_original.begin(), p.mask_original.end(), 1));
  return n;
}

int chart_orientation(const AtlasMaps& atlas, int part) {
  const PartAtlas& pa = atlas.parts.at(part);
  long votes = 0;
  for (int v = 0; v + 1 < atlas.height; ++v) {
    for (int u = 0; u + 1 < atlas.width; ++u) {
      const std::size_t i = atlas.index(u, v), iu = atlas.index(u + 1, v), iv = atlas.index(u, v + 1);
      if (!pa.mask_original[i] || !pa.mask_original[iu] || !pa.mask_original[iv]) continue;
      const Vec3f du = pa.source_points[iu] - pa.source_points[i];
      const Vec3f dv = pa.source_points[iv] - pa.source_points[i];
      const float s = du.cross(dv).dot(pa.normals[i]);
      if (s > 0) ++votes;
      if (s < 0) --votes;
    }
  }
  return votes >= 0 ? 1 : -1;
}

AtlasMaps rasterize_atlas(const TemplateModel& model, int width, int height) {
  if (width < 8 || height < 8) {
    throw ConfigError("atlas resolution must be at least 8x8, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  AtlasMaps atlas;
  atlas.width = width;
  atlas.height = height;
  atlas.parts.resize(model.parts.size());
  parallel_for(
      model.parts.size(), [&](std::size_t i) { rasterize_part(model.parts[i], width, height, atlas.parts[i]); },
      1);
  for (int i = 0; i < atlas.part_count(); ++i) atlas.parts[i].orientation = chart_orientation(atlas, i);
  return atlas;
}

}  // namespace iuvd
