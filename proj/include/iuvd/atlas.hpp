#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "iuvd/template_model.hpp"

namespace iuvd {

// Rasterized maps of one part. Texel (u, v) lives at index v * width + u.
struct PartAtlas {
  std::vector<Vec3f> source_points;   // template surface point per texel
  std::vector<Vec3f> normals;         // unit where mask is set
  std::vector<std::uint8_t> mask;     // valid after dilation
  std::vector<std::uint8_t> mask_original;
  std::vector<std::uint8_t> visible;  // front-facing w.r.t. the camera
  std::vector<std::int32_t> face;     // covering face per original texel, -1 elsewhere
  // +1 when (dP/du x dP/dv) points along the normal, -1 for mirrored charts.
  int orientation = 1;
};

struct AtlasMaps {
  int width = 0;   // U
  int height = 0;  // V
  std::vector<PartAtlas> parts;

  int part_count() const { return static_cast<int>(parts.size()); }
  std::size_t texel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  bool in_range(int u, int v) const { return u >= 0 && v >= 0 && u < width && v < height; }
  bool valid(int part, int u, int v) const {
    return part >= 0 && part < part_count() && in_range(u, v) && parts[part].mask[index(u, v)];
  }
  // Normalized chart coordinate of a texel center.
  Vec2 texel_uv(double u, double v) const { return {(u + 0.5) / width, (v + 0.5) / height}; }
  std::size_t masked_count() const;
  std::size_t masked_original_count() const;
};

// Texel-center coverage with a top-left fill rule on a fixed-point grid.
// Throws Error if two triangles of one part cover the same texel.
AtlasMaps rasterize_atlas(const TemplateModel& model, int width, int height);

// Grows the mask with a 3x3 square element; new texels receive the average
// of linear extensions from each valid neighbor direction.
AtlasMaps dilate_and_extrapolate(AtlasMaps atlas, int iterations);

// Sign of the chart Jacobian relative to the stored normals.
int chart_orientation(const AtlasMaps& atlas, int part);

// Nearest-surface depth buffer of a template seen through a camera.
class DepthBuffer {
 public:
  DepthBuffer(const TemplateModel& model, const Camera& camera, int resolution);

  // True unless something lies in front of the point by more than the
  // depth tolerance. Uses the farthest of the 3x3 pixel neighborhood so
  // steep surfaces do not self-occlude within a pixel.
  bool visible(const Vec3& p) const;

  int resolution() const { return resolution_; }
  double tolerance() const { return tolerance_; }

 private:
  bool pixel_of(const Vec3& p, int& x, int& y) const;

  Camera camera_;
  int resolution_;
  double tolerance_;
  std::vector<double> zmax_;  // -inf where empty
};

AtlasMaps compute_visibility(AtlasMaps atlas, const TemplateModel& model, const Camera& camera,
                             int resolution = 512);

// Binary dump, little-endian: "IUVA", u32 I, U, V, then per part
// f32 points, f32 normals, u8 mask, u8 mask_original, u8 visibility.
void save_atlas(const AtlasMaps& atlas, const std::filesystem::path& path);
AtlasMaps load_atlas(const std::filesystem::path& path);

}  // namespace iuvd
