#pragma once

#include <span>
#include <vector>

#include "iuvd/template_model.hpp"

namespace iuvd {

enum class UvScaleMode {
  kLinear,  // s_i = r_i / max r
  kSqrt,    // s_i = sqrt(r_i / max r), equalizes area density
};

// r_i = mean XYZ triangle area / mean UV triangle area of each part.
// Throws ConfigError naming the part if any UV triangle has zero area.
std::vector<double> uv_area_ratios(const TemplateModel& model);

std::vector<double> uv_scale_factors(std::span<const double> ratios, UvScaleMode mode);

// Scales every chart about its area-weighted UV centroid.
TemplateModel scale_uv_charts(const TemplateModel& model, UvScaleMode mode = UvScaleMode::kLinear);

}  // namespace iuvd
