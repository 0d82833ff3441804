#include "iuvd/error.hpp"
#include "iuvd/pipeline.hpp"
#include "iuvd/timing.hpp"

namespace iuvd {

Representation parse_representation(const std::string& name) {
  if (name == "iuvd-full") return Representation::kIuvdFull;
  if (name == "iuvd-octree") return Representation::kIuvdOctree;
  if (name == "iuvd-feedback") return Representation::kIuvdFeedback;
  if (name == "xyz-full") return Representation::kXyzFull;
  if (name == "xyz-octree") return Representation::kXyzOctree;
  throw ConfigError("unknown representation '" + name +
                    "' (iuvd-full, iuvd-octree, iuvd-feedback, xyz-full, xyz-octree)");
}

std::string to_string(Representation rep) {
  switch (rep) {
    case Representation::kIuvdFull: return "iuvd-full";
    case Representation::kIuvdOctree: return "iuvd-octree";
    case Representation::kIuvdFeedback: return "iuvd-feedback";
    case Representation::kXyzFull: return "xyz-full";
    case Representation::kXyzOctree: return "xyz-octree";
  }
  return "unknown";
}

std::vector<Representation> all_representations() {
  return {Representation::kXyzFull, Representation::kXyzOctree, Representation::kIuvdFull,
          Representation::kIuvdOctree, Representation::kIuvdFeedback};
}

bool is_xyz(Representation rep) { return rep == Representation::kXyzFull || rep == Representation::kXyzOctree; }

PreparedTemplate prepare_template(const TemplateModel& model, const AtlasOptions& options) {
  if (options.resolution < 8) throw ConfigError("atlas resolution must be >= 8");
  if (options.dilation < 0) throw ConfigError("dilation iterations must be >= 0");
  validate_template(model);
  PreparedTemplate out;
  out.model = scale_uv_charts(model, options.uv_scale);
  AtlasMaps atlas = rasterize_atlas(out.model, options.resolution, options.resolution);
  atlas = dilate_and_extrapolate(std::move(atlas), options.dilation);
  out.atlas = compute_visibility(std::move(atlas), out.model, out.model.camera_or_default(),
                                 options.visibility_resolution);
  return out;
}

RunResult run_representation(Representation rep, const PreparedTemplate& prepared, OccupancyProvider& provider,
                             const PipelineConfig& config, const TriangleBvh* bvh) {
  RunResult r;
  r.rep = rep;
  if (is_xyz(rep)) {
    if (!bvh) throw Error("XYZ representations need a BVH of the template");
    XyzQueryOptions opt;
    opt.n = config.xyz_n;
    opt.strategy = rep == Representation::kXyzFull ? XyzStrategy::kFull : XyzStrategy::kOctree;
    opt.levels = config.xyz_levels;
    opt.box = xyz_query_box(prepared.model, config.query.alpha, config.query.d_max);
    opt.chunk = config.query.chunk;
    XyzVolume vol = xyz_query(provider, *bvh, opt);
    r.mesh = extract_xyz(vol, &vol.stats, config.extract.iso);
    r.stats = vol.stats;
    r.xyz = std::move(vol);
    return r;
  }
  IuvdVolume vol;
  if (rep == Representation::kIuvdFull) {
    vol = full_space_query(prepared.atlas, provider, config.query);
  } else if (rep == Representation::kIuvdOctree) {
    vol = octree_query_iuvd(prepared.atlas, provider, config.query);
  } else {
    FeedbackResult fb = feedback_query(prepared.atlas, provider, config.query);
    vol = std::move(fb.volume);
    r.directions = std::move(fb.directions);
  }
  r.mesh = extract_surface(vol, prepared.atlas, prepared.model, &vol.stats, config.extract);
  r.stats = vol.stats;
  r.iuvd = std::move(vol);
  return r;
}

}  // namespace iuvd
