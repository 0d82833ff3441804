#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iuvd/metrics.hpp"
#include "iuvd/uv_scaling.hpp"

namespace iuvd {

enum class Representation { kIuvdFull, kIuvdOctree, kIuvdFeedback, kXyzFull, kXyzOctree };

Representation parse_representation(const std::string& name);
std::string to_string(Representation rep);
std::vector<Representation> all_representations();
bool is_xyz(Representation rep);

struct ProviderContext {
  double ramp_width = 0.0;  // analytical oracles
  Vec3 sphere_center = Vec3::Zero();
  double sphere_radius = 0.5;
  std::uint64_t seed = 1;
};

// oracle:const[:h] | oracle:sin[:A[:k[:h0]]] | oracle:smooth[:seed[:A[:h0]]]
// | oracle:sphere[:r] | stub:<us>[:const|sin|smooth] | constant:<v>
// | threshold:<t> | exec:<cmd> | tcp:<host:port>
std::shared_ptr<OccupancyProvider> make_provider(const std::string& spec, const ProviderContext& context = {});

struct AtlasOptions {
  int resolution = 64;
  UvScaleMode uv_scale = UvScaleMode::kLinear;
  int dilation = 2;
  int visibility_resolution = 512;
};

// Template with scaled charts and the atlas rasterized from it.
struct PreparedTemplate {
  TemplateModel model;
  AtlasMaps atlas;
};

PreparedTemplate prepare_template(const TemplateModel& model, const AtlasOptions& options);

struct PipelineConfig {
  QueryOptions query;  // alpha, depth range, IUVD octree levels
  int xyz_n = 257;
  int xyz_levels = 3;
  ExtractOptions extract;
};

struct RunResult {
  Representation rep = Representation::kIuvdFeedback;
  LabeledMesh mesh;
  QueryStats stats;
  std::optional<IuvdVolume> iuvd;
  std::optional<DirectionMap> directions;
  std::optional<XyzVolume> xyz;
};

// Query and extraction for one representation. bvh is required for XYZ
// representations and must be built from prepared.model.
RunResult run_representation(Representation rep, const PreparedTemplate& prepared, OccupancyProvider& provider,
                             const PipelineConfig& config, const TriangleBvh* bvh = nullptr);

// Query points of an IUVD grid relative to an XYZ grid: I*U*V*D / N^3.
double complexity_ratio(int parts, int width, int height, int depth, int n);

struct TimingSummary {
  double median = 0.0, min = 0.0, max = 0.0;
};
TimingSummary summarize(std::vector<double> samples);

struct BenchRow {
  Representation rep = Representation::kIuvdFeedback;
  TimingSummary sdf_ms, inference_ms, extraction_ms, query_and_infer_ms, total_ms;
  std::uint64_t inferred_points = 0;
  std::uint64_t filled_points = 0;
  std::uint64_t mc_cells = 0;
  bool counts_consistent = true;  // identical counts across repeats
  std::string error;              // set when the row aborted
};

struct BenchConfig {
  std::vector<Representation> reps = all_representations();
  int repeats = 30;
  PipelineConfig pipeline;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  int repeats = 0;
  int threads = 0;
  std::string build_profile;
  std::string provider;
  int parts = 0, width = 0, height = 0, depth = 0, xyz_n = 0;
  double complexity_ratio = 0.0;        // this run's dimensions
  double paper_complexity_ratio = 0.0;  // 24 parts, 64^2, D = 21 against 257^3
};

BenchReport run_benchmark(const PreparedTemplate& prepared, OccupancyProvider& provider, const BenchConfig& config);
std::string bench_to_json(const BenchReport& report);
std::string bench_to_csv(const BenchReport& report);

}  // namespace iuvd
