#pragma once

#include <cstdint>
#include <vector>

#include "iuvd/occupancy.hpp"
#include "iuvd/surface.hpp"
#include "iuvd/xyz.hpp"

namespace iuvd {

// Distances in centimeters.
struct MetricsReport {
  double p2s_cm = 0.0;          // ground-truth samples to prediction
  double inverse_p2s_cm = 0.0;  // prediction samples to ground truth
  double chamfer_cm = 0.0;      // mean of the two
  double normal_pointwise = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct SurfaceSamples {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // interpolated area-weighted vertex normals
};

// Area-weighted uniform samples; deterministic for a given seed.
SurfaceSamples sample_surface(const FlatMesh& mesh, std::size_t n, std::uint64_t seed);

// Mean unsigned distance from the points to the mesh in the BVH.
double mean_distance(const std::vector<Vec3>& points, const TriangleBvh& target);

// Both directions sample their own source mesh with the same seed, so the
// result is symmetric in its arguments. Requires n_samples >= 1000.
MetricsReport p2s_chamfer(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n_samples,
                          std::uint64_t seed);

// Mean |n_gt - n_pred| over ground-truth samples, with n_pred the
// interpolated normal at the nearest prediction point.
double normal_consistency(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n_samples,
                          std::uint64_t seed);

MetricsReport evaluate_metrics(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n_samples,
                               std::uint64_t seed);

// Template surface pushed out by h(part, u, v) along its normals, each face
// split into subdivisions^2 triangles. The surface an analytical oracle
// describes.
LabeledMesh displaced_template(const TemplateModel& model, const DisplacementField& field, int subdivisions);

}  // namespace iuvd
