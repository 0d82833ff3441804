#include <algorithm>
#include <cmath>
#include <numeric>

#include "iuvd/error.hpp"
#include "iuvd/metrics.hpp"
#include "iuvd/parallel.hpp"
#include "iuvd/random.hpp"

namespace iuvd {
namespace {

constexpr double kCentimeters = 100.0;

void check_inputs(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n) {
  if (gt.faces.empty()) throw Error("ground-truth mesh is empty");
  if (pred.faces.empty()) throw Error("predicted mesh is empty");
  if (n < 1000) throw Error("metrics need at least 1000 samples, got " + std::to_string(n));
}

// Summed in index order so results do not depend on the thread count.
double ordered_mean(const std::vector<double>& values) {
  return values.empty() ? 0.0 : std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

}  // namespace

SurfaceSamples sample_surface(const FlatMesh& mesh, std::size_t n, std::uint64_t seed) {
  const std::size_t nf = mesh.faces.size();
  if (nf == 0) throw Error("cannot sample an empty mesh");
  std::vector<double> cdf(nf);
  double total = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& t = mesh.faces[f];
    total += triangle_area(mesh.positions[t[0]], mesh.positions[t[1]], mesh.positions[t[2]]);
    cdf[f] = total;
  }
  if (!(total > 0.0)) throw Error("cannot sample a mesh with zero area");
  Rng rng(seed);
  SurfaceSamples s;
  s.points.resize(n);
  s.normals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = rng.uniform() * total;
    const std::size_t f = std::min<std::size_t>(
        nf - 1, static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), pick) - cdf.begin()));
    const double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
    const Vec3 w(1.0 - r1, r1 * (1.0 - r2), r1 * r2);
    const auto& t = mesh.faces[f];
    s.points[i] = w[0] * mesh.positions[t[0]] + w[1] * mesh.positions[t[1]] + w[2] * mesh.positions[t[2]];
    s.normals[i] =
        safe_normalized(w[0] * mesh.normals[t[0]] + w[1] * mesh.normals[t[1]] + w[2] * mesh.normals[t[2]]);
  }
  return s;
}

double mean_distance(const std::vector<Vec3>& points, const TriangleBvh& target) {
  std::vector<double> d(points.size());
  parallel_for(points.size(), [&](std::size_t i) { d[i] = target.nearest(points[i]).distance; }, 64);
  return ordered_mean(d);
}

MetricsReport p2s_chamfer(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n, std::uint64_t seed) {
  check_inputs(gt, pred, n);
  const FlatMesh gt_flat = FlatMesh::from_labeled(gt);
  const FlatMesh pred_flat = FlatMesh::from_labeled(pred);
  const TriangleBvh gt_bvh(gt_flat), pred_bvh(pred_flat);
  MetricsReport r;
  r.samples = n;
  r.seed = seed;
  r.p2s_cm = kCentimeters * mean_distance(sample_surface(gt_flat, n, seed).points, pred_bvh);
  r.inverse_p2s_cm = kCentimeters * mean_distance(sample_surface(pred_flat, n, seed).points, gt_bvh);
  r.chamfer_cm = 0.5 * (r.p2s_cm + r.inverse_p2s_cm);
  return r;
}

double normal_consistency(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n, std::uint64_t seed) {
  check_inputs(gt, pred, n);
  const FlatMesh gt_flat = FlatMesh::from_labeled(gt);
  const TriangleBvh pred_bvh(FlatMesh::from_labeled(pred));
  const SurfaceSamples s = sample_surface(gt_flat, n, seed);
  std::vector<double> err(n);
  parallel_for(n, [&](std::size_t i) { err[i] = (s.normals[i] - pred_bvh.nearest(s.points[i]).normal).norm(); }, 64);
  return ordered_mean(err);
}

MetricsReport evaluate_metrics(const LabeledMesh& gt, const LabeledMesh& pred, std::size_t n, std::uint64_t seed) {
  MetricsReport r = p2s_chamfer(gt, pred, n, seed);
  r.normal_pointwise = normal_consistency(gt, pred, n, seed);
  return r;
}

LabeledMesh displaced_template(const TemplateModel& model, const DisplacementField& field, int subdivisions) {
  if (subdivisions < 1) throw ConfigError("subdivisions must be >= 1");
  const int s = subdivisions;
  LabeledMesh out;
  for (const PartMesh& part : model.parts) {
    for (std::size_t f = 0; f < part.faces.size(); ++f) {
      const auto& t = part.faces[f];
      const int base = static_cast<int>(out.vertices.size());
      // row i holds s - i + 1 vertices
      auto id = [&](int i, int j) { return base + i * (s + 1) - i * (i - 1) / 2 + j; };
      for (int i = 0; i <= s; ++i) {
        for (int j = 0; j <= s - i; ++j) {
          const double b1 = static_cast<double>(i) / s, b2 = static_cast<double>(j) / s, b0 = 1.0 - b1 - b2;
          const Vec3 p = b0 * part.vertices[t[0]] + b1 * part.vertices[t[1]] + b2 * part.vertices[t[2]];
          const Vec3 n = safe_normalized(b0 * part.normals[t[0]] + b1 * part.normals[t[1]] + b2 * part.normals[t[2]]);
          const Vec2 uv = b0 * part.face_uv[f][0] + b1 * part.face_uv[f][1] + b2 * part.face_uv[f][2];
          out.vertices.push_back(p + n * field(part.part_index, uv.x(), uv.y()));
          out.vertex_part.push_back(part.part_index);
          out.provenance.push_back(Provenance::kReconstructed);
        }
      }
      for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s - i; ++j) {
          out.faces.emplace_back(id(i, j), id(i + 1, j), id(i, j + 1));
          if (j + 1 < s - i) out.faces.emplace_back(id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
        }
      }
    }
  }
  return out;
}

}  // namespace iuvd
