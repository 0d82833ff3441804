#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iuvd/atlas.hpp"

namespace iuvd {

inline constexpr float kOccupancyInside = 1.0f;
inline constexpr float kOccupancyOutside = 0.0f;
inline constexpr float kIsoLevel = 0.5f;

inline bool is_inside(float f) { return f > kIsoLevel; }

// [sdf, body normal, cloth normal feature]; 7 floats on the wire.
struct FeatureVector {
  float sdf = 0.0f;
  Vec3f body_normal = Vec3f::Zero();
  Vec3f cloth = Vec3f::Zero();
};

// Chart location a query point belongs to, in normalized chart coordinates.
struct SurfaceCoord {
  int part = -1;
  float u = 0.0f;
  float v = 0.0f;
};

// Front and back normal images seen through one camera. Pixel (x, y) covers
// ndc [2x/W - 1, 2(x+1)/W - 1) horizontally, likewise vertically.
struct NormalImages {
  int width = 0;
  int height = 0;
  std::vector<Vec3f> front;
  std::vector<Vec3f> back;
  Camera camera;

  static NormalImages constant(int width, int height, const Vec3f& front, const Vec3f& back,
                               const Camera& camera);
  // Nearest-pixel lookup; zeros when the projection leaves the image.
  Vec3f sample(const Vec3& p, bool use_front) const;
};

FeatureVector features_iuvd(const AtlasMaps& atlas, int part, int u, int v, double d, double alpha,
                            const NormalImages* cloth = nullptr);

enum class ProviderInput { kPoints, kFeatures };

// Parallel spans describing one batch. Which spans are filled depends on the
// consumer; all filled spans share one length.
struct QueryBatchView {
  std::span<const Vec3> points;
  std::span<const FeatureVector> features;
  std::span<const SurfaceCoord> coords;

  std::size_t size() const {
    return std::max({points.size(), features.size(), coords.size()});
  }
};

class OccupancyProvider {
 public:
  virtual ~OccupancyProvider() = default;

  virtual ProviderInput input() const = 0;
  // Whether the provider reads SurfaceCoord. Such providers cannot be served
  // over the wire, which carries features only.
  virtual bool needs_coords() const { return false; }
  virtual bool concurrent() const { return true; }
  virtual std::string name() const = 0;

  // Writes exactly batch.size() values into out.
  virtual void evaluate(const QueryBatchView& batch, std::span<float> out) = 0;
};

// Validates the batch, evaluates, and rejects NaN or out-of-range output.
std::vector<float> evaluate_batch(OccupancyProvider& provider, const QueryBatchView& batch);
void evaluate_batch(OccupancyProvider& provider, const QueryBatchView& batch, std::span<float> out);

// Splits a large batch into chunks and runs them on worker threads when the
// provider allows it. Output does not depend on the schedule.
void evaluate_chunked(OccupancyProvider& provider, const QueryBatchView& batch, std::span<float> out,
                      std::size_t chunk = 8192);

// Column displacement h(i, u, v) in meters used by the analytical oracle.
class DisplacementField {
 public:
  enum class Kind { kConstant, kSinusoidal, kSmooth };

  static DisplacementField constant(double h0);
  static DisplacementField sinusoidal(double amplitude, int frequency, double offset = 0.0);
  static DisplacementField smooth(std::uint64_t seed, double amplitude, double offset = 0.0,
                                  int modes = 6);

  Kind kind() const { return kind_; }
  double operator()(int part, double u, double v) const;
  // Upper bound of |h| over every chart.
  double bound() const;
  std::string describe() const;

 private:
  struct Mode {
    int ku, kv;
    double weight, phase;
  };
  std::vector<Mode> modes_for(int part) const;

  Kind kind_ = Kind::kConstant;
  double amplitude_ = 0.0;
  double offset_ = 0.0;
  int frequency_ = 0;
  std::uint64_t seed_ = 0;
  int mode_count_ = 0;
};

// Inside iff sdf < h(part, u, v). With ramp_width w > 0 the output is
// clamp(0.5 + (h - sdf) / (2w)) so the 0.5 level sits exactly at sdf = h.
class AnalyticalOracle final : public OccupancyProvider {
 public:
  explicit AnalyticalOracle(DisplacementField field, double ramp_width = 0.0);

  ProviderInput input() const override { return ProviderInput::kFeatures; }
  bool needs_coords() const override { return field_.kind() != DisplacementField::Kind::kConstant; }
  std::string name() const override { return "oracle:" + field_.describe(); }
  void evaluate(const QueryBatchView& batch, std::span<float> out) override;

  const DisplacementField& field() const { return field_; }
  double ramp_width() const { return ramp_; }

 private:
  DisplacementField field_;
  double ramp_;
};

// Point-based ball occupancy, optionally with a linear ramp of half-width w.
class SphereOracle final : public OccupancyProvider {
 public:
  SphereOracle(Vec3 center, double radius, double ramp_width = 0.0);

  ProviderInput input() const override { return ProviderInput::kPoints; }
  std::string name() const override { return "oracle:sphere"; }
  void evaluate(const QueryBatchView& batch, std::span<float> out) override;

  const Vec3& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec3 center_;
  double radius_;
  double ramp_;
};

class ConstantProvider final : public OccupancyProvider {
 public:
  explicit ConstantProvider(float value) : value_(value) {}

  ProviderInput input() const override { return ProviderInput::kPoints; }
  std::string name() const override { return "constant"; }
  void evaluate(const QueryBatchView& batch, std::span<float> out) override;

 private:
  float value_;
};

// f = 1 when the sdf channel is below the threshold, else 0. Feature-only, so
// it can stand behind the wire protocol.
class ThresholdProvider final : public OccupancyProvider {
 public:
  explicit ThresholdProvider(float threshold) : threshold_(threshold) {}

  ProviderInput input() const override { return ProviderInput::kFeatures; }
  std::string name() const override { return "threshold"; }
  void evaluate(const QueryBatchView& batch, std::span<float> out) override;

 private:
  float threshold_;
};

// Charges a fixed cost per query point by busy-waiting, then delegates.
class StubProvider final : public OccupancyProvider {
 public:
  StubProvider(double cost_us, std::shared_ptr<OccupancyProvider> inner);

  ProviderInput input() const override { return inner_->input(); }
  bool needs_coords() const override { return inner_->needs_coords(); }
  bool concurrent() const override { return inner_->concurrent(); }
  std::string name() const override;
  void evaluate(const QueryBatchView& batch, std::span<float> out) override;

  double cost_us() const { return cost_us_; }
  const OccupancyProvider& inner() const { return *inner_; }

 private:
  double cost_us_;
  std::shared_ptr<OccupancyProvider> inner_;
};

}  // namespace iuvd
