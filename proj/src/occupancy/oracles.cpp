#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "iuvd/error.hpp"
#include "iuvd/occupancy.hpp"
#include "iuvd/random.hpp"
#include "iuvd/timing.hpp"

namespace iuvd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

float ramp(double margin, double width) {
  if (width <= 0.0) return margin > 0.0 ? kOccupancyInside : kOccupancyOutside;
  return static_cast<float>(std::clamp(0.5 + margin / (2.0 * width), 0.0, 1.0));
}

double unit_from_bits(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

}  // namespace

DisplacementField DisplacementField::constant(double h0) {
  DisplacementField f;
  f.kind_ = Kind::kConstant;
  f.offset_ = h0;
  return f;
}

DisplacementField DisplacementField::sinusoidal(double amplitude, int frequency, double offset) {
  if (frequency < 1) throw ConfigError("sinusoidal field frequency must be >= 1");
  DisplacementField f;
  f.kind_ = Kind::kSinusoidal;
  f.amplitude_ = amplitude;
  f.frequency_ = frequency;
  f.offset_ = offset;
  return f;
}

DisplacementField DisplacementField::smooth(std::uint64_t seed, double amplitude, double offset, int modes) {
  if (modes < 1) throw ConfigError("smooth field needs at least one mode");
  DisplacementField f;
  f.kind_ = Kind::kSmooth;
  f.amplitude_ = amplitude;
  f.offset_ = offset;
  f.seed_ = seed;
  f.mode_count_ = modes;
  return f;
}

std::vector<DisplacementField::Mode> DisplacementField::modes_for(int part) const {
  std::uint64_t state = splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(part + 1)));
  auto draw = [&state] {
    state = splitmix64(state);
    return unit_from_bits(state);
  };
  std::vector<Mode> modes(static_cast<std::size_t>(mode_count_));
  for (auto& m : modes) {
    do {
      m.ku = static_cast<int>(std::floor(draw() * 5.0)) - 2;
      m.kv = static_cast<int>(std::floor(draw() * 5.0)) - 2;
    } while (m.ku == 0 && m.kv == 0);
    m.weight = 0.5 + 0.5 * draw();
    m.phase = kTwoPi * draw();
  }
  return modes;
}

double DisplacementField::operator()(int part, double u, double v) const {
  switch (kind_) {
    case Kind::kConstant:
      return offset_;
    case Kind::kSinusoidal:
      return offset_ + amplitude_ * std::sin(kTwoPi * frequency_ * u) * std::sin(kTwoPi * frequency_ * v);
    case Kind::kSmooth: {
      double sum = 0.0, total = 0.0;
      for (const Mode& m : modes_for(part)) {
        sum += m.weight * std::sin(kTwoPi * (m.ku * u + m.kv * v) + m.phase);
        total += m.weight;
      }
      return offset_ + amplitude_ * sum / total;
    }
  }
  return offset_;
}

double DisplacementField::bound() const {
  return std::abs(offset_) + (kind_ == Kind::kConstant ? 0.0 : std::abs(amplitude_));
}

std::string DisplacementField::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kConstant:
      os << "const(h=" << offset_ << ")";
      break;
    case Kind::kSinusoidal:
      os << "sin(A=" << amplitude_ << ",k=" << frequency_ << ",h0=" << offset_ << ")";
      break;
    case Kind::kSmooth:
      os << "smooth(seed=" << seed_ << ",A=" << amplitude_ << ",h0=" << offset_ << ")";
      break;
  }
  return os.str();
}

AnalyticalOracle::AnalyticalOracle(DisplacementField field, double ramp_width)
    : field_(std::move(field)), ramp_(ramp_width) {
  if (!(ramp_width >= 0.0)) throw ConfigError("oracle ramp width must be >= 0");
}

void AnalyticalOracle::evaluate(const QueryBatchView& batch, std::span<float> out) {
  const bool constant = field_.kind() == DisplacementField::Kind::kConstant;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double h = 0.0;
    if (constant) {
      h = field_(0, 0.0, 0.0);
    } else {
      const SurfaceCoord& c = batch.coords[i];
      h = field_(c.part, c.u, c.v);
    }
    out[i] = ramp(h - static_cast<double>(batch.features[i].sdf), ramp_);
  }
}

SphereOracle::SphereOracle(Vec3 center, double radius, double ramp_width)
    : center_(std::move(center)), radius_(radius), ramp_(ramp_width) {
  if (!(radius > 0.0)) throw ConfigError("sphere oracle radius must be positive");
}

void SphereOracle::evaluate(const QueryBatchView& batch, std::span<float> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = ramp(radius_ - (batch.points[i] - center_).norm(), ramp_);
}

void ConstantProvider::evaluate(const QueryBatchView&, std::span<float> out) {
  std::fill(out.begin(), out.end(), value_);
}

void ThresholdProvider::evaluate(const QueryBatchView& batch, std::span<float> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = batch.features[i].sdf < threshold_ ? kOccupancyInside : kOccupancyOutside;
}

StubProvider::StubProvider(double cost_us, std::shared_ptr<OccupancyProvider> inner)
    : cost_us_(cost_us), inner_(std::move(inner)) {
  if (!(cost_us >= 0.0)) throw ConfigError("stub cost must be >= 0");
  if (!inner_) throw ConfigError("stub provider needs an inner provider");
}

std::string StubProvider::name() const {
  std::ostringstream os;
  os << "stub:" << cost_us_ << "us(" << inner_->name() << ")";
  return os.str();
}

void StubProvider::evaluate(const QueryBatchView& batch, std::span<float> out) {
  busy_wait_us(cost_us_ * static_cast<double>(out.size()));
  inner_->evaluate(batch, out);
}

}  // namespace iuvd
