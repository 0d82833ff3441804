#include <cmath>
#include <string>

#include "iuvd/binary_io.hpp"
#include "iuvd/error.hpp"
#include "iuvd/wire.hpp"

namespace iuvd::wire {

namespace {
constexpr std::size_t kFeatureBytes = 7 * 4;
}

std::vector<std::uint8_t> encode_request(std::span<const FeatureVector> features) {
  if (features.empty()) throw Error("refusing to encode an empty request");
  if (features.size() > kMaxFrameCount) throw Error("request exceeds maximum frame size");
  std::vector<std::uint8_t> out;
  out.reserve(4 + features.size() * kFeatureBytes);
  le::put_u32(out, static_cast<std::uint32_t>(features.size()));
  for (const auto& f : features) {
    le::put_f32(out, f.sdf);
    for (int k = 0; k < 3; ++k) le::put_f32(out, f.body_normal[k]);
    for (int k = 0; k < 3; ++k) le::put_f32(out, f.cloth[k]);
  }
  return out;
}

std::vector<FeatureVector> decode_request(std::span<const std::uint8_t> frame) {
  if (frame.size() < 4) throw ProtocolError("short request header");
  const std::uint32_t n = le::get_u32(frame.data());
  if (n == 0) throw ProtocolError("request with zero points");
  if (n > kMaxFrameCount) throw ProtocolError("request count " + std::to_string(n) + " too large");
  if (frame.size() != 4 + static_cast<std::size_t>(n) * kFeatureBytes)
    throw ProtocolError("request length does not match count " + std::to_string(n));
  std::vector<FeatureVector> out(n);
  const std::uint8_t* p = frame.data() + 4;
  for (auto& f : out) {
    f.sdf = le::get_f32(p);
    for (int k = 0; k < 3; ++k) f.body_normal[k] = le::get_f32(p + 4 + 4 * k);
    for (int k = 0; k < 3; ++k) f.cloth[k] = le::get_f32(p + 16 + 4 * k);
    p += kFeatureBytes;
  }
  return out;
}

std::vector<std::uint8_t> encode_response(std::span<const float> occupancy) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + occupancy.size() * 4);
  le::put_u32(out, static_cast<std::uint32_t>(occupancy.size()));
  for (float f : occupancy) le::put_f32(out, f);
  return out;
}

std::vector<float> decode_response(std::span<const std::uint8_t> frame, std::size_t expected) {
  if (frame.size() < 4) throw ProtocolError("short response header");
  const std::uint32_t n = le::get_u32(frame.data());
  if (n != expected)
    throw ProtocolError("response count " + std::to_string(n) + " does not match request count " +
                        std::to_string(expected));
  if (frame.size() != 4 + static_cast<std::size_t>(n) * 4)
    throw ProtocolError("response length does not match count " + std::to_string(n));
  std::vector<float> out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = le::get_f32(frame.data() + 4 + 4 * static_cast<std::size_t>(i));
    if (!(out[i] >= 0.0f && out[i] <= 1.0f))
      throw ProtocolError("response value at " + std::to_string(i) + " outside [0,1]");
  }
  return out;
}

}  // namespace iuvd::wire
