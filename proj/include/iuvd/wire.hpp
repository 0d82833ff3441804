#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iuvd/occupancy.hpp"

namespace iuvd {

// Frames are little-endian and length-prefixed:
//   request  u32 n, n * 7 f32 (sdf, body normal xyz, cloth xyz)
//   response u32 n, n f32 occupancy
namespace wire {

std::vector<std::uint8_t> encode_request(std::span<const FeatureVector> features);
std::vector<FeatureVector> decode_request(std::span<const std::uint8_t> frame);
std::vector<std::uint8_t> encode_response(std::span<const float> occupancy);
// Throws ProtocolError on a count other than expected or values outside [0,1].
std::vector<float> decode_response(std::span<const std::uint8_t> frame, std::size_t expected);

// Largest n accepted in either direction.
inline constexpr std::uint32_t kMaxFrameCount = 1u << 26;

}  // namespace wire

// Provider speaking the wire protocol to a child process or TCP server.
// Frames on one connection are strictly sequential.
class ExternalProvider final : public OccupancyProvider {
 public:
  // "exec:<shell command>" or "tcp:<host>:<port>".
  static std::unique_ptr<ExternalProvider> connect(const std::string& endpoint);
  ~ExternalProvider() override;

  ExternalProvider(const ExternalProvider&) = delete;
  ExternalProvider& operator=(const ExternalProvider&) = delete;

  ProviderInput input() const override { return ProviderInput::kFeatures; }
  bool concurrent() const override { return false; }
  std::string name() const override { return endpoint_; }
  void evaluate(const QueryBatchView& batch, std::span<float> out) override;

  std::uint64_t frames_sent() const { return frames_; }

 private:
  ExternalProvider(std::string endpoint, int read_fd, int write_fd, int child_pid);
  void close_stream();

  std::string endpoint_;
  int read_fd_ = -1;
  int write_fd_ = -1;
  int child_pid_ = -1;
  std::uint64_t frames_ = 0;
};

// Answers frames on the given descriptors until the peer closes cleanly.
// Returns the number of frames served. Throws ProtocolError on malformed input.
std::uint64_t serve_stream(OccupancyProvider& provider, int in_fd, int out_fd);

// Accepts connections on host:port one at a time. Stops after max_connections
// (0 = forever). on_listening receives the bound port (useful with port 0).
void serve_tcp(OccupancyProvider& provider, const std::string& host, int port,
               std::size_t max_connections = 0,
               const std::function<void(int)>& on_listening = {});

}  // namespace iuvd
