#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iuvd {

// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, missing paths, invalid parameters.
// The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed inference frame. The stream is closed after this is raised.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// I/O failure talking to an external provider. Retriable on a fresh connection.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::uint64_t frame_index)
      : Error(what + " (frame " + std::to_string(frame_index) + ")"),
        frame_index_(frame_index) {}

  std::uint64_t frame_index() const { return frame_index_; }
  bool retriable() const { return true; }

 private:
  std::uint64_t frame_index_;
};

}  // namespace iuvd
