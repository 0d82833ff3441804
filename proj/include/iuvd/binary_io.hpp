#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "iuvd/error.hpp"

// Little-endian serialization helpers shared by the binary dump formats
// and the inference wire protocol.
namespace iuvd::le {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}
inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

// Stream writer with a small buffer; flushes on destruction.
class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  ~Writer() { flush(); }
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void magic(std::string_view m) { buf_.insert(buf_.end(), m.begin(), m.end()); maybe_flush(); }
  void u32(std::uint32_t v) { put_u32(buf_, v); maybe_flush(); }
  void i32(std::int32_t v) { put_i32(buf_, v); maybe_flush(); }
  void f32(float v) { put_f32(buf_, v); maybe_flush(); }
  void u8(std::uint8_t v) { buf_.push_back(v); maybe_flush(); }

  void flush() {
    if (!buf_.empty()) {
      os_.write(reinterpret_cast<const char*>(buf_.data()),
                static_cast<std::streamsize>(buf_.size()));
      buf_.clear();
    }
  }

 private:
  void maybe_flush() {
    if (buf_.size() >= (1u << 16)) flush();
  }
  std::ostream& os_;
  std::vector<std::uint8_t> buf_;
};

// Stream reader that raises ConfigError on truncation.
class Reader {
 public:
  Reader(std::istream& is, std::string what) : is_(is), what_(std::move(what)) {}

  void expect_magic(std::string_view m) {
    std::string got(m.size(), '\0');
    read(got.data(), got.size());
    if (got != m) throw ConfigError(what_ + ": bad magic, expected '" + std::string(m) + "'");
  }
  std::uint32_t u32() {
    std::uint8_t b[4];
    read(b, 4);
    return get_u32(b);
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32() {
    std::uint8_t b[4];
    read(b, 4);
    return get_f32(b);
  }
  std::uint8_t u8() {
    std::uint8_t b;
    read(&b, 1);
    return b;
  }

 private:
  void read(void* dst, std::size_t n) {
    is_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n) throw ConfigError(what_ + ": truncated file");
  }
  std::istream& is_;
  std::string what_;
};

}  // namespace iuvd::le
