#include <cerrno>
#include <csignal>
#include <cstring>
#include <iostream>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "iuvd/binary_io.hpp"
#include "iuvd/error.hpp"
#include "iuvd/wire.hpp"

namespace iuvd {
namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

bool write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::write(fd, data, n);
    if (w < 0 && errno == EINTR) continue;
    if (w <= 0) return false;
    data += w;
    n -= static_cast<std::size_t>(w);
  }
  return true;
}

enum class ReadResult { kOk, kEof, kShort };

// kEof only when nothing was read.
ReadResult read_all(int fd, std::uint8_t* data, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::read(fd, data + got, n - got);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) return got == 0 ? ReadResult::kEof : ReadResult::kShort;
    got += static_cast<std::size_t>(r);
  }
  return ReadResult::kOk;
}

std::pair<std::string, std::string> split_host_port(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon + 1 == addr.size())
    throw ConfigError("expected host:port, got '" + addr + "'");
  std::string host = addr.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return {host, addr.substr(colon + 1)};
}

int connect_tcp(const std::string& addr) {
  const auto [host, port] = split_host_port(addr);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw TransportError("cannot resolve " + addr + ": " + gai_strerror(rc), 0);
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw TransportError("cannot connect to " + addr + ": " + std::strerror(errno), 0);
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

}  // namespace

ExternalProvider::ExternalProvider(std::string endpoint, int read_fd, int write_fd, int child_pid)
    : endpoint_(std::move(endpoint)), read_fd_(read_fd), write_fd_(write_fd), child_pid_(child_pid) {}

std::unique_ptr<ExternalProvider> ExternalProvider::connect(const std::string& endpoint) {
  ignore_sigpipe();
  if (endpoint.rfind("tcp:", 0) == 0) {
    const int fd = connect_tcp(endpoint.substr(4));
    return std::unique_ptr<ExternalProvider>(new ExternalProvider(endpoint, fd, fd, -1));
  }
  if (endpoint.rfind("exec:", 0) == 0) {
    const std::string cmd = endpoint.substr(5);
    if (cmd.empty()) throw ConfigError("exec provider needs a command");
    int to_child[2], from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) throw TransportError("pipe failed", 0);
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw TransportError("pipe failed", 0);
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw TransportError("fork failed", 0);
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::unique_ptr<ExternalProvider>(new ExternalProvider(endpoint, from_child[0], to_child[1], pid));
  }
  throw ConfigError("unknown external endpoint '" + endpoint + "' (expected exec:<cmd> or tcp:<host:port>)");
}

ExternalProvider::~ExternalProvider() { close_stream(); }

void ExternalProvider::close_stream() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  read_fd_ = write_fd_ = -1;
  if (child_pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(child_pid_, &status, WNOHANG) != 0) {
        child_pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(child_pid_, SIGTERM);
    ::waitpid(child_pid_, &status, 0);
    child_pid_ = -1;
  }
}

void ExternalProvider::evaluate(const QueryBatchView& batch, std::span<float> out) {
  if (batch.features.empty()) throw Error("empty query batch");
  if (read_fd_ < 0) throw TransportError("connection to " + endpoint_ + " is closed", frames_);
  const auto request = wire::encode_request(batch.features);
  if (!write_all(write_fd_, request.data(), request.size())) {
    close_stream();
    throw TransportError("write to " + endpoint_ + " failed", frames_);
  }
  std::vector<std::uint8_t> response(4);
  if (read_all(read_fd_, response.data(), 4) != ReadResult::kOk) {
    close_stream();
    throw TransportError("no response from " + endpoint_, frames_);
  }
  const std::uint32_t n = le::get_u32(response.data());
  if (n != batch.features.size()) {
    close_stream();
    throw ProtocolError("response count " + std::to_string(n) + " does not match request count " +
                        std::to_string(batch.features.size()));
  }
  response.resize(4 + static_cast<std::size_t>(n) * 4);
  if (read_all(read_fd_, response.data() + 4, response.size() - 4) != ReadResult::kOk) {
    close_stream();
    throw TransportError("truncated response from " + endpoint_, frames_);
  }
  std::vector<float> values;
  try {
    values = wire::decode_response(response, n);
  } catch (const ProtocolError&) {
    close_stream();
    throw;
  }
  std::copy(values.begin(), values.end(), out.begin());
  ++frames_;
}

std::uint64_t serve_stream(OccupancyProvider& provider, int in_fd, int out_fd) {
  if (provider.input() != ProviderInput::kFeatures || provider.needs_coords())
    throw ConfigError("provider " + provider.name() + " cannot be served: it needs more than feature vectors");
  ignore_sigpipe();
  std::uint64_t frames = 0;
  std::vector<std::uint8_t> frame;
  for (;;) {
    frame.resize(4);
    const ReadResult head = read_all(in_fd, frame.data(), 4);
    if (head == ReadResult::kEof) return frames;
    if (head == ReadResult::kShort) throw ProtocolError("short request header");
    const std::uint32_t n = le::get_u32(frame.data());
    if (n == 0 || n > wire::kMaxFrameCount) throw ProtocolError("bad request count " + std::to_string(n));
    frame.resize(4 + static_cast<std::size_t>(n) * 28);
    if (read_all(in_fd, frame.data() + 4, frame.size() - 4) != ReadResult::kOk)
      throw ProtocolError("truncated request body");
    const auto features = wire::decode_request(frame);
    QueryBatchView batch;
    batch.features = features;
    const auto values = evaluate_batch(provider, batch);
    const auto response = wire::encode_response(values);
    if (!write_all(out_fd, response.data(), response.size())) return frames;
    ++frames;
  }
}

void serve_tcp(OccupancyProvider& provider, const std::string& host, int port, std::size_t max_connections,
               const std::function<void(int)>& on_listening) {
  ignore_sigpipe();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), port_str.c_str(), &hints, &res); rc != 0)
    throw ConfigError("cannot resolve " + host + ": " + gai_strerror(rc));
  int listener = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    listener = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (listener < 0) continue;
    const int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listener, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(listener, 8) == 0) break;
    ::close(listener);
    listener = -1;
  }
  ::freeaddrinfo(res);
  if (listener < 0) throw ConfigError("cannot listen on " + host + ":" + port_str + ": " + std::strerror(errno));

  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&bound), &len);
  const int actual = bound.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
                                                 : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  if (on_listening) on_listening(actual);

  for (std::size_t served = 0; max_connections == 0 || served < max_connections; ++served) {
    const int fd = ::accept4(listener, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR) continue;
      ::close(listener);
      throw Error(std::string("accept failed: ") + std::strerror(errno));
    }
    try {
      serve_stream(provider, fd, fd);
    } catch (const ProtocolError& e) {
      std::cerr << "serve: " << e.what() << ", closing connection\n";
    }
    ::close(fd);
  }
  ::close(listener);
}

}  // namespace iuvd
