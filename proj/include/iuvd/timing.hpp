#pragma once

#include <chrono>

namespace iuvd {

// Monotonic stopwatch reporting milliseconds.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  void reset() { start_ = std::chrono::steady_clock::now(); }
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Adds the lifetime of the guard to an accumulator.
class ScopedTimer {
 public:
  explicit ScopedTimer(double& accumulator_ms) : acc_(accumulator_ms) {}
  ~ScopedTimer() { acc_ += watch_.elapsed_ms(); }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  double& acc_;
  Stopwatch watch_;
};

// Spins for the given number of microseconds. Used to emulate a fixed
// per-query inference cost.
void busy_wait_us(double microseconds);

}  // namespace iuvd
