#include "iuvd/timing.hpp"

namespace iuvd {

void busy_wait_us(double microseconds) {
  if (microseconds <= 0.0) return;
  const auto until = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double, std::micro>(microseconds));
  while (std::chrono::steady_clock::now() < until) {
  }
}

}  // namespace iuvd
