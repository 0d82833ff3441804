#include <algorithm>
#include <array>
#include <string>

#include "iuvd/error.hpp"
#include "iuvd/query.hpp"

namespace iuvd {
namespace {

enum : std::uint8_t { kUnknown = 0, kFilled = 1, kInferred = 2 };

struct Cell {
  std::array<int, 3> lo;
};

// Coordinates of the stride-s lattice inside [a, b], b included.
template <typename F>
void for_lattice(int a, int b, int s, F&& f) {
  for (int x = a; x < b; x += s) f(x);
  f(b);
}

}  // namespace

OctreeResult octree_fill(const GridShape& shape, int levels, const std::vector<std::uint8_t>* mask,
                         const OctreeEvaluator& evaluate, std::vector<float>& values) {
  if (levels < 1) throw ConfigError("octree levels must be >= 1");
  const int coarse = 1 << (levels - 1);
  const std::array<int, 3> n{shape.n0, shape.n1, shape.n2};
  for (int a = 0; a < 3; ++a) {
    if (n[a] < coarse + 1)
      throw ConfigError("grid axis of length " + std::to_string(n[a]) + " is too short for " +
                        std::to_string(levels) + " octree levels");
  }
  if (mask && mask->size() != shape.size()) throw Error("octree mask has the wrong size");

  const std::size_t total = shape.size();
  values.assign(total, kOccupancyOutside);
  std::vector<std::uint8_t> state(total, kUnknown);
  std::vector<std::uint8_t> queued(total, 0);
  auto masked = [&](std::size_t i) { return !mask || (*mask)[i]; };
  auto upper = [&](const Cell& c, int axis, int s) { return std::min(c.lo[axis] + s, n[axis] - 1); };

  OctreeResult result;
  std::vector<std::size_t> pending;
  std::vector<float> out;
  auto infer_pending = [&] {
    std::sort(pending.begin(), pending.end());
    out.resize(pending.size());
    if (!pending.empty()) evaluate(pending, out);
    for (std::size_t j = 0; j < pending.size(); ++j) {
      values[pending[j]] = out[j];
      state[pending[j]] = kInferred;
      queued[pending[j]] = 0;
    }
    result.inferred += pending.size();
    result.inferred_per_level.push_back(pending.size());
    pending.clear();
  };

  std::vector<Cell> active;
  for_lattice(0, n[2] - 1, coarse, [&](int z) {
    for_lattice(0, n[1] - 1, coarse, [&](int y) {
      for_lattice(0, n[0] - 1, coarse, [&](int x) {
        const std::size_t i = shape.index(x, y, z);
        if (masked(i)) pending.push_back(i);
        if (x < n[0] - 1 && y < n[1] - 1 && z < n[2] - 1) active.push_back({{x, y, z}});
      });
    });
  });
  infer_pending();

  for (int s = coarse; s >= 2; s /= 2) {
    const int h = s / 2;
    std::vector<Cell> refined;
    for (const Cell& c : active) {
      const std::array<int, 3> lo = c.lo;
      const std::array<int, 3> hi{upper(c, 0, s), upper(c, 1, s), upper(c, 2, s)};
      int inside = 0, outside = 0;
      for (int corner = 0; corner < 8; ++corner) {
        const std::size_t i = shape.index(corner & 1 ? hi[0] : lo[0], corner & 2 ? hi[1] : lo[1],
                                          corner & 4 ? hi[2] : lo[2]);
        if (!masked(i)) continue;
        (is_inside(values[i]) ? inside : outside)++;
      }
      bool boundary = inside > 0 && outside > 0;
      if (!boundary && inside + outside == 0) {
        for (int z = lo[2]; z <= hi[2] && !boundary; ++z)
          for (int y = lo[1]; y <= hi[1] && !boundary; ++y)
            for (int x = lo[0]; x <= hi[0] && !boundary; ++x) boundary = masked(shape.index(x, y, z));
        if (!boundary) continue;
      }
      if (!boundary) {
        const float fill = inside > 0 ? kOccupancyInside : kOccupancyOutside;
        for (int z = lo[2]; z <= hi[2]; ++z)
          for (int y = lo[1]; y <= hi[1]; ++y)
            for (int x = lo[0]; x <= hi[0]; ++x) {
              const std::size_t i = shape.index(x, y, z);
              if (masked(i) && state[i] == kUnknown) {
                values[i] = fill;
                state[i] = kFilled;
              }
            }
        continue;
      }
      for_lattice(lo[2], hi[2], h, [&](int z) {
        for_lattice(lo[1], hi[1], h, [&](int y) {
          for_lattice(lo[0], hi[0], h, [&](int x) {
            const std::size_t i = shape.index(x, y, z);
            if (masked(i) && state[i] != kInferred && !queued[i]) {
              queued[i] = 1;
              pending.push_back(i);
            }
            if (x < hi[0] && y < hi[1] && z < hi[2]) refined.push_back({{x, y, z}});
          });
        });
      });
    }
    infer_pending();
    active = std::move(refined);
  }

  for (std::size_t i = 0; i < total; ++i) {
    if (!masked(i)) {
      values[i] = kOccupancyOutside;
      continue;
    }
    if (state[i] == kUnknown) throw Error("octree left a masked point undetermined");
    if (state[i] == kFilled) ++result.filled;
  }
  return result;
}

}  // namespace iuvd
