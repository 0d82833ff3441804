#include <cmath>
#include <string>

#include "iuvd/error.hpp"
#include "iuvd/occupancy.hpp"
#include "iuvd/parallel.hpp"

namespace iuvd {
namespace {

void check_batch(const OccupancyProvider& provider, const QueryBatchView& batch, std::size_t out_size) {
  const std::size_t n = batch.size();
  if (n == 0) throw Error("empty query batch");
  if (out_size != n) throw Error("output span does not match batch size");
  auto consistent = [n](std::size_t m) { return m == 0 || m == n; };
  if (!consistent(batch.points.size()) || !consistent(batch.features.size()) ||
      !consistent(batch.coords.size()))
    throw Error("query batch spans differ in length");
  if (provider.input() == ProviderInput::kPoints && batch.points.size() != n)
    throw Error("provider " + provider.name() + " expects points");
  if (provider.input() == ProviderInput::kFeatures && batch.features.size() != n)
    throw Error("provider " + provider.name() + " expects feature vectors");
  if (provider.needs_coords() && batch.coords.size() != n)
    throw Error("provider " + provider.name() + " expects surface coordinates");
}

void check_output(const OccupancyProvider& provider, std::span<const float> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (std::isnan(out[i]))
      throw Error("provider " + provider.name() + " returned NaN at index " + std::to_string(i));
    if (out[i] < 0.0f || out[i] > 1.0f)
      throw Error("provider " + provider.name() + " returned " + std::to_string(out[i]) +
                  " outside [0,1] at index " + std::to_string(i));
  }
}

QueryBatchView slice(const QueryBatchView& b, std::size_t begin, std::size_t end) {
  QueryBatchView s;
  if (!b.points.empty()) s.points = b.points.subspan(begin, end - begin);
  if (!b.features.empty()) s.features = b.features.subspan(begin, end - begin);
  if (!b.coords.empty()) s.coords = b.coords.subspan(begin, end - begin);
  return s;
}

}  // namespace

void evaluate_batch(OccupancyProvider& provider, const QueryBatchView& batch, std::span<float> out) {
  check_batch(provider, batch, out.size());
  provider.evaluate(batch, out);
  check_output(provider, out);
}

std::vector<float> evaluate_batch(OccupancyProvider& provider, const QueryBatchView& batch) {
  std::vector<float> out(batch.size());
  evaluate_batch(provider, batch, out);
  return out;
}

void evaluate_chunked(OccupancyProvider& provider, const QueryBatchView& batch, std::span<float> out,
                      std::size_t chunk) {
  const std::size_t n = batch.size();
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  auto run = [&](std::size_t c) {
    const std::size_t begin = c * chunk, end = std::min(n, begin + chunk);
    evaluate_batch(provider, slice(batch, begin, end), out.subspan(begin, end - begin));
  };
  if (provider.concurrent() && chunks > 1) {
    parallel_for(chunks, run, 1);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
  }
}

}  // namespace iuvd
