#include <algorithm>
#include <sstream>

#include "iuvd/error.hpp"
#include "iuvd/parallel.hpp"
#include "iuvd/pipeline.hpp"
#include "json.hpp"

#ifndef IUVD_BUILD_PROFILE
#define IUVD_BUILD_PROFILE "unknown"
#endif

namespace iuvd {

double complexity_ratio(int parts, int width, int height, int depth, int n) {
  const double m = static_cast<double>(parts) * width * height * depth;
  const double nn = static_cast<double>(n) * n * n;
  return m / nn;
}

TimingSummary summarize(std::vector<double> samples) {
  TimingSummary s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  s.min = samples.front();
  s.max = samples.back();
  s.median = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  return s;
}

BenchReport run_benchmark(const PreparedTemplate& prepared, OccupancyProvider& provider, const BenchConfig& config) {
  if (config.repeats < 1) throw ConfigError("repeats must be >= 1");
  BenchReport report;
  report.repeats = config.repeats;
  report.threads = thread_count();
  report.build_profile = IUVD_BUILD_PROFILE;
  report.provider = provider.name();
  report.parts = prepared.atlas.part_count();
  report.width = prepared.atlas.width;
  report.height = prepared.atlas.height;
  report.depth = config.pipeline.query.depth();
  report.xyz_n = config.pipeline.xyz_n;
  report.complexity_ratio = complexity_ratio(report.parts, report.width, report.height, report.depth, report.xyz_n);
  report.paper_complexity_ratio = complexity_ratio(24, 64, 64, 21, 257);

  std::unique_ptr<TriangleBvh> bvh;
  for (Representation rep : config.reps) {
    BenchRow row;
    row.rep = rep;
    try {
      if (is_xyz(rep) && !bvh) bvh = std::make_unique<TriangleBvh>(FlatMesh::from_template(prepared.model));
      std::vector<double> sdf, inference, extraction, query, total;
      for (int i = 0; i < config.repeats; ++i) {
        const RunResult r = run_representation(rep, prepared, provider, config.pipeline, bvh.get());
        sdf.push_back(r.stats.sdf_ms);
        inference.push_back(r.stats.inference_ms);
        extraction.push_back(r.stats.extraction_ms);
        query.push_back(r.stats.query_ms);
        total.push_back(r.stats.query_ms + r.stats.extraction_ms);
        if (i == 0) {
          row.inferred_points = r.stats.inferred_points;
          row.filled_points = r.stats.filled_points;
          row.mc_cells = r.stats.mc_cells;
        } else if (row.inferred_points != r.stats.inferred_points || row.mc_cells != r.stats.mc_cells) {
          row.counts_consistent = false;
        }
      }
      row.sdf_ms = summarize(sdf);
      row.inference_ms = summarize(inference);
      row.extraction_ms = summarize(extraction);
      row.query_and_infer_ms = summarize(query);
      row.total_ms = summarize(total);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

nlohmann::ordered_json timing_json(const TimingSummary& s) {
  return {{"median", s.median}, {"min", s.min}, {"max", s.max}};
}

}  // namespace

std::string bench_to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["environment"] = {{"threads", r.threads},
                      {"build_profile", r.build_profile},
                      {"repeats", r.repeats},
                      {"provider", r.provider}};
  j["dimensions"] = {{"parts", r.parts}, {"width", r.width}, {"height", r.height}, {"depth", r.depth},
                     {"xyz_n", r.xyz_n}};
  j["complexity_ratio"] = r.complexity_ratio;
  j["paper_complexity_ratio"] = r.paper_complexity_ratio;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const BenchRow& row : r.rows) {
    nlohmann::ordered_json o;
    o["representation"] = to_string(row.rep);
    if (!row.error.empty()) {
      o["error"] = row.error;
      rows.push_back(o);
      continue;
    }
    o["inferred_points"] = row.inferred_points;
    o["filled_points"] = row.filled_points;
    o["mc_cells"] = row.mc_cells;
    o["counts_consistent"] = row.counts_consistent;
    o["sdf_ms"] = timing_json(row.sdf_ms);
    o["inference_ms"] = timing_json(row.inference_ms);
    o["extraction_ms"] = timing_json(row.extraction_ms);
    o["query_and_infer_ms"] = timing_json(row.query_and_infer_ms);
    o["total_ms"] = timing_json(row.total_ms);
    rows.push_back(o);
  }
  return j.dump(2);
}

std::string bench_to_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "representation,inferred_points,filled_points,mc_cells,sdf_ms,inference_ms,extraction_ms,"
        "query_and_infer_ms,total_ms,total_min_ms,total_max_ms,error\n";
  for (const BenchRow& row : r.rows) {
    os << to_string(row.rep) << ',' << row.inferred_points << ',' << row.filled_points << ',' << row.mc_cells << ','
       << row.sdf_ms.median << ',' << row.inference_ms.median << ',' << row.extraction_ms.median << ','
       << row.query_and_infer_ms.median << ',' << row.total_ms.median << ',' << row.total_ms.min << ','
       << row.total_ms.max << ',';
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    os << err << '\n';
  }
  return os.str();
}

}  // namespace iuvd
