#include <fstream>

#include "iuvd/binary_io.hpp"
#include "iuvd/error.hpp"
#include "iuvd/query.hpp"
#include "json.hpp"

namespace iuvd {

std::string stats_to_json(const QueryStats& s, int indent) {
  nlohmann::ordered_json j;
  j["inferred_points"] = s.inferred_points;
  j["filled_points"] = s.filled_points;
  j["total_points"] = s.total_points();
  j["rounds"] = s.rounds;
  j["mc_cells"] = s.mc_cells;
  j["sdf_ms"] = s.sdf_ms;
  j["inference_ms"] = s.inference_ms;
  j["query_ms"] = s.query_ms;
  j["extraction_ms"] = s.extraction_ms;
  return j.dump(indent);
}

void save_stats(const QueryStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write stats " + path.string());
  out << stats_to_json(stats) << '\n';
}

void save_volume(const IuvdVolume& vol, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write volume " + path.string());
  le::Writer w(out);
  w.magic("IUVD");
  w.u32(static_cast<std::uint32_t>(vol.part_count()));
  w.u32(static_cast<std::uint32_t>(vol.width));
  w.u32(static_cast<std::uint32_t>(vol.height));
  w.u32(static_cast<std::uint32_t>(vol.depth));
  w.f32(static_cast<float>(vol.alpha));
  w.i32(vol.d_min);
  for (const auto& g : vol.grids)
    for (float f : g) w.f32(f);
  w.flush();
  if (!out) throw ConfigError("failed writing volume " + path.string());
}

IuvdVolume load_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open volume " + path.string());
  le::Reader r(in, "volume " + path.string());
  r.expect_magic("IUVD");
  IuvdVolume vol;
  const std::uint32_t parts = r.u32();
  vol.width = static_cast<int>(r.u32());
  vol.height = static_cast<int>(r.u32());
  vol.depth = static_cast<int>(r.u32());
  vol.alpha = r.f32();
  vol.d_min = r.i32();
  if (parts == 0 || parts > 4096 || vol.width < 1 || vol.height < 1 || vol.depth < 2 || vol.width > 1 << 14 ||
      vol.height > 1 << 14 || vol.depth > 1 << 12)
    throw ConfigError("volume " + path.string() + ": implausible header");
  const std::size_t n = static_cast<std::size_t>(vol.width) * vol.height * vol.depth;
  vol.grids.assign(parts, std::vector<float>(n));
  for (auto& g : vol.grids)
    for (float& f : g) f = r.f32();
  return vol;
}

}  // namespace iuvd
