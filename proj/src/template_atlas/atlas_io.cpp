#include <fstream>

#include "iuvd/atlas.hpp"
#include "iuvd/binary_io.hpp"
#include "iuvd/error.hpp"

namespace iuvd {

void save_atlas(const AtlasMaps& atlas, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write atlas " + path.string());
  le::Writer w(out);
  w.magic("IUVA");
  w.u32(static_cast<std::uint32_t>(atlas.part_count()));
  w.u32(static_cast<std::uint32_t>(atlas.width));
  w.u32(static_cast<std::uint32_t>(atlas.height));
  for (const auto& pa : atlas.parts) {
    for (const auto& p : pa.source_points)
      for (int k = 0; k < 3; ++k) w.f32(p[k]);
    for (const auto& n : pa.normals)
      for (int k = 0; k < 3; ++k) w.f32(n[k]);
    for (auto m : pa.mask) w.u8(m);
    for (auto m : pa.mask_original) w.u8(m);
    for (auto m : pa.visible) w.u8(m);
  }
  w.flush();
  if (!out) throw ConfigError("failed writing atlas " + path.string());
}

AtlasMaps load_atlas(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open atlas " + path.string());
  le::Reader r(in, "atlas " + path.string());
  r.expect_magic("IUVA");
  AtlasMaps atlas;
  const std::uint32_t parts = r.u32();
  atlas.width = static_cast<int>(r.u32());
  atlas.height = static_cast<int>(r.u32());
  if (parts == 0 || parts > 4096 || atlas.width < 1 || atlas.height < 1 || atlas.width > 1 << 14 ||
      atlas.height > 1 << 14)
    throw ConfigError("atlas " + path.string() + ": implausible header");
  const std::size_t n = atlas.texel_count();
  atlas.parts.resize(parts);
  for (auto& pa : atlas.parts) {
    pa.source_points.resize(n);
    pa.normals.resize(n);
    for (auto& p : pa.source_points)
      for (int k = 0; k < 3; ++k) p[k] = r.f32();
    for (auto& nn : pa.normals)
      for (int k = 0; k < 3; ++k) nn[k] = r.f32();
    pa.mask.resize(n);
    pa.mask_original.resize(n);
    pa.visible.resize(n);
    for (auto& m : pa.mask) m = r.u8();
    for (auto& m : pa.mask_original) m = r.u8();
    for (auto& m : pa.visible) m = r.u8();
    pa.face.assign(n, -1);
  }
  for (int i = 0; i < atlas.part_count(); ++i) atlas.parts[i].orientation = chart_orientation(atlas, i);
  return atlas;
}

}  // namespace iuvd
