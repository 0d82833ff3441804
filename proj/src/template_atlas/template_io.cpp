#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include "iuvd/error.hpp"
#include "iuvd/template_model.hpp"
#include "json.hpp"

namespace iuvd {
namespace {

struct Corner {
  int v = -1;
  int vt = -1;
  int vn = -1;
};

int resolve_index(long raw, std::size_t count, int line_no) {
  long idx = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
  if (raw == 0 || idx < 0 || idx >= static_cast<long>(count))
    throw ConfigError("OBJ line " + std::to_string(line_no) + ": index out of range");
  return static_cast<int>(idx);
}

Corner parse_corner(const std::string& token, std::size_t nv, std::size_t nvt, std::size_t nvn,
                    int line_no) {
  Corner c;
  std::size_t start = 0;
  for (int field = 0; field < 3; ++field) {
    const std::size_t slash = token.find('/', start);
    const std::string part = token.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (!part.empty()) {
      long raw = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), raw);
      if (ec != std::errc() || ptr != part.data() + part.size())
        throw ConfigError("OBJ line " + std::to_string(line_no) + ": bad face token '" + token + "'");
      if (field == 0) c.v = resolve_index(raw, nv, line_no);
      if (field == 1) c.vt = resolve_index(raw, nvt, line_no);
      if (field == 2) c.vn = resolve_index(raw, nvn, line_no);
    }
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  if (c.v < 0) throw ConfigError("OBJ line " + std::to_string(line_no) + ": face without vertex index");
  return c;
}

int part_from_group(const std::string& name, int line_no) {
  constexpr std::string_view kPrefix = "part_";
  if (name.rfind(kPrefix, 0) != 0)
    throw ConfigError("OBJ line " + std::to_string(line_no) + ": group '" + name +
                      "' is not of the form part_<k>");
  int k = -1;
  const char* first = name.data() + kPrefix.size();
  const auto [ptr, ec] = std::from_chars(first, name.data() + name.size(), k);
  if (ec != std::errc() || ptr != name.data() + name.size() || k < 0)
    throw ConfigError("OBJ line " + std::to_string(line_no) + ": bad part group '" + name + "'");
  return k;
}

struct RawFace {
  std::array<Corner, 3> corners;
};

}  // namespace

TemplateManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  TemplateManifest m;
  try {
    if (j.contains("parts")) m.parts = j.at("parts").get<std::vector<std::string>>();
    if (j.contains("passthrough")) m.passthrough = j.at("passthrough").get<std::vector<int>>();
    if (j.contains("camera")) {
      Camera cam;
      const auto& jc = j.at("camera");
      cam.scale = jc.value("scale", 1.0);
      if (jc.contains("translation")) {
        const auto t = jc.at("translation").get<std::vector<double>>();
        if (t.size() != 2) throw ConfigError("manifest camera translation needs 2 values");
        cam.translation = {t[0], t[1]};
      }
      cam.validate();
      m.camera = cam;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void save_manifest(const TemplateManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json j;
  j["parts"] = manifest.parts;
  j["passthrough"] = manifest.passthrough;
  if (manifest.camera) {
    j["camera"] = {{"scale", manifest.camera->scale},
                   {"translation", {manifest.camera->translation.x(), manifest.camera->translation.y()}}};
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest " + path.string());
  out << j.dump(2) << "\n";
}

TemplateManifest manifest_of(const TemplateModel& model) {
  TemplateManifest m;
  for (const auto& p : model.parts) m.parts.push_back(p.name);
  m.passthrough = model.passthrough_parts;
  m.camera = model.camera;
  return m;
}

TemplateModel load_template(const std::filesystem::path& obj_path, const TemplateManifest& manifest,
                            std::vector<std::string>* warnings) {
  std::ifstream in(obj_path);
  if (!in) throw ConfigError("cannot open template " + obj_path.string());

  std::vector<Vec3> positions;
  std::vector<Vec2> uvs;
  std::vector<Vec3> normals;
  std::map<int, std::vector<RawFace>> faces_by_part;
  int current_part = 0;
  bool saw_group = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw ConfigError("OBJ line " + std::to_string(line_no) + ": bad v");
      positions.push_back(p);
    } else if (tag == "vt") {
      Vec2 t;
      if (!(ls >> t.x() >> t.y())) throw ConfigError("OBJ line " + std::to_string(line_no) + ": bad vt");
      uvs.push_back(t);
    } else if (tag == "vn") {
      Vec3 n;
      if (!(ls >> n.x() >> n.y() >> n.z())) throw ConfigError("OBJ line " + std::to_string(line_no) + ": bad vn");
      normals.push_back(n);
    } else if (tag == "g") {
      std::string name;
      ls >> name;
      current_part = part_from_group(name, line_no);
      saw_group = true;
    } else if (tag == "f") {
      std::vector<Corner> poly;
      std::string tok;
      while (ls >> tok) poly.push_back(parse_corner(tok, positions.size(), uvs.size(), normals.size(), line_no));
      if (poly.size() < 3) throw ConfigError("OBJ line " + std::to_string(line_no) + ": face needs 3 corners");
      for (const auto& c : poly) {
        if (c.vt < 0) throw ConfigError("template lacks UV parameterization (OBJ line " + std::to_string(line_no) + ")");
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k)
        faces_by_part[current_part].push_back({{poly[0], poly[k], poly[k + 1]}});
    }
  }
  (void)saw_group;
  if (faces_by_part.empty()) throw ConfigError("template " + obj_path.string() + " has no faces");
  if (uvs.empty()) throw ConfigError("template lacks UV parameterization");

  const int part_count = faces_by_part.rbegin()->first + 1;
  if (static_cast<int>(faces_by_part.size()) != part_count)
    throw ConfigError("template part groups must be consecutive part_0..part_" + std::to_string(part_count - 1));

  TemplateModel model;
  model.parts.resize(part_count);
  for (auto& [k, raw] : faces_by_part) {
    PartMesh& part = model.parts[k];
    part.part_index = k;
    part.name = k < static_cast<int>(manifest.parts.size()) ? manifest.parts[k] : "part_" + std::to_string(k);
    const bool has_normals =
        std::all_of(raw.begin(), raw.end(), [](const RawFace& f) {
          return f.corners[0].vn >= 0 && f.corners[1].vn >= 0 && f.corners[2].vn >= 0;
        });
    std::map<std::pair<int, int>, int> local;
    for (const auto& f : raw) {
      Vec3i tri;
      std::array<Vec2, 3> tuv;
      for (int c = 0; c < 3; ++c) {
        const Corner& corner = f.corners[c];
        const std::pair<int, int> key{corner.v, has_normals ? corner.vn : -1};
        auto [it, inserted] = local.emplace(key, static_cast<int>(part.vertices.size()));
        if (inserted) {
          part.vertices.push_back(positions[corner.v]);
          part.normals.push_back(has_normals ? safe_normalized(normals[corner.vn]) : Vec3::Zero());
        }
        tri[c] = it->second;
        tuv[c] = uvs[corner.vt];
      }
      part.faces.push_back(tri);
      part.face_uv.push_back(tuv);
    }
    if (!has_normals) part.normals = area_weighted_normals(part.vertices, part.faces);
    const std::size_t nonmanifold = count_nonmanifold_edges(part);
    if (nonmanifold > 0 && warnings) {
      warnings->push_back("part " + std::to_string(k) + ": " + std::to_string(nonmanifold) +
                          " non-manifold edges (faces retained)");
    }
  }
  model.passthrough_parts = manifest.passthrough;
  std::sort(model.passthrough_parts.begin(), model.passthrough_parts.end());
  model.passthrough_parts.erase(std::unique(model.passthrough_parts.begin(), model.passthrough_parts.end()),
                                model.passthrough_parts.end());
  model.camera = manifest.camera;
  validate_template(model);
  check_uv_injective(model);
  return model;
}

void save_template(const TemplateModel& model, const std::filesystem::path& obj_path) {
  std::ofstream out(obj_path);
  if (!out) throw ConfigError("cannot write template " + obj_path.string());
  char buf[128];
  out << "# part-grouped template\n";
  std::size_t v_base = 1, vt_base = 1;
  for (const auto& part : model.parts) {
    out << "g part_" << part.part_index << "\n";
    for (const auto& v : part.vertices) {
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
      out << buf;
    }
    for (const auto& n : part.normals) {
      std::snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", n.x(), n.y(), n.z());
      out << buf;
    }
    for (const auto& tuv : part.face_uv) {
      for (const auto& t : tuv) {
        std::snprintf(buf, sizeof buf, "vt %.17g %.17g\n", t.x(), t.y());
        out << buf;
      }
    }
    for (std::size_t f = 0; f < part.faces.size(); ++f) {
      out << "f";
      for (int c = 0; c < 3; ++c) {
        const std::size_t vi = v_base + static_cast<std::size_t>(part.faces[f][c]);
        out << ' ' << vi << '/' << (vt_base + 3 * f + c) << '/' << vi;
      }
      out << "\n";
    }
    v_base += part.vertices.size();
    vt_base += 3 * part.faces.size();
  }
}

}  // namespace iuvd
