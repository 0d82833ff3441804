#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "iuvd/binary_io.hpp"
#include "iuvd/error.hpp"
#include "iuvd/surface.hpp"

namespace iuvd {
namespace {

std::string lower_ext(const std::filesystem::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e;
}

LabeledMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh " + path.string());
  LabeledMesh mesh;
  std::vector<int> face_part;
  int group = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "g" || tag == "o") {
      std::string name;
      ls >> name;
      group = name.rfind("part_", 0) == 0 ? std::stoi(name.substr(5)) : -1;
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const int i = std::stoi(tok.substr(0, tok.find('/')));
        idx.push_back(i < 0 ? static_cast<int>(mesh.vertices.size()) + i : i - 1);
      }
      if (idx.size() < 3) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": short face");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        mesh.faces.emplace_back(idx[0], idx[k], idx[k + 1]);
        face_part.push_back(group);
      }
    }
  }
  mesh.vertex_part.assign(mesh.vertices.size(), -1);
  mesh.provenance.assign(mesh.vertices.size(), Provenance::kReconstructed);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.faces[f][k];
      if (v < 0 || v >= static_cast<int>(mesh.vertices.size()))
        throw ConfigError(path.string() + ": face references a missing vertex");
      mesh.vertex_part[v] = face_part[f];
    }
  return mesh;
}

struct PlyProperty {
  std::string name, type, count_type;
  bool list = false;
};

std::size_t ply_size(const std::string& t) {
  static const std::map<std::string, std::size_t> sizes = {
      {"char", 1},  {"uchar", 1}, {"int8", 1},   {"uint8", 1},   {"short", 2},  {"ushort", 2},
      {"int16", 2}, {"uint16", 2}, {"int", 4},   {"uint", 4},    {"int32", 4},  {"uint32", 4},
      {"float", 4}, {"float32", 4}, {"double", 8}, {"float64", 8}};
  const auto it = sizes.find(t);
  if (it == sizes.end()) throw ConfigError("unsupported PLY type " + t);
  return it->second;
}

double ply_read(std::istream& in, const std::string& t, const std::string& what) {
  unsigned char b[8];
  const std::size_t n = ply_size(t);
  in.read(reinterpret_cast<char*>(b), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw ConfigError(what + ": truncated PLY body");
  std::uint64_t raw = 0;
  for (std::size_t i = 0; i < n; ++i) raw |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  if (t == "char" || t == "int8") return static_cast<std::int8_t>(raw);
  if (t == "uchar" || t == "uint8") return static_cast<std::uint8_t>(raw);
  if (t == "short" || t == "int16") return static_cast<std::int16_t>(raw);
  if (t == "ushort" || t == "uint16") return static_cast<std::uint16_t>(raw);
  if (t == "int" || t == "int32") return static_cast<std::int32_t>(raw);
  if (t == "uint" || t == "uint32") return static_cast<std::uint32_t>(raw);
  if (t == "float" || t == "float32") return std::bit_cast<float>(static_cast<std::uint32_t>(raw));
  return std::bit_cast<double>(raw);
}

LabeledMesh load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open mesh " + path.string());
  const std::string what = path.string();
  std::string line;
  std::getline(in, line);
  if (line != "ply") throw ConfigError(what + ": not a PLY file");
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> props;
  };
  std::vector<Element> elements;
  bool binary_le = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      binary_le = fmt == "binary_little_endian";
    } else if (tag == "element") {
      Element e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw ConfigError(what + ": property before element");
      PlyProperty p;
      std::string type;
      ls >> type;
      if (type == "list") {
        p.list = true;
        ls >> p.count_type >> p.type >> p.name;
      } else {
        p.type = type;
        ls >> p.name;
      }
      elements.back().props.push_back(p);
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!binary_le) throw ConfigError(what + ": only binary_little_endian PLY is supported");
  LabeledMesh mesh;
  for (const Element& e : elements) {
    for (std::size_t i = 0; i < e.count; ++i) {
      if (e.name == "vertex") {
        Vec3 p = Vec3::Zero();
        int part = -1;
        auto prov = Provenance::kReconstructed;
        for (const auto& prop : e.props) {
          if (prop.list) throw ConfigError(what + ": list property on vertices");
          const double x = ply_read(in, prop.type, what);
          if (prop.name == "x") p.x() = x;
          if (prop.name == "y") p.y() = x;
          if (prop.name == "z") p.z() = x;
          if (prop.name == "part") part = static_cast<int>(x);
          if (prop.name == "provenance") prov = x != 0 ? Provenance::kPassthrough : Provenance::kReconstructed;
        }
        mesh.vertices.push_back(p);
        mesh.vertex_part.push_back(part);
        mesh.provenance.push_back(prov);
      } else {
        for (const auto& prop : e.props) {
          if (!prop.list) {
            ply_read(in, prop.type, what);
            continue;
          }
          const auto n = static_cast<std::size_t>(ply_read(in, prop.count_type, what));
          std::vector<int> idx(n);
          for (auto& k : idx) k = static_cast<int>(ply_read(in, prop.type, what));
          if (e.name == "face" && (prop.name == "vertex_indices" || prop.name == "vertex_index")) {
            if (n < 3) throw ConfigError(what + ": short face");
            for (std::size_t k = 1; k + 1 < n; ++k) mesh.faces.emplace_back(idx[0], idx[k], idx[k + 1]);
          }
        }
      }
    }
  }
  try {
    mesh.validate();
  } catch (const Error& e) {
    throw ConfigError(what + ": " + e.what());
  }
  return mesh;
}

}  // namespace

void save_obj(const LabeledMesh& mesh, const std::filesystem::path& path) {
  mesh.validate();
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw ConfigError("cannot write mesh " + path.string());
  for (const Vec3& v : mesh.vertices) std::fprintf(f, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
  // faces grouped by the label of their first corner, in ascending label order
  for (int part : mesh.parts()) {
    if (part >= 0) std::fprintf(f, "g part_%d\n", part);
    else std::fprintf(f, "g unlabeled\n");
    for (const auto& t : mesh.faces)
      if (mesh.vertex_part[t[0]] == part) std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
  }
  const bool ok = std::ferror(f) == 0;
  std::fclose(f);
  if (!ok) throw ConfigError("failed writing mesh " + path.string());
}

void save_ply(const LabeledMesh& mesh, const std::filesystem::path& path) {
  mesh.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write mesh " + path.string());
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "property int part\nproperty uchar provenance\n"
      << "element face " << mesh.faces.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  std::vector<std::uint8_t> buf;
  auto put_f64 = [&buf](double x) {
    const auto raw = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(raw >> (8 * i)));
  };
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    for (int k = 0; k < 3; ++k) put_f64(mesh.vertices[i][k]);
    le::put_i32(buf, mesh.vertex_part[i]);
    buf.push_back(static_cast<std::uint8_t>(mesh.provenance[i]));
  }
  for (const auto& t : mesh.faces) {
    buf.push_back(3);
    for (int k = 0; k < 3; ++k) le::put_i32(buf, t[k]);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ConfigError("failed writing mesh " + path.string());
}

void save_mesh(const LabeledMesh& mesh, const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".ply") return save_ply(mesh, path);
  if (ext == ".obj") return save_obj(mesh, path);
  throw ConfigError("unknown mesh extension '" + ext + "' (expected .obj or .ply)");
}

LabeledMesh load_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".ply") return load_ply(path);
  if (ext == ".obj") return load_obj(path);
  throw ConfigError("unknown mesh extension '" + ext + "' (expected .obj or .ply)");
}

}  // namespace iuvd
