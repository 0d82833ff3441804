#include <algorithm>
#include <set>
#include <string>

#include "iuvd/error.hpp"
#include "iuvd/surface.hpp"

namespace iuvd {

std::vector<int> LabeledMesh::parts() const {
  std::set<int> s;
  for (const auto& f : faces) s.insert(vertex_part[f[0]]);
  return {s.begin(), s.end()};
}

LabeledMesh LabeledMesh::submesh(int part) const {
  LabeledMesh out;
  std::vector<int> remap(vertices.size(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertex_part[i] != part) continue;
    remap[i] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(vertices[i]);
    out.vertex_part.push_back(part);
    out.provenance.push_back(provenance[i]);
  }
  for (const auto& f : faces) {
    if (vertex_part[f[0]] != part) continue;
    const Vec3i g(remap[f[0]], remap[f[1]], remap[f[2]]);
    if (g.minCoeff() < 0) throw Error("face straddles parts " + std::to_string(part));
    out.faces.push_back(g);
  }
  return out;
}

void LabeledMesh::append(const LabeledMesh& other) {
  const int base = static_cast<int>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  vertex_part.insert(vertex_part.end(), other.vertex_part.begin(), other.vertex_part.end());
  provenance.insert(provenance.end(), other.provenance.begin(), other.provenance.end());
  for (const auto& f : other.faces) faces.emplace_back(f.array() + base);
}

void LabeledMesh::validate() const {
  if (vertex_part.size() != vertices.size() || provenance.size() != vertices.size())
    throw Error("mesh attribute arrays do not match the vertex count");
  const int n = static_cast<int>(vertices.size());
  for (const auto& f : faces)
    if (f.minCoeff() < 0 || f.maxCoeff() >= n) throw Error("mesh face references a missing vertex");
}

LabeledMesh template_part_mesh(const TemplateModel& model, int part) {
  if (part < 0 || part >= model.part_count()) throw Error("template has no part " + std::to_string(part));
  const PartMesh& pm = model.parts[part];
  LabeledMesh out;
  out.vertices = pm.vertices;
  out.faces = pm.faces;
  out.vertex_part.assign(pm.vertices.size(), part);
  out.provenance.assign(pm.vertices.size(), Provenance::kPassthrough);
  return out;
}

LabeledMesh merge_parts(std::span<const LabeledMesh> parts, const TemplateModel& model) {
  LabeledMesh out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const int part = static_cast<int>(i);
    if (model.is_passthrough(part)) {
      out.append(template_part_mesh(model, part));
    } else {
      out.append(parts[i]);
    }
  }
  return out;
}

LabeledMesh swap_part(const LabeledMesh& mesh_a, const LabeledMesh& mesh_b, int part) {
  const auto parts_a = mesh_a.parts();
  const auto parts_b = mesh_b.parts();
  auto has = [part](const std::vector<int>& v) { return std::binary_search(v.begin(), v.end(), part); };
  if (!has(parts_a)) throw Error("first mesh has no part " + std::to_string(part));
  if (!has(parts_b)) throw Error("second mesh has no part " + std::to_string(part));
  LabeledMesh out;
  for (int p : parts_a) out.append(p == part ? mesh_b.submesh(p) : mesh_a.submesh(p));
  return out;
}

}  // namespace iuvd
