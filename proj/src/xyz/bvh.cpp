#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "iuvd/error.hpp"
#include "iuvd/xyz.hpp"

namespace iuvd {
namespace {

constexpr int kLeafSize = 4;

struct PositionLess {
  bool operator()(const Vec3& a, const Vec3& b) const {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  }
};

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

FlatMesh FlatMesh::from_template(const TemplateModel& model) {
  FlatMesh m;
  for (const PartMesh& part : model.parts) {
    const int base = static_cast<int>(m.positions.size());
    m.positions.insert(m.positions.end(), part.vertices.begin(), part.vertices.end());
    m.normals.insert(m.normals.end(), part.normals.begin(), part.normals.end());
    for (std::size_t f = 0; f < part.faces.size(); ++f) {
      m.faces.emplace_back(part.faces[f].array() + base);
      m.face_part.push_back(part.part_index);
      m.face_uv.push_back(part.face_uv[f]);
    }
  }
  return m;
}

FlatMesh FlatMesh::from_labeled(const LabeledMesh& mesh) {
  mesh.validate();
  FlatMesh m;
  m.positions = mesh.vertices;
  m.faces = mesh.faces;
  m.normals.assign(mesh.vertices.size(), Vec3::Zero());
  for (const auto& f : mesh.faces) {
    const Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]]).cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
    for (int k = 0; k < 3; ++k) m.normals[f[k]] += n;
    m.face_part.push_back(mesh.vertex_part[f[0]]);
    m.face_uv.push_back({Vec2::Zero(), Vec2::Zero(), Vec2::Zero()});
  }
  for (auto& n : m.normals) n = safe_normalized(n);
  return m;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, Vec3& bary) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    bary = {1, 0, 0};
    return a;
  }
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) {
    bary = {0, 1, 0};
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    bary = {1 - v, v, 0};
    return a + v * ab;
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) {
    bary = {0, 0, 1};
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    bary = {1 - w, 0, w};
    return a + w * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    bary = {0, 1 - w, w};
    return b + w * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  bary = {1 - v - w, v, w};
  return a + ab * v + ac * w;
}

TriangleBvh::TriangleBvh(FlatMesh mesh) : mesh_(std::move(mesh)) {
  if (mesh_.faces.empty()) throw Error("cannot build a BVH over an empty mesh");
  const std::size_t nf = mesh_.faces.size();
  if (mesh_.normals.size() != mesh_.positions.size()) throw Error("mesh normals do not match vertices");

  face_normal_.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& t = mesh_.faces[f];
    const Vec3& a = mesh_.positions[t[0]];
    face_normal_[f] = safe_normalized((mesh_.positions[t[1]] - a).cross(mesh_.positions[t[2]] - a), Vec3::Zero());
  }

  std::map<Vec3, int, PositionLess> ids;
  weld_.resize(mesh_.positions.size());
  for (std::size_t i = 0; i < mesh_.positions.size(); ++i)
    weld_[i] = ids.try_emplace(mesh_.positions[i], static_cast<int>(ids.size())).first->second;

  vertex_pseudo_.assign(ids.size(), Vec3::Zero());
  std::map<std::pair<int, int>, Vec3> edge_sum;
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& t = mesh_.faces[f];
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh_.positions[t[k]];
      const double angle =
          angle_between(mesh_.positions[t[(k + 1) % 3]] - p, mesh_.positions[t[(k + 2) % 3]] - p);
      vertex_pseudo_[weld_[t[k]]] += angle * face_normal_[f];
      const int a = weld_[t[k]], b = weld_[t[(k + 1) % 3]];
      edge_sum.try_emplace({std::min(a, b), std::max(a, b)}, Vec3::Zero()).first->second += face_normal_[f];
    }
  }
  edge_pseudo_.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& t = mesh_.faces[f];
    for (int k = 0; k < 3; ++k) {
      const int a = weld_[t[k]], b = weld_[t[(k + 1) % 3]];
      edge_pseudo_[f][k] = edge_sum.at({std::min(a, b), std::max(a, b)});
    }
  }

  order_.resize(nf);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * nf / kLeafSize + 1);
  build(0, static_cast<int>(nf));
}

int TriangleBvh::build(int first, int count) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Box3 box, centroids;
  for (int i = first; i < first + count; ++i) {
    const auto& t = mesh_.faces[order_[i]];
    Vec3 centroid = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
      box.extend(mesh_.positions[t[k]]);
      centroid += mesh_.positions[t[k]];
    }
    centroids.extend(Vec3(centroid / 3.0));
  }
  nodes_[id].box = box;
  if (count <= kLeafSize) {
    nodes_[id].first = first;
    nodes_[id].count = count;
    return id;
  }
  int axis = 0;
  centroids.sizes().maxCoeff(&axis);
  auto key = [&](int f) {
    const auto& t = mesh_.faces[f];
    return mesh_.positions[t[0]][axis] + mesh_.positions[t[1]][axis] + mesh_.positions[t[2]][axis];
  };
  const int half = count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + first + half, order_.begin() + first + count,
                   [&](int a, int b) {
                     const double ka = key(a), kb = key(b);
                     return ka < kb || (ka == kb && a < b);
                   });
  const int left = build(first, half);
  const int right = build(first + half, count - half);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

Box3 TriangleBvh::bounds() const { return nodes_.front().box; }

std::size_t TriangleBvh::max_leaf_size() const {
  std::size_t m = 0;
  for (const Node& n : nodes_)
    if (n.left < 0) m = std::max<std::size_t>(m, static_cast<std::size_t>(n.count));
  return m;
}

Vec3 TriangleBvh::pseudo_normal(int face, const Vec3& bary) const {
  const auto& t = mesh_.faces[face];
  const int zeros = (bary[0] == 0.0) + (bary[1] == 0.0) + (bary[2] == 0.0);
  if (zeros >= 2) {
    for (int k = 0; k < 3; ++k)
      if (bary[k] != 0.0) return vertex_pseudo_[weld_[t[k]]];
  }
  if (zeros == 1) {
    if (bary[2] == 0.0) return edge_pseudo_[face][0];
    if (bary[0] == 0.0) return edge_pseudo_[face][1];
    return edge_pseudo_[face][2];
  }
  return face_normal_[face];
}

NearestPoint TriangleBvh::nearest(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  int best_face = -1;
  Vec3 best_point = Vec3::Zero(), best_bary = Vec3::Zero();
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.box.squaredExteriorDistance(p) >= best) continue;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int f = order_[i];
        const auto& t = mesh_.faces[f];
        Vec3 bary;
        const Vec3 q = closest_point_on_triangle(p, mesh_.positions[t[0]], mesh_.positions[t[1]],
                                                 mesh_.positions[t[2]], bary);
        const double d2 = (p - q).squaredNorm();
        if (d2 < best || (d2 == best && f < best_face)) {
          best = d2;
          best_face = f;
          best_point = q;
          best_bary = bary;
        }
      }
      continue;
    }
    const double dl = nodes_[node.left].box.squaredExteriorDistance(p);
    const double dr = nodes_[node.right].box.squaredExteriorDistance(p);
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }

  NearestPoint r;
  r.face = best_face;
  r.point = best_point;
  r.barycentric = best_bary;
  r.distance = std::sqrt(best);
  const auto& t = mesh_.faces[best_face];
  const Vec3 n = best_bary[0] * mesh_.normals[t[0]] + best_bary[1] * mesh_.normals[t[1]] +
                 best_bary[2] * mesh_.normals[t[2]];
  r.normal = safe_normalized(n, face_normal_[best_face]);
  if (r.distance == 0.0) {
    r.sdf = 0.0;
  } else {
    const bool inside = (p - best_point).dot(pseudo_normal(best_face, best_bary)) < 0.0;
    r.sdf = inside ? -r.distance : r.distance;
  }
  return r;
}

}  // namespace iuvd
