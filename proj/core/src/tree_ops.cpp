#include "woldlab/tree_ops.hpp"

#include <algorithm>
#include <string>

#include "woldlab/error.hpp"

namespace woldlab {

namespace {

void check_cap(std::size_t size, std::size_t cap) {
  if (size > cap) {
    throw ResourceLimitError("vertex set of size " + std::to_string(size) + " exceeds cap " +
                             std::to_string(cap));
  }
}

}  // namespace

VertexSet children_of_set(const TreeKernel& kernel, const VertexSet& s, std::size_t cap) {
  VertexSet out;
  for (const auto& v : s) {
    kernel.children_into(v, out);
    check_cap(out.size(), cap);
  }
  // Children lists of distinct parents are disjoint, so sorting suffices.
  normalize(out);
  return out;
}

VertexSet child_n(const TreeKernel& kernel, const Vertex& v, std::size_t n, std::size_t cap) {
  VertexSet cur{v};
  for (std::size_t i = 0; i < n; ++i) cur = children_of_set(kernel, cur, cap);
  return cur;
}

Vertex par_n(const TreeKernel& kernel, Vertex v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v = kernel.parent(v);
  return v;
}

VertexSet enum_A(const TreeKernel& kernel, const Vertex& v, std::size_t n, std::size_t cap) {
  if (n == 0) return {v};
  const Vertex below = par_n(kernel, v, n - 1);
  const Vertex top = kernel.parent(below);
  VertexSet shell = kernel.children(top);
  normalize(shell);
  shell.erase(std::remove(shell.begin(), shell.end(), below), shell.end());
  for (std::size_t i = 1; i < n && !shell.empty(); ++i) shell = children_of_set(kernel, shell, cap);
  return shell;
}

GenerationMatch same_generation(const TreeKernel& kernel, const Vertex& u, const Vertex& v,
                                std::size_t n_max) {
  Vertex a = u;
  Vertex b = v;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (a == b) return GenerationMatch::yes(n, n_max);
    if (n == n_max) break;
    a = kernel.parent(a);
    b = kernel.parent(b);
  }
  return GenerationMatch::no_up_to(n_max);
}

const Vertex& PathSegment::at(std::int64_t m) const {
  if (!covers(m)) {
    throw OutOfRegionError("path index " + std::to_string(m) + " outside [" +
                           std::to_string(m_lo) + ", " + std::to_string(m_hi()) + "]");
  }
  return vertices[static_cast<std::size_t>(m - m_lo)];
}

PathSegment bilateral_path(const TreeKernel& kernel, const Vertex& v0, std::int64_t m_lo,
                           std::int64_t m_hi) {
  if (m_lo > 0 || m_hi < 0) throw PreconditionError("bilateral_path requires m_lo <= 0 <= m_hi");
  PathSegment path;
  path.m_lo = m_lo;
  path.vertices.resize(static_cast<std::size_t>(m_hi - m_lo + 1));
  const auto zero = static_cast<std::size_t>(-m_lo);
  path.vertices[zero] = v0;
  for (std::size_t i = zero; i > 0; --i) path.vertices[i - 1] = kernel.parent(path.vertices[i]);
  std::vector<Vertex> kids;
  for (std::size_t i = zero + 1; i < path.vertices.size(); ++i) {
    kids.clear();
    kernel.children_into(path.vertices[i - 1], kids);
    path.vertices[i] = *std::min_element(kids.begin(), kids.end());
  }
  return path;
}

VertexSet window_vertices(const TreeKernel& kernel, const Window& w, std::size_t cap) {
  VertexSet out;
  Vertex top = w.base;
  for (std::size_t i = 0; i <= w.depth_up; ++i) {
    if (i > 0) top = kernel.parent(top);
    VertexSet level{top};
    out.push_back(top);
    for (std::size_t j = 1; j <= i + w.depth_down; ++j) {
      level = children_of_set(kernel, level, cap);
      out.insert(out.end(), level.begin(), level.end());
      check_cap(out.size(), cap);
    }
  }
  normalize(out);
  return out;
}

}  // namespace woldlab
