#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "woldlab/numeric.hpp"
#include "woldlab/tree.hpp"
#include "woldlab/vertex.hpp"

namespace woldlab {

/// Chi^<n>(v); Chi^<0>(v) = {v}.
VertexSet child_n(const TreeKernel& kernel, const Vertex& v, std::size_t n,
                  std::size_t cap = default_vertex_cap());

/// Chi(S) for a set S.
VertexSet children_of_set(const TreeKernel& kernel, const VertexSet& s,
                          std::size_t cap = default_vertex_cap());

/// par^<n>(v).
Vertex par_n(const TreeKernel& kernel, Vertex v, std::size_t n);

/// A(v, n) via A(v, 1) = Chi(par(v)) \ {v} and A(v, n) = Chi(A(par(v), n - 1)),
/// unrolled as Chi^<n-1>(Chi(par^<n>(v)) \ {par^<n-1>(v)}).
VertexSet enum_A(const TreeKernel& kernel, const Vertex& v, std::size_t n,
                 std::size_t cap = default_vertex_cap());

/// Result of the bounded same-generation search.
struct GenerationMatch {
  bool found = false;
  std::size_t level = 0;  ///< least n0 with par^<n0>(u) == par^<n0>(v), when found
  std::size_t bound = 0;  ///< search bound used

  static GenerationMatch yes(std::size_t n0, std::size_t bound) { return {true, n0, bound}; }
  static GenerationMatch no_up_to(std::size_t bound) { return {false, 0, bound}; }
};

inline constexpr std::size_t kDefaultGenerationBound = 64;

GenerationMatch same_generation(const TreeKernel& kernel, const Vertex& u, const Vertex& v,
                                std::size_t n_max = kDefaultGenerationBound);

/// A finite segment (v_m) for m_lo <= m <= m_hi of the bilateral path through
/// v0. Forward steps take the least child in canonical order.
struct PathSegment {
  std::int64_t m_lo = 0;
  std::vector<Vertex> vertices;

  std::int64_t m_hi() const { return m_lo + static_cast<std::int64_t>(vertices.size()) - 1; }
  const Vertex& at(std::int64_t m) const;
  bool covers(std::int64_t m) const { return m >= m_lo && m <= m_hi(); }
};

PathSegment bilateral_path(const TreeKernel& kernel, const Vertex& v0, std::int64_t m_lo,
                           std::int64_t m_hi);

/// Finite truncation: all Chi^<j>(par^<i>(base)) with i <= depth_up and
/// j <= i + depth_down.
struct Window {
  Vertex base;
  std::size_t depth_up = 2;
  std::size_t depth_down = 2;
};

/// Window members in canonical order.
VertexSet window_vertices(const TreeKernel& kernel, const Window& w,
                          std::size_t cap = default_vertex_cap());

}  // namespace woldlab
