#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace woldlab {

/// Opaque vertex identifier. Pair-encoded trees use (first, second) = (n, m);
/// the bilateral integer path uses (m, 0); adjacency trees use (token index, 0).
/// Ordering is lexicographic and serves as the canonical vertex order.
struct Vertex {
  std::int64_t first = 0;
  std::int64_t second = 0;

  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept {
    const auto a = static_cast<std::uint64_t>(v.first);
    const auto b = static_cast<std::uint64_t>(v.second);
    return std::hash<std::uint64_t>{}(a * 0x9E3779B97F4A7C15ull ^ (b + 0x7F4A7C15ull + (a << 6) + (a >> 2)));
  }
};

/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

void normalize(VertexSet& s);
bool set_contains(const VertexSet& s, const Vertex& v);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);

}  // namespace woldlab
