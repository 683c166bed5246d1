#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "woldlab/vertex.hpp"

namespace woldlab {

/// Lazy description of a countably infinite, leafless, rootless directed tree.
///
/// Implementations are immutable after construction and safe to query from
/// several threads at once. children_into() appends the children of v in
/// canonical (ascending Vertex) order; the list is nonempty for every vertex
/// inside the kernel's region, and parent(c) == v for each appended c.
class TreeKernel {
 public:
  virtual ~TreeKernel() = default;

  virtual void children_into(const Vertex& v, std::vector<Vertex>& out) const = 0;
  virtual Vertex parent(const Vertex& v) const = 0;
  virtual bool contains(const Vertex& v) const = 0;

  /// Builtin name ("zpath", "tkinf", "tqb") or "adjacency".
  virtual std::string name() const = 0;
  /// Name plus parameters, e.g. "tkinf:k=3".
  virtual std::string describe() const { return name(); }

  /// Token syntax for vertices: "n,m" for pair-encoded trees.
  virtual std::string format(const Vertex& v) const;
  /// Inverse of format(); throws ParseError or OutOfRegionError.
  virtual Vertex parse(std::string_view token) const;

  std::vector<Vertex> children(const Vertex& v) const {
    std::vector<Vertex> out;
    children_into(v, out);
    return out;
  }
};

using TreePtr = std::shared_ptr<const TreeKernel>;

/// The integers with m -> m + 1. Vertex m is encoded as (m, 0).
class BilateralPathTree final : public TreeKernel {
 public:
  void children_into(const Vertex& v, std::vector<Vertex>& out) const override;
  Vertex parent(const Vertex& v) const override;
  bool contains(const Vertex& v) const override { return v.second == 0; }
  std::string name() const override { return "zpath"; }
  std::string format(const Vertex& v) const override;
  Vertex parse(std::string_view token) const override;

  static Vertex at(std::int64_t m) { return {m, 0}; }
};

/// k rays glued to the end of a backward ray: the spine (-d, 0) for d >= 0
/// ends at (0, 0), whose children are (1, 1), ..., (1, k); ray j continues as
/// (d, j) -> (d + 1, j).
class KInfinityTree final : public TreeKernel {
 public:
  explicit KInfinityTree(int k);

  void children_into(const Vertex& v, std::vector<Vertex>& out) const override;
  Vertex parent(const Vertex& v) const override;
  bool contains(const Vertex& v) const override;
  std::string name() const override { return "tkinf"; }
  std::string describe() const override;

  int k() const noexcept { return k_; }

 private:
  int k_;
};

/// Rootless quasi-Brownian tree of valency 2 on N x Z:
/// Chi((0, m)) = {(0, m - 1), (1, m)}, Chi((n, m)) = {(n + 1, m)} for n >= 1.
class QuasiBrownianTree final : public TreeKernel {
 public:
  void children_into(const Vertex& v, std::vector<Vertex>& out) const override;
  Vertex parent(const Vertex& v) const override;
  bool contains(const Vertex& v) const override { return v.first >= 0; }
  std::string name() const override { return "tqb"; }
};

/// A finite window of a tree read from the adjacency format. Vertices listed
/// on the "#boundary:" header may lack children (down-boundary) or a parent
/// (up-boundary); querying past them throws OutOfRegionError.
class AdjacencyTree final : public TreeKernel {
 public:
  void children_into(const Vertex& v, std::vector<Vertex>& out) const override;
  Vertex parent(const Vertex& v) const override;
  bool contains(const Vertex& v) const override;
  std::string name() const override { return "adjacency"; }
  std::string format(const Vertex& v) const override;
  Vertex parse(std::string_view token) const override;

  std::size_t size() const noexcept { return tokens_.size(); }
  bool is_boundary(const Vertex& v) const;
  std::vector<Vertex> vertices() const;

 private:
  friend std::shared_ptr<const AdjacencyTree> load_adjacency(std::string_view text);

  std::vector<std::string> tokens_;
  std::map<std::string, std::int64_t, std::less<>> index_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::int64_t> parent_;  // -1 when absent
  std::vector<bool> boundary_;
};

/// Parses "<vertex>: <child> ..." lines with an optional
/// "#boundary: <v> ..." header. Other lines starting with '#' are comments.
std::shared_ptr<const AdjacencyTree> load_adjacency(std::string_view text);

}  // namespace woldlab
