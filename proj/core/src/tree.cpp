#include "woldlab/tree.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <string>

#include "woldlab/error.hpp"

namespace woldlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("invalid integer '" + std::string(s) + "' in " + std::string(what));
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string TreeKernel::format(const Vertex& v) const {
  return std::to_string(v.first) + "," + std::to_string(v.second);
}

Vertex TreeKernel::parse(std::string_view token) const {
  const auto comma = token.find(',');
  if (comma == std::string_view::npos) {
    throw ParseError("expected vertex of the form n,m for tree '" + name() + "', got '" +
                     std::string(token) + "'");
  }
  Vertex v{parse_int(token.substr(0, comma), "vertex"), parse_int(token.substr(comma + 1), "vertex")};
  if (!contains(v)) {
    throw OutOfRegionError("vertex " + std::string(token) + " is not a vertex of " + describe());
  }
  return v;
}

// --- bilateral path --------------------------------------------------------

void BilateralPathTree::children_into(const Vertex& v, std::vector<Vertex>& out) const {
  out.push_back({v.first + 1, 0});
}

Vertex BilateralPathTree::parent(const Vertex& v) const { return {v.first - 1, 0}; }

std::string BilateralPathTree::format(const Vertex& v) const { return std::to_string(v.first); }

Vertex BilateralPathTree::parse(std::string_view token) const {
  return at(parse_int(token, "zpath vertex"));
}

// --- T_{k,inf} -------------------------------------------------------------

KInfinityTree::KInfinityTree(int k) : k_(k) {
  if (k < 1) throw DomainError("tkinf requires k >= 1");
}

bool KInfinityTree::contains(const Vertex& v) const {
  if (v.first <= 0) return v.second == 0;
  return v.second >= 1 && v.second <= k_;
}

void KInfinityTree::children_into(const Vertex& v, std::vector<Vertex>& out) const {
  if (!contains(v)) throw OutOfRegionError("vertex outside " + describe());
  if (v.first < 0) {
    out.push_back({v.first + 1, 0});
  } else if (v.first == 0) {
    for (int j = 1; j <= k_; ++j) out.push_back({1, j});
  } else {
    out.push_back({v.first + 1, v.second});
  }
}

Vertex KInfinityTree::parent(const Vertex& v) const {
  if (!contains(v)) throw OutOfRegionError("vertex outside " + describe());
  if (v.first <= 0) return {v.first - 1, 0};
  if (v.first == 1) return {0, 0};
  return {v.first - 1, v.second};
}

std::string KInfinityTree::describe() const { return "tkinf:k=" + std::to_string(k_); }

// --- quasi-Brownian --------------------------------------------------------

void QuasiBrownianTree::children_into(const Vertex& v, std::vector<Vertex>& out) const {
  if (v.first < 0) throw OutOfRegionError("tqb vertices have n >= 0");
  if (v.first == 0) {
    out.push_back({0, v.second - 1});
    out.push_back({1, v.second});
  } else {
    out.push_back({v.first + 1, v.second});
  }
}

Vertex QuasiBrownianTree::parent(const Vertex& v) const {
  if (v.first < 0) throw OutOfRegionError("tqb vertices have n >= 0");
  if (v.first == 0) return {0, v.second + 1};
  return {v.first - 1, v.second};
}

// --- adjacency -------------------------------------------------------------

bool AdjacencyTree::contains(const Vertex& v) const {
  return v.second == 0 && v.first >= 0 && v.first < static_cast<std::int64_t>(tokens_.size());
}

bool AdjacencyTree::is_boundary(const Vertex& v) const {
  return contains(v) && boundary_[static_cast<std::size_t>(v.first)];
}

std::vector<Vertex> AdjacencyTree::vertices() const {
  std::vector<Vertex> out;
  out.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) out.push_back({static_cast<std::int64_t>(i), 0});
  return out;
}

void AdjacencyTree::children_into(const Vertex& v, std::vector<Vertex>& out) const {
  if (!contains(v)) throw OutOfRegionError("unknown vertex in adjacency tree");
  const auto& c = children_[static_cast<std::size_t>(v.first)];
  if (c.empty()) {
    throw OutOfRegionError("children of boundary vertex '" + format(v) + "' are truncated");
  }
  out.insert(out.end(), c.begin(), c.end());
}

Vertex AdjacencyTree::parent(const Vertex& v) const {
  if (!contains(v)) throw OutOfRegionError("unknown vertex in adjacency tree");
  const auto p = parent_[static_cast<std::size_t>(v.first)];
  if (p < 0) throw OutOfRegionError("parent of boundary vertex '" + format(v) + "' is truncated");
  return {p, 0};
}

std::string AdjacencyTree::format(const Vertex& v) const {
  if (!contains(v)) return "?";
  return tokens_[static_cast<std::size_t>(v.first)];
}

Vertex AdjacencyTree::parse(std::string_view token) const {
  const auto it = index_.find(trim(token));
  if (it == index_.end()) {
    throw OutOfRegionError("unknown vertex '" + std::string(token) + "' in adjacency tree");
  }
  return {it->second, 0};
}

std::shared_ptr<const AdjacencyTree> load_adjacency(std::string_view text) {
  auto tree = std::make_shared<AdjacencyTree>();
  std::set<std::string, std::less<>> boundary_tokens;

  auto intern = [&](std::string_view tok) -> std::int64_t {
    const auto it = tree->index_.find(tok);
    if (it != tree->index_.end()) return it->second;
    const auto id = static_cast<std::int64_t>(tree->tokens_.size());
    tree->tokens_.emplace_back(tok);
    tree->index_.emplace(std::string(tok), id);
    tree->children_.emplace_back();
    tree->parent_.push_back(-1);
    tree->boundary_.push_back(false);
    return id;
  };

  std::vector<bool> has_line;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";

    if (line.front() == '#') {
      constexpr std::string_view header = "#boundary:";
      if (line.substr(0, header.size()) == header) {
        for (auto tok : split_ws(line.substr(header.size()))) boundary_tokens.emplace(tok);
      }
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("missing ':'" + where);
    const auto head = trim(line.substr(0, colon));
    if (head.empty() || split_ws(head).size() != 1) throw ParseError("bad vertex token" + where);
    const auto v = intern(head);
    has_line.resize(tree->tokens_.size(), false);
    if (has_line[static_cast<std::size_t>(v)]) {
      throw ParseError("vertex '" + std::string(head) + "' listed twice" + where);
    }
    has_line[static_cast<std::size_t>(v)] = true;

    for (auto tok : split_ws(line.substr(colon + 1))) {
      const auto c = intern(tok);
      if (c == v) {
        throw TreeStructureError("self-loop at '" + std::string(tok) + "'" + where);
      }
      if (tree->parent_[static_cast<std::size_t>(c)] >= 0) {
        throw TreeStructureError("vertex '" + std::string(tok) + "' has two parents" + where);
      }
      tree->parent_[static_cast<std::size_t>(c)] = v;
      tree->children_[static_cast<std::size_t>(v)].push_back({c, 0});
    }
  }

  for (const auto& tok : boundary_tokens) {
    const auto it = tree->index_.find(tok);
    if (it == tree->index_.end()) throw ParseError("boundary vertex '" + tok + "' does not occur");
    tree->boundary_[static_cast<std::size_t>(it->second)] = true;
  }

  const std::size_t n = tree->tokens_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (tree->boundary_[i]) continue;
    if (tree->children_[i].empty()) {
      throw TreeStructureError("leaf '" + tree->tokens_[i] + "' outside the declared boundary");
    }
    if (tree->parent_[i] < 0) {
      throw TreeStructureError("root '" + tree->tokens_[i] + "' outside the declared boundary");
    }
  }

  // Parent chains must not close up: walking up from any vertex reaches a
  // boundary vertex without a parent within n steps.
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t cur = static_cast<std::int64_t>(i);
    std::size_t steps = 0;
    while (cur >= 0 && steps <= n) {
      cur = tree->parent_[static_cast<std::size_t>(cur)];
      ++steps;
    }
    if (cur >= 0) throw TreeStructureError("circuit through '" + tree->tokens_[i] + "'");
  }

  for (auto& c : tree->children_) std::sort(c.begin(), c.end());
  return tree;
}

}  // namespace woldlab
