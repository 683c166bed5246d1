#include "woldlab/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "woldlab/error.hpp"
#include "woldlab/numeric.hpp"

namespace woldlab {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  // std::from_chars for double is unavailable on older libstdc++.
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw ParseError("invalid number '" + buf + "' in " + std::string(what));
  }
  return v;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_positive(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw DomainError(std::string("nonpositive weight in ") + what + ": " + fmt_double(w));
  }
}

}  // namespace

double WeightSystem::log_weight(const Vertex& v) const {
  const double w = weight(v);
  if (!(w > 0.0)) throw DomainError("nonpositive weight " + fmt_double(w));
  return std::log(w);
}

// --- constant --------------------------------------------------------------

ConstantWeights::ConstantWeights(double c) : c_(c) { require_positive(c, "constant"); }

std::string ConstantWeights::describe() const { return "constant:c=" + fmt_double(c_); }

// --- coefficient rules -----------------------------------------------------

CoefficientRule CoefficientRule::constant(double c) {
  CoefficientRule r;
  r.fallback_ = c;
  return r;
}

CoefficientRule CoefficientRule::parse(std::string_view text) {
  constexpr std::string_view kConst = "const:";
  constexpr std::string_view kTable = "table:";
  if (text.substr(0, kConst.size()) == kConst) {
    return constant(parse_double(text.substr(kConst.size()), "coefficient rule"));
  }
  if (text.substr(0, kTable.size()) == kTable) {
    CoefficientRule r;
    bool have_else = false;
    auto body = text.substr(kTable.size());
    while (!body.empty()) {
      const auto bar = body.find('|');
      const auto item = body.substr(0, bar);
      body = bar == std::string_view::npos ? std::string_view{} : body.substr(bar + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ParseError("table entry needs m=value: " + std::string(item));
      const auto key = item.substr(0, eq);
      const double value = parse_double(item.substr(eq + 1), "coefficient table");
      if (key == "else") {
        r.fallback_ = value;
        have_else = true;
      } else {
        std::int64_t m = 0;
        const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), m);
        if (ec != std::errc{} || p != key.data() + key.size()) {
          throw ParseError("bad table index '" + std::string(key) + "'");
        }
        r.table_[m] = value;
      }
    }
    if (!have_else) throw ParseError("coefficient table needs an else=<value> entry");
    return r;
  }
  return constant(parse_double(text, "coefficient rule"));
}

double CoefficientRule::at(std::int64_t m) const {
  if (table_.empty()) return fallback_;
  const auto it = table_.find(m);
  return it == table_.end() ? fallback_ : it->second;
}

double CoefficientRule::inf() const {
  double v = fallback_;
  for (const auto& [m, c] : table_) v = std::min(v, c);
  return v;
}

double CoefficientRule::sup() const {
  double v = fallback_;
  for (const auto& [m, c] : table_) v = std::max(v, c);
  return v;
}

std::int64_t CoefficientRule::table_extent() const {
  std::int64_t e = 0;
  for (const auto& [m, c] : table_) e = std::max(e, m < 0 ? -m : m);
  return e;
}

std::string CoefficientRule::to_string() const {
  if (table_.empty()) return "const:" + fmt_double(fallback_);
  std::string s = "table:";
  for (const auto& [m, c] : table_) s += std::to_string(m) + "=" + fmt_double(c) + "|";
  return s + "else=" + fmt_double(fallback_);
}

FamilyHypotheses check_family_hypotheses(const PolyFamilyParams& params, std::int64_t m_lo,
                                         std::int64_t m_hi) {
  FamilyHypotheses h;
  h.m_lo = m_lo;
  h.m_hi = m_hi;
  h.positive_coefficients = true;
  h.inf_b = params.b.at(m_lo);
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double a = params.a.at(m);
    const double b = params.b.at(m);
    h.positive_coefficients = h.positive_coefficients && a > 0.0 && b > 0.0;
    h.sup_a = std::max(h.sup_a, a);
    h.sup_b = std::max(h.sup_b, b);
    h.inf_b = std::min(h.inf_b, b);
  }
  // Rules are constant outside a finite table, so the sampled range covers Z
  // once it contains the table and one point beyond it.
  const auto extent = std::max(params.a.table_extent(), params.b.table_extent());
  h.window_certified = m_lo < -extent && m_hi > extent;
  h.holds = h.positive_coefficients && std::isfinite(h.sup_a) && std::isfinite(h.sup_b) &&
            h.inf_b > 0.0;
  return h;
}

// --- quadratic family on T_qb ----------------------------------------------

QuadraticFamilyWeights::QuadraticFamilyWeights(PolyFamilyParams params, std::string family_name)
    : params_(std::move(params)), family_name_(std::move(family_name)) {
  if (!(params_.a.inf() > 0.0) || !(params_.b.inf() > 0.0)) {
    throw DomainError("quadratic family needs positive coefficients a_m, b_m");
  }
}

double QuadraticFamilyWeights::weight(const Vertex& v) const { return std::exp(log_weight(v)); }

double QuadraticFamilyWeights::log_weight(const Vertex& v) const {
  const auto n = v.first;
  const auto m = v.second;
  if (n < 0) throw OutOfRegionError("quadratic family weights live on tqb (n >= 0)");
  if (n >= 2) {
    const double x = static_cast<double>(n);
    return 0.5 * (std::log(params_.p(m, x - 1.0)) - std::log(params_.p(m, x - 2.0)));
  }
  if (m >= 1) {
    const double md = static_cast<double>(m);
    if (n == 0) return 0.5 * (std::log(md) - std::log1p(md));
    return -0.5 * std::log(md);
  }
  return 0.0;
}

std::string QuadraticFamilyWeights::describe() const {
  if (family_name_ == "ex52") return "ex52";
  return family_name_ + ":a=" + params_.a.to_string() + ",b=" + params_.b.to_string();
}

// --- T_{k,inf} isometric ---------------------------------------------------

KInfinityIsometricWeights::KInfinityIsometricWeights(int k) : k_(k) {
  if (k < 1) throw DomainError("tkinf-isometric requires k >= 1");
}

double KInfinityIsometricWeights::weight(const Vertex& v) const {
  return v.first == 1 ? 1.0 / std::sqrt(static_cast<double>(k_)) : 1.0;
}

std::string KInfinityIsometricWeights::describe() const {
  return "tkinf-isometric:k=" + std::to_string(k_);
}

// --- table -----------------------------------------------------------------

TableWeights::TableWeights(std::map<Vertex, double> table, std::optional<double> fallback)
    : table_(std::move(table)), fallback_(fallback) {
  for (const auto& [v, w] : table_) require_positive(w, "weight table");
  if (fallback_) require_positive(*fallback_, "weight table default");
}

double TableWeights::weight(const Vertex& v) const {
  const auto it = table_.find(v);
  if (it != table_.end()) return it->second;
  if (fallback_) return *fallback_;
  throw OutOfRegionError("no weight for vertex (" + std::to_string(v.first) + "," +
                         std::to_string(v.second) + ")");
}

// --- mutation --------------------------------------------------------------

MutatedWeights::MutatedWeights(WeightsPtr base, Vertex at, double factor)
    : base_(std::move(base)), at_(at), factor_(factor) {
  require_positive(factor, "mutation factor");
}

double MutatedWeights::weight(const Vertex& v) const {
  const double w = base_->weight(v);
  return v == at_ ? w * factor_ : w;
}

std::string MutatedWeights::describe() const {
  return base_->describe() + "+mutated(" + std::to_string(at_.first) + "," +
         std::to_string(at_.second) + ")x" + fmt_double(factor_);
}

// --- Cauchy dual -----------------------------------------------------------

CauchyDualWeights::CauchyDualWeights(WeightsPtr base, TreePtr kernel, double eps)
    : base_(std::move(base)), kernel_(std::move(kernel)), eps_(eps) {}

double CauchyDualWeights::weight(const Vertex& v) const { return std::exp(log_weight(v)); }

double CauchyDualWeights::log_weight(const Vertex& v) const {
  const Vertex p = kernel_->parent(v);
  const double norm_sq = shift_norm_sq(*base_, *kernel_, p, 1);
  if (!(norm_sq >= eps_)) {
    throw DomainError("||S e_v||^2 = " + fmt_double(norm_sq) + " below " + fmt_double(eps_) +
                      " at " + kernel_->format(p) + "; not left-invertible");
  }
  return base_->log_weight(v) - std::log(norm_sq);
}

WeightsPtr cauchy_dual(WeightsPtr ws, TreePtr kernel, double eps) {
  return std::make_shared<CauchyDualWeights>(std::move(ws), std::move(kernel), eps);
}

// --- moments and norms -----------------------------------------------------

double MomentValue::value() const { return std::exp(log_value); }

MomentValue moment(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& u,
                   std::size_t n) {
  CompensatedSum acc;
  Vertex cur = u;
  for (std::size_t j = 0; j < n; ++j) {
    acc.add(ws.log_weight(cur));
    cur = kernel.parent(cur);
  }
  return {acc.value(), n, u};
}

double shift_norm_sq(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& u,
                     std::size_t n, std::size_t cap) {
  if (n == 0) return 1.0;
  // Depth-first over Chi^<n>(u) carrying log lambda along the path.
  struct Frame {
    Vertex v;
    std::size_t depth;
    double log_w;
  };
  CompensatedSum total;
  std::vector<Frame> stack{{u, 0, 0.0}};
  std::vector<Vertex> kids;
  std::size_t visited = 0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == n) {
      total.add(std::exp(2.0 * f.log_w));
      continue;
    }
    kids.clear();
    kernel.children_into(f.v, kids);
    visited += kids.size();
    if (visited > cap) {
      throw ResourceLimitError("Chi^<" + std::to_string(n) + "> enumeration exceeds cap " +
                               std::to_string(cap));
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      stack.push_back({*it, f.depth + 1, f.log_w + ws.log_weight(*it)});
    }
  }
  return total.value();
}

LowerNormBound min_shift_norm_sq(const WeightSystem& ws, const TreeKernel& kernel,
                                 const Window& window) {
  LowerNormBound out;
  bool first = true;
  for (const auto& v : window_vertices(kernel, window)) {
    const double s = shift_norm_sq(ws, kernel, v, 1);
    if (first || s < out.min_norm_sq) {
      out.min_norm_sq = s;
      out.argmin = v;
      first = false;
    }
  }
  return out;
}

// --- diagnostics -----------------------------------------------------------

BalanceResult is_balanced(const WeightSystem& ws, const TreeKernel& kernel, const Window& window,
                          std::size_t n_max, double tol) {
  BalanceResult out;
  const auto vertices = window_vertices(kernel, window);
  out.vertices = vertices.size();
  if (vertices.empty()) return out;

  // par^<n_max>(u) == par^<n_max>(v) exactly when the least common level is
  // at most n_max, so it keys the bounded generation classes.
  std::map<Vertex, std::vector<std::pair<Vertex, double>>> classes;
  for (const auto& v : vertices) {
    classes[par_n(kernel, v, n_max)].emplace_back(v, shift_norm_sq(ws, kernel, v, 1));
  }
  out.classes = classes.size();
  out.status = Tri::yes;
  for (const auto& [key, members] : classes) {
    const auto& [first_v, first_norm] = members.front();
    double lo = first_norm;
    double hi = first_norm;
    for (const auto& [u, s] : members) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      const double scale = std::max({1.0, std::fabs(s), std::fabs(first_norm)});
      if (std::fabs(s - first_norm) > tol * scale && !out.witness) {
        out.witness = std::make_pair(first_v, u);
        out.status = Tri::no;
      }
    }
    out.max_spread = std::max(out.max_spread, hi - lo);
  }
  return out;
}

NormIncreasingResult is_norm_increasing(const WeightSystem& ws, const TreeKernel& kernel,
                                        const Window& window, double tol) {
  NormIncreasingResult out;
  const auto vertices = window_vertices(kernel, window);
  if (vertices.empty()) return out;
  out.status = Tri::yes;
  out.equality = true;
  bool first = true;
  for (const auto& v : vertices) {
    const double s = shift_norm_sq(ws, kernel, v, 1);
    if (first || s < out.min_norm_sq) {
      out.min_norm_sq = s;
      out.argmin = v;
      first = false;
    }
    if (std::fabs(s - 1.0) > tol) out.equality = false;
    if (s < 1.0 - tol && !out.witness) {
      out.witness = v;
      out.status = Tri::no;
    }
  }
  return out;
}

BoundednessEstimate boundedness_estimate(const WeightSystem& ws, const TreeKernel& kernel,
                                         const Window& window) {
  BoundednessEstimate out;
  bool first = true;
  for (const auto& v : window_vertices(kernel, window)) {
    const double s = shift_norm_sq(ws, kernel, v, 1);
    ++out.sampled;
    if (first || s > out.sup) {
      out.sup = s;
      out.argmax = v;
      first = false;
    }
  }
  return out;
}

}  // namespace woldlab
