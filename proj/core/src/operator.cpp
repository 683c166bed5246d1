#include "woldlab/operator.hpp"

#include <cmath>
#include <string>

#include "woldlab/error.hpp"

namespace woldlab {

void SparseVector::set(const Vertex& v, double x) {
  if (std::fabs(x) < kDropThreshold) {
    entries_.erase(v);
  } else {
    entries_[v] = x;
  }
}

void SparseVector::add(const Vertex& v, double x) { set(v, get(v) + x); }

double SparseVector::get(const Vertex& v) const {
  const auto it = entries_.find(v);
  return it == entries_.end() ? 0.0 : it->second;
}

VertexSet SparseVector::support() const {
  VertexSet s;
  s.reserve(entries_.size());
  for (const auto& [v, x] : entries_) s.push_back(v);
  return s;
}

double SparseVector::norm_sq() const {
  CompensatedSum acc;
  for (const auto& [v, x] : entries_) acc.add(x * x);
  return acc.value();
}

double SparseVector::norm() const { return std::sqrt(norm_sq()); }

SparseVector& SparseVector::operator*=(double s) {
  std::map<Vertex, double> next;
  for (const auto& [v, x] : entries_) {
    if (std::fabs(s * x) >= kDropThreshold) next.emplace(v, s * x);
  }
  entries_ = std::move(next);
  return *this;
}

void SparseVector::axpy(double s, const SparseVector& other) {
  for (const auto& [v, x] : other.entries_) add(v, s * x);
}

double dot(const SparseVector& a, const SparseVector& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& big = a.size() <= b.size() ? b : a;
  CompensatedSum acc;
  for (const auto& [v, x] : small.entries()) acc.add(x * big.get(v));
  return acc.value();
}

SparseVector operator-(const SparseVector& a, const SparseVector& b) {
  SparseVector out = a;
  out.axpy(-1.0, b);
  return out;
}

SparseVector operator*(double s, const SparseVector& f) {
  SparseVector out = f;
  out *= s;
  return out;
}

SparseVector apply_shift(const WeightSystem& ws, const TreeKernel& kernel, const SparseVector& f,
                         std::size_t cap) {
  SparseVector out;
  std::vector<Vertex> kids;
  std::size_t produced = 0;
  for (const auto& [u, x] : f.entries()) {
    kids.clear();
    kernel.children_into(u, kids);
    produced += kids.size();
    if (produced > cap) {
      throw ResourceLimitError("shift support exceeds cap " + std::to_string(cap));
    }
    // Children of distinct vertices are disjoint, so each entry is set once.
    for (const auto& c : kids) out.set(c, ws.weight(c) * x);
  }
  return out;
}

SparseVector apply_adjoint(const WeightSystem& ws, const TreeKernel& kernel,
                           const SparseVector& f) {
  std::map<Vertex, CompensatedSum> acc;
  for (const auto& [u, x] : f.entries()) acc[kernel.parent(u)].add(ws.weight(u) * x);
  SparseVector out;
  for (const auto& [v, s] : acc) out.set(v, s.value());
  return out;
}

SparseVector apply_power(const WeightSystem& ws, const TreeKernel& kernel, SparseVector f,
                         std::size_t k, std::size_t cap) {
  for (std::size_t i = 0; i < k; ++i) f = apply_shift(ws, kernel, f, cap);
  return f;
}

double defect_diagonal(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                       unsigned m, std::size_t cap) {
  if (m < 1) throw PreconditionError("defect order m must be >= 1");
  if (m > kMaxExactBinomial) {
    throw DomainError("defect order " + std::to_string(m) + " exceeds exact binomial range");
  }
  CompensatedSum acc;
  for (unsigned k = 0; k <= m; ++k) {
    const double c = static_cast<double>(binomial(m, k));
    const double term = c * shift_norm_sq(ws, kernel, v, k, cap);
    acc.add(k % 2 == 0 ? term : -term);
  }
  return acc.value();
}

DefectReport classify(const WeightSystem& ws, const TreeKernel& kernel, const Window& window,
                      unsigned m, double tol) {
  DefectReport r;
  r.m = m;
  r.expansion = r.concave = r.m_isometry = r.isometry = true;
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  for (const auto& v : window_vertices(kernel, window)) {
    const double d = defect_diagonal(ws, kernel, v, m);
    r.diagonal.emplace_back(v, d);
    if (d > tol) {
      r.expansion = false;
      if (!r.expansion_witness) r.expansion_witness = v;
    }
    if (sign * d > tol) {
      r.concave = false;
      if (!r.concave_witness) r.concave_witness = v;
    }
    if (std::fabs(d) > tol) r.m_isometry = false;
    const double d1 = m == 1 ? d : 1.0 - shift_norm_sq(ws, kernel, v, 1);
    if (std::fabs(d1) > tol) r.isometry = false;
  }
  if (r.m_isometry) {
    r.classification = DefectClass::m_isometry;
  } else if (r.expansion) {
    r.classification = DefectClass::m_expansion;
  } else if (r.concave) {
    r.classification = DefectClass::m_concave;
  }
  return r;
}

const char* to_string(DefectClass c) {
  switch (c) {
    case DefectClass::m_isometry:
      return "m-isometry";
    case DefectClass::m_expansion:
      return "m-expansion";
    case DefectClass::m_concave:
      return "m-concave";
    case DefectClass::neither:
      return "neither";
  }
  return "neither";
}

std::vector<SparseVector> ker_adjoint_local_basis(const WeightSystem& ws,
                                                  const TreeKernel& kernel, const Vertex& v) {
  const auto kids = kernel.children(v);
  std::vector<SparseVector> basis;
  if (kids.size() < 2) return basis;

  // Gram-Schmidt on (w, e_c1, e_c2, ...) and drop the first vector.
  SparseVector w;
  for (const auto& c : kids) w.set(c, ws.weight(c));
  std::vector<SparseVector> done{(1.0 / w.norm()) * w};
  for (const auto& c : kids) {
    if (done.size() == kids.size()) break;
    SparseVector x = SparseVector::unit(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : done) x.axpy(-dot(q, x), q);
    }
    const double n = x.norm();
    if (n < 1e-8) continue;
    x *= 1.0 / n;
    done.push_back(x);
    basis.push_back(std::move(x));
  }
  return basis;
}

WanderingReport wandering_orthogonality_check(const WeightSystem& ws, const TreeKernel& kernel,
                                              const Window& window, std::size_t n_max,
                                              double tol) {
  WanderingReport r;
  r.balance = is_balanced(ws, kernel, window);
  r.precondition_ok = r.balance.status == Tri::yes;
  if (!r.precondition_ok) return r;

  const auto vertices = window_vertices(kernel, window);
  // powers[i][j] = S^j f_i
  std::vector<std::vector<SparseVector>> powers;
  for (const auto& v : vertices) {
    for (auto& f : ker_adjoint_local_basis(ws, kernel, v)) {
      std::vector<SparseVector> row{std::move(f)};
      for (std::size_t j = 1; j <= n_max; ++j) row.push_back(apply_shift(ws, kernel, row.back()));
      powers.push_back(std::move(row));
    }
  }
  r.kernel_vectors = powers.size();

  for (const auto& fs : powers) {
    for (const auto& gs : powers) {
      for (std::size_t j = 0; j <= n_max; ++j) {
        for (std::size_t k = j + 1; k <= n_max; ++k) {
          r.max_pair_residual = std::max(r.max_pair_residual, std::fabs(dot(fs[j], gs[k])));
          ++r.pairs_checked;
        }
      }
    }
  }

  for (const auto& u : vertices) {
    SparseVector snu = SparseVector::unit(u);
    for (std::size_t n = 1; n <= n_max; ++n) {
      snu = apply_shift(ws, kernel, snu);
      for (const auto& fs : powers) {
        for (std::size_t j = 0; j < n; ++j) {
          r.max_complement_residual =
              std::max(r.max_complement_residual, std::fabs(dot(fs[j], snu)));
        }
      }
    }
  }
  r.pass = r.max_pair_residual <= tol && r.max_complement_residual <= tol;
  return r;
}

}  // namespace woldlab
