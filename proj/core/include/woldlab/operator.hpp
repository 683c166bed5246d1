#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "woldlab/numeric.hpp"
#include "woldlab/tree.hpp"
#include "woldlab/tree_ops.hpp"
#include "woldlab/weights.hpp"

namespace woldlab {

/// Finitely supported real function on vertices. Entries with magnitude
/// below kDropThreshold are never stored.
class SparseVector {
 public:
  static constexpr double kDropThreshold = 1e-15;

  SparseVector() = default;
  static SparseVector unit(const Vertex& v) {
    SparseVector f;
    f.set(v, 1.0);
    return f;
  }

  void set(const Vertex& v, double x);
  void add(const Vertex& v, double x);
  double get(const Vertex& v) const;

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<Vertex, double>& entries() const noexcept { return entries_; }
  VertexSet support() const;

  double norm_sq() const;
  double norm() const;

  SparseVector& operator*=(double s);
  /// this += s * other
  void axpy(double s, const SparseVector& other);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::map<Vertex, double> entries_;
};

double dot(const SparseVector& a, const SparseVector& b);
SparseVector operator-(const SparseVector& a, const SparseVector& b);
SparseVector operator*(double s, const SparseVector& f);

/// (S f)(v) = lambda_v f(par(v)).
SparseVector apply_shift(const WeightSystem& ws, const TreeKernel& kernel, const SparseVector& f,
                         std::size_t cap = default_vertex_cap());

/// (S* f)(v) = sum over u in Chi(v) of lambda_u f(u).
SparseVector apply_adjoint(const WeightSystem& ws, const TreeKernel& kernel,
                           const SparseVector& f);

/// S^k f by iterated apply_shift.
SparseVector apply_power(const WeightSystem& ws, const TreeKernel& kernel, SparseVector f,
                         std::size_t k, std::size_t cap = default_vertex_cap());

/// d_m(v) = sum_k (-1)^k C(m, k) ||S^k e_v||^2. Exact for the defect operator
/// because each S*^k S^k is diagonal in the vertex basis.
double defect_diagonal(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                       unsigned m, std::size_t cap = default_vertex_cap());

enum class DefectClass { m_isometry, m_expansion, m_concave, neither };

struct DefectReport {
  unsigned m = 1;
  std::vector<std::pair<Vertex, double>> diagonal;
  bool expansion = false;   ///< d_m <= tol everywhere
  bool concave = false;     ///< (-1)^m d_m <= tol everywhere
  bool m_isometry = false;  ///< |d_m| <= tol everywhere
  bool isometry = false;    ///< |d_1| <= tol everywhere
  std::optional<Vertex> expansion_witness;
  std::optional<Vertex> concave_witness;
  DefectClass classification = DefectClass::neither;
};

DefectReport classify(const WeightSystem& ws, const TreeKernel& kernel, const Window& window,
                      unsigned m, double tol = 1e-9);

const char* to_string(DefectClass c);

/// Orthonormal basis of the vectors supported on Chi(v) that are orthogonal to
/// sum over u in Chi(v) of lambda_u e_u (|Chi(v)| - 1 vectors).
std::vector<SparseVector> ker_adjoint_local_basis(const WeightSystem& ws,
                                                  const TreeKernel& kernel, const Vertex& v);

struct WanderingReport {
  bool precondition_ok = false;
  BalanceResult balance;
  std::size_t kernel_vectors = 0;
  std::size_t pairs_checked = 0;
  double max_pair_residual = 0.0;        ///< max |<S^j f, S^k g>| over j < k
  double max_complement_residual = 0.0;  ///< max |<S^j f, S^n e_u>| over j < n
  bool pass = false;
};

WanderingReport wandering_orthogonality_check(const WeightSystem& ws, const TreeKernel& kernel,
                                              const Window& window, std::size_t n_max,
                                              double tol = 1e-10);

}  // namespace woldlab
