#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "woldlab/numeric.hpp"
#include "woldlab/operator.hpp"
#include "woldlab/tree.hpp"
#include "woldlab/tree_ops.hpp"
#include "woldlab/weights.hpp"

namespace woldlab {

struct SeriesConfig {
  std::size_t n_max = 10'000;
  double divergence_threshold = 1e6;
  std::size_t ratio_window = 50;
  double delta = 0.05;
  /// Analytic plugins stop extending once their tail bound is below this.
  double tail_target = 1e-7;
  std::size_t initial_terms = 64;
  bool use_plugins = true;
  std::size_t max_vertices = default_vertex_cap();
};

/// Visits every u in A(v, n) together with log(lambda^(n)(u) / lambda^(n)(v)).
/// log_moment_v must be log lambda^(n)(v).
void visit_generation_shell(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                            std::size_t n, const Vertex& ancestor_n, const Vertex& ancestor_n1,
                            double log_moment_v, std::size_t cap,
                            const std::function<void(const Vertex&, double)>& visit);

/// Partial sums of alpha(v) = sum_n sum_{u in A(v,n)} (lambda^(n)(u)/lambda^(n)(v))^2.
///
/// Holds non-owning references to the weight system and kernel; both must
/// outlive the object. Terms are appended by extend_to().
class AlphaPartial {
 public:
  AlphaPartial(const WeightSystem& ws, const TreeKernel& kernel, Vertex v,
               std::size_t cap = default_vertex_cap());

  void extend_to(std::size_t n);

  const Vertex& vertex() const noexcept { return v_; }
  /// Index of the last computed term.
  std::size_t last_index() const noexcept { return terms_.size() - 1; }
  const std::vector<double>& terms() const noexcept { return terms_; }
  const std::vector<double>& partial_sums() const noexcept { return partial_sums_; }
  /// |A(v, n)| per computed n.
  const std::vector<std::size_t>& shell_sizes() const noexcept { return shell_sizes_; }
  double sum() const noexcept { return sum_.value(); }
  double error_bound() const noexcept { return sum_.error_bound(); }

  const WeightSystem& weights() const noexcept { return *ws_; }
  const TreeKernel& kernel() const noexcept { return *kernel_; }

 private:
  const WeightSystem* ws_;
  const TreeKernel* kernel_;
  Vertex v_;
  std::size_t cap_;
  std::vector<Vertex> ancestors_;  // ancestors_[j] = par^<j>(v)
  CompensatedSum log_moment_v_;    // log lambda^(n)(v) for the next n
  std::vector<double> terms_;
  std::vector<double> partial_sums_;
  std::vector<std::size_t> shell_sizes_;
  CompensatedSum sum_;
};

AlphaPartial alpha_partial(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                           std::size_t n, std::size_t cap = default_vertex_cap());

enum class VerdictKind { converged, diverged, inconclusive };
enum class VerdictMethod { heuristic, analytic };

const char* to_string(VerdictKind k);
const char* to_string(VerdictMethod m);

/// Three-valued convergence decision. Converged carries a value and a
/// nonnegative tail bound (zero only for exact finite sums); Diverged carries
/// its evidence.
struct SeriesVerdict {
  std::string vertex;
  VerdictKind kind = VerdictKind::inconclusive;
  std::optional<double> value;
  std::optional<double> tail_bound;
  VerdictMethod method = VerdictMethod::heuristic;
  std::size_t terms_used = 0;
  nlohmann::json evidence = nlohmann::json::object();

  bool converged() const { return kind == VerdictKind::converged; }
  bool diverged() const { return kind == VerdictKind::diverged; }
  bool definitive() const {
    return method == VerdictMethod::analytic && kind != VerdictKind::inconclusive;
  }

  friend bool operator==(const SeriesVerdict&, const SeriesVerdict&) = default;
};

/// Family-specific exact decision procedure for alpha.
class AlphaPlugin {
 public:
  virtual ~AlphaPlugin() = default;
  virtual std::string name() const = 0;
  virtual bool applies(const WeightSystem& ws, const TreeKernel& kernel,
                       const Vertex& v) const = 0;
  /// A verdict once the computed terms suffice, otherwise nullopt (more terms
  /// wanted, or, when final is set, the plugin declines).
  virtual std::optional<SeriesVerdict> decide(const AlphaPartial& partial,
                                              const SeriesConfig& config, bool final) const = 0;
};

const std::vector<std::unique_ptr<AlphaPlugin>>& alpha_plugins();

/// Geometric-ratio / threshold rules applied to computed terms.
SeriesVerdict heuristic_verdict(const AlphaPartial& partial, const SeriesConfig& config,
                                bool final);

SeriesVerdict alpha_verdict(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                            const SeriesConfig& config = {});

struct GenerationInvarianceReport {
  GenerationMatch match;
  SeriesVerdict first;
  SeriesVerdict second;
  bool consistent = true;
};

/// Throws PreconditionError unless u and v share a generation.
GenerationInvarianceReport generation_invariance_check(const WeightSystem& ws,
                                                       const TreeKernel& kernel, const Vertex& u,
                                                       const Vertex& v,
                                                       const SeriesConfig& config = {});

/// Truncation of g_m = sum_n sum_{u in A(v_m,n)} lambda^(n)(u)/lambda^(n)(v_m) e_u
/// to n <= depth, or the zero vector when alpha(v_m) diverges.
struct HyperRangeVector {
  std::int64_t m = 0;
  Vertex anchor;
  std::size_t depth = 0;
  bool zero = false;
  SparseVector coefficients;
  double tail_mass_sq = 0.0;  ///< bound on the squared norm of the dropped part
  SeriesVerdict alpha;

  double tail_norm() const;
};

/// Throws PreconditionError when the alpha verdict at v_m is inconclusive.
HyperRangeVector g_vector(const WeightSystem& ws, const TreeKernel& kernel,
                          const PathSegment& path, std::int64_t m, std::size_t depth,
                          const SeriesConfig& config = {});

struct RecurrenceCheck {
  double residual = 0.0;
  double tail_budget = 0.0;
  double lambda_next = 0.0;
  bool pass = false;
};

/// ||S g_m - lambda_{v_{m+1}} g_{m+1}|| on the common truncation (g_{m+1} is
/// taken one generation deeper). Throws PreconditionError for divergent alpha.
RecurrenceCheck hyperrange_recurrence_check(const WeightSystem& ws, const TreeKernel& kernel,
                                            const PathSegment& path, std::int64_t m,
                                            std::size_t depth, double tol,
                                            const SeriesConfig& config = {});

struct RangeMembership {
  Tri status = Tri::inconclusive;
  SparseVector preimage;
  std::optional<std::pair<Vertex, Vertex>> witness;
  double max_deviation = 0.0;
};

/// Decides f in S^n(l2) by constancy of f / lambda^(n) on each Chi^<n>(v).
RangeMembership range_membership_check(const WeightSystem& ws, const TreeKernel& kernel,
                                       const SparseVector& f, std::size_t n, double tol = 1e-12,
                                       std::size_t cap = default_vertex_cap());

}  // namespace woldlab
