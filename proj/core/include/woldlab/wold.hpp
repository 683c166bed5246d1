#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "woldlab/operator.hpp"
#include "woldlab/series.hpp"
#include "woldlab/tree.hpp"
#include "woldlab/tree_ops.hpp"
#include "woldlab/weights.hpp"

namespace woldlab {

enum class WoldOutcome { has_wold_case_i, has_wold_case_ii, no_wold, inconclusive };

const char* to_string(WoldOutcome o);
/// "i", "ii", "none" or "unknown".
const char* case_label(WoldOutcome o);

struct WoldConfig {
  SeriesConfig series;
  double tol = 1e-9;
  std::size_t generation_bound = kDefaultGenerationBound;
  std::size_t spot_checks = 8;
  std::uint64_t seed = 0;
  double left_invertibility_eps = 1e-8;
};

struct WeightRelationReport {
  double max_residual = 0.0;
  double max_excess = 0.0;  ///< max of residual - allowed, <= 0 on pass
  std::optional<Vertex> witness;
  std::size_t checked = 0;
  bool pass = false;
  bool definitive = false;
};

using AlphaTable = std::map<Vertex, SeriesVerdict>;

/// max over window v of |lambda_v - sqrt(alpha(par v) / alpha(v))|, with
/// tol widened by the propagated alpha tail bounds. Throws PreconditionError
/// if a required alpha value is missing or not converged.
WeightRelationReport case_ii_weight_relation(const WeightSystem& ws, const TreeKernel& kernel,
                                             const VertexSet& vertices,
                                             const AlphaTable& alpha, double tol);

struct SpotCheck {
  Vertex vertex;
  VerdictKind kind = VerdictKind::inconclusive;
  bool agrees = true;
};

struct WoldVerdict {
  WoldOutcome outcome = WoldOutcome::inconclusive;
  std::string reason;
  bool likely = false;  ///< outcome rests on heuristic evidence only
  std::optional<WoldOutcome> likely_outcome;
  double min_norm_sq = 0.0;
  SeriesVerdict alpha;
  std::optional<SeriesVerdict> dual_alpha;
  std::optional<WeightRelationReport> weight_relation;
  std::optional<BalanceResult> balance;
  std::vector<SpotCheck> spot_checks;
  std::vector<std::string> witnesses;
};

WoldVerdict wold_verdict(const WeightsPtr& ws, const TreePtr& kernel, const Window& window,
                         const WoldConfig& config = {});

struct DecompositionReport {
  std::size_t hyper_range_vectors = 0;
  std::size_t wandering_vectors = 0;
  std::size_t window_dimension = 0;
  std::size_t span_rank = 0;
  double max_shift_residual = 0.0;     ///< ||S g_m - lambda g_{m+1}||
  double max_adjoint_residual = 0.0;   ///< ||S* g_m - c_m g_{m-1}||
  double max_adjoint_cross_check = 0.0;  ///< |c_m - (||g_m||^2/||g_{m-1}||^2) lambda_{v_m}|
  double max_unitarity_defect = 0.0;   ///< | ||S g_m|| - ||g_m|| |
  double max_block_residual = 0.0;     ///< largest off-block Gram entry
  bool pass = false;
};

/// Throws PreconditionError unless the verdict is case (ii).
DecompositionReport decomposition_report(const WeightsPtr& ws, const TreePtr& kernel,
                                         const Window& window, std::size_t n_max, double tol,
                                         const WoldConfig& config = {});

}  // namespace woldlab
