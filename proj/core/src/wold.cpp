#include "woldlab/wold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "woldlab/error.hpp"

namespace woldlab {

const char* to_string(WoldOutcome o) {
  switch (o) {
    case WoldOutcome::has_wold_case_i:
      return "HasWold_case_i";
    case WoldOutcome::has_wold_case_ii:
      return "HasWold_case_ii";
    case WoldOutcome::no_wold:
      return "NoWold";
    case WoldOutcome::inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

const char* case_label(WoldOutcome o) {
  switch (o) {
    case WoldOutcome::has_wold_case_i:
      return "i";
    case WoldOutcome::has_wold_case_ii:
      return "ii";
    case WoldOutcome::no_wold:
      return "none";
    case WoldOutcome::inconclusive:
      return "unknown";
  }
  return "unknown";
}

WeightRelationReport case_ii_weight_relation(const WeightSystem& ws, const TreeKernel& kernel,
                                             const VertexSet& vertices,
                                             const AlphaTable& alpha, double tol) {
  auto lookup = [&](const Vertex& v) -> const SeriesVerdict& {
    const auto it = alpha.find(v);
    if (it == alpha.end()) throw PreconditionError("missing alpha value at " + kernel.format(v));
    if (!it->second.converged()) {
      throw PreconditionError("alpha at " + kernel.format(v) + " is not converged");
    }
    return it->second;
  };
  WeightRelationReport r;
  r.pass = true;
  r.definitive = true;
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) {
    const auto& av = lookup(v);
    const auto& ap = lookup(kernel.parent(v));
    const double a_v = *av.value;
    const double a_p = *ap.value;
    const double ratio = std::sqrt(a_p / a_v);
    const double residual = std::fabs(ws.weight(v) - ratio);
    const double allowed = tol + 0.5 * ratio *
                                     (ap.tail_bound.value_or(0.0) / a_p +
                                      av.tail_bound.value_or(0.0) / a_v);
    r.definitive = r.definitive && av.definitive() && ap.definitive();
    ++r.checked;
    if (residual > r.max_residual) r.max_residual = residual;
    if (residual - allowed > r.max_excess) r.max_excess = residual - allowed;
    if (residual > allowed && r.pass) {
      r.pass = false;
      r.witness = v;
    }
  }
  if (r.checked == 0) r.max_excess = 0.0;
  return r;
}

namespace {

bool contradicts(VerdictKind a, VerdictKind b) {
  return (a == VerdictKind::converged && b == VerdictKind::diverged) ||
         (a == VerdictKind::diverged && b == VerdictKind::converged);
}

void settle(WoldVerdict& out, WoldOutcome outcome, bool definitive, std::string reason) {
  if (definitive) {
    out.outcome = outcome;
  } else {
    out.outcome = WoldOutcome::inconclusive;
    out.likely = true;
    out.likely_outcome = outcome;
    reason += " (heuristic evidence only)";
  }
  out.reason = std::move(reason);
}

}  // namespace

WoldVerdict wold_verdict(const WeightsPtr& ws, const TreePtr& kernel, const Window& window,
                         const WoldConfig& config) {
  WoldVerdict out;
  const auto vertices = window_vertices(*kernel, window, config.series.max_vertices);
  const auto lower = min_shift_norm_sq(*ws, *kernel, window);
  out.min_norm_sq = lower.min_norm_sq;
  if (!(lower.min_norm_sq >= config.left_invertibility_eps)) {
    throw DomainError("left-invertibility proxy fails: ||S e_v||^2 = " +
                      std::to_string(lower.min_norm_sq) + " at " + kernel->format(lower.argmin));
  }

  out.alpha = alpha_verdict(*ws, *kernel, window.base, config.series);

  std::vector<Vertex> pool(vertices.begin(), vertices.end());
  std::mt19937_64 rng(config.seed);
  const std::size_t picks = std::min(config.spot_checks, pool.size());
  for (std::size_t i = 0; i < picks; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    const auto sv = alpha_verdict(*ws, *kernel, pool[i], config.series);
    out.spot_checks.push_back({pool[i], sv.kind, !contradicts(out.alpha.kind, sv.kind)});
  }
  for (const auto& sc : out.spot_checks) {
    if (!sc.agrees) {
      out.outcome = WoldOutcome::inconclusive;
      out.reason = "alpha verdicts disagree between " + kernel->format(window.base) + " and " +
                   kernel->format(sc.vertex);
      out.witnesses.push_back(kernel->format(sc.vertex));
      return out;
    }
  }

  if (out.alpha.diverged()) {
    const auto dual = cauchy_dual(ws, kernel, config.left_invertibility_eps);
    out.dual_alpha = alpha_verdict(*dual, *kernel, window.base, config.series);
    const bool definitive = out.alpha.definitive() && out.dual_alpha->definitive();
    if (out.dual_alpha->diverged()) {
      settle(out, WoldOutcome::has_wold_case_i, definitive,
             "alpha and dual alpha both diverge");
    } else if (out.dual_alpha->converged()) {
      settle(out, WoldOutcome::no_wold, definitive,
             "alpha diverges but dual alpha converges: analytic without the wandering "
             "subspace property");
    } else {
      out.outcome = WoldOutcome::inconclusive;
      out.reason = "dual alpha is inconclusive";
    }
    return out;
  }

  if (!out.alpha.converged()) {
    out.outcome = WoldOutcome::inconclusive;
    out.reason = "alpha is inconclusive at the window base";
    return out;
  }

  AlphaTable table;
  for (const auto& v : vertices) {
    for (const Vertex& u : {v, kernel->parent(v)}) {
      if (table.count(u) == 0) table.emplace(u, alpha_verdict(*ws, *kernel, u, config.series));
    }
  }
  for (const auto& [u, sv] : table) {
    if (!sv.converged()) {
      out.outcome = WoldOutcome::inconclusive;
      out.reason = "alpha at " + kernel->format(u) + " is " + to_string(sv.kind) +
                   " while the base converges";
      out.witnesses.push_back(kernel->format(u));
      return out;
    }
  }
  out.weight_relation = case_ii_weight_relation(*ws, *kernel, vertices, table, config.tol);
  out.balance = is_balanced(*ws, *kernel, window, config.generation_bound, config.tol);
  const bool definitive = out.alpha.definitive() && out.weight_relation->definitive;

  if (!out.weight_relation->pass) {
    out.witnesses.push_back(kernel->format(*out.weight_relation->witness));
    settle(out, WoldOutcome::no_wold, definitive, "weight relation fails");
    return out;
  }
  if (out.balance->status == Tri::no) {
    out.witnesses.push_back(kernel->format(out.balance->witness->first));
    out.witnesses.push_back(kernel->format(out.balance->witness->second));
    settle(out, WoldOutcome::no_wold, definitive, "weights are not balanced");
    return out;
  }
  if (out.balance->status != Tri::yes) {
    out.outcome = WoldOutcome::inconclusive;
    out.reason = "balancedness undecided";
    return out;
  }
  settle(out, WoldOutcome::has_wold_case_ii, definitive,
         "alpha converges, weight relation holds and weights are balanced");
  return out;
}

namespace {

/// Restriction of f to the window coordinates.
SparseVector restrict_to(const SparseVector& f, const VertexSet& window) {
  SparseVector out;
  for (const auto& [v, x] : f.entries()) {
    if (set_contains(window, v)) out.set(v, x);
  }
  return out;
}

std::size_t numeric_rank(std::vector<SparseVector> vs, double eps) {
  std::vector<SparseVector> basis;
  for (auto& v : vs) {
    const double n0 = v.norm();
    if (n0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v.axpy(-dot(q, v), q);
    }
    const double n = v.norm();
    if (n > eps * n0) {
      v *= 1.0 / n;
      basis.push_back(std::move(v));
    }
  }
  return basis.size();
}

}  // namespace

DecompositionReport decomposition_report(const WeightsPtr& ws, const TreePtr& kernel,
                                         const Window& window, std::size_t n_max, double tol,
                                         const WoldConfig& config) {
  const auto verdict = wold_verdict(ws, kernel, window, config);
  if (verdict.outcome != WoldOutcome::has_wold_case_ii) {
    throw PreconditionError(std::string("decomposition report needs case (ii), verdict is ") +
                            to_string(verdict.outcome));
  }
  DecompositionReport r;
  const auto vertices = window_vertices(*kernel, window, config.series.max_vertices);
  r.window_dimension = vertices.size();

  const auto span = static_cast<std::int64_t>(window.depth_up + window.depth_down);
  const auto path = bilateral_path(*kernel, window.base, -span - 1, span + 1);
  const std::size_t depth = n_max + static_cast<std::size_t>(2 * span + 2);

  std::map<std::int64_t, HyperRangeVector> g;
  for (std::int64_t m = -span - 1; m <= span + 1; ++m) {
    g.emplace(m, g_vector(*ws, *kernel, path, m, depth, config.series));
  }

  for (std::int64_t m = -span; m <= span; ++m) {
    const auto& gm = g.at(m);
    const auto& next = g.at(m + 1);
    const auto& prev = g.at(m - 1);
    const double lam_next = ws->weight(path.at(m + 1));
    const double lam_m = ws->weight(path.at(m));

    // Depth-matched truncations keep the identities exact on the support.
    auto truncate = [&](const HyperRangeVector& h, std::size_t keep) {
      SparseVector out;
      for (const auto& [u, x] : h.coefficients.entries()) {
        const auto level = same_generation(*kernel, u, h.anchor, depth + 2);
        if (level.found && level.level <= keep) out.set(u, x);
      }
      return out;
    };
    const auto gm_d = truncate(gm, depth - 1);
    const auto shifted = apply_shift(*ws, *kernel, gm_d);
    const double shift_res = (shifted - lam_next * truncate(next, depth)).norm();
    r.max_shift_residual = std::max(r.max_shift_residual, shift_res);

    const double c_m = shift_norm_sq(*ws, *kernel, path.at(m - 1), 1) / lam_m;
    const auto adj = apply_adjoint(*ws, *kernel, truncate(gm, depth));
    const double adj_res = (adj - c_m * truncate(prev, depth - 1)).norm();
    r.max_adjoint_residual = std::max(r.max_adjoint_residual, adj_res);

    const double full_m = *gm.alpha.value;
    const double full_prev = *prev.alpha.value;
    r.max_adjoint_cross_check =
        std::max(r.max_adjoint_cross_check, std::fabs(c_m - full_m / full_prev * lam_m));

    const double unit = std::fabs(std::sqrt(lam_next * lam_next * *next.alpha.value) -
                                  std::sqrt(full_m));
    r.max_unitarity_defect = std::max(r.max_unitarity_defect, unit);
  }

  // Blocks: each g_m alone, and each shift level j of the wandering vectors.
  struct Item {
    SparseVector vec;
    std::int64_t block;
    double tail;
  };
  std::vector<Item> items;
  for (std::int64_t m = -span; m <= span; ++m) {
    const auto& gm = g.at(m);
    items.push_back({gm.coefficients, -1000 - m, gm.tail_norm()});
  }
  r.hyper_range_vectors = items.size();
  for (const auto& v : vertices) {
    for (auto f : ker_adjoint_local_basis(*ws, *kernel, v)) {
      for (std::size_t j = 0; j <= n_max; ++j) {
        items.push_back({f, static_cast<std::int64_t>(j), 0.0});
        ++r.wandering_vectors;
        f = apply_shift(*ws, *kernel, f);
      }
    }
  }
  double budget = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].block == items[j].block) continue;
      const double ni = items[i].vec.norm();
      const double nj = items[j].vec.norm();
      if (ni == 0.0 || nj == 0.0) continue;
      const double g_ij = std::fabs(dot(items[i].vec, items[j].vec)) / (ni * nj);
      r.max_block_residual = std::max(r.max_block_residual, g_ij);
      budget = std::max(budget, items[i].tail / ni + items[j].tail / nj);
    }
  }

  std::vector<SparseVector> restricted;
  for (const auto& it : items) restricted.push_back(restrict_to(it.vec, vertices));
  r.span_rank = numeric_rank(std::move(restricted), 1e-8);

  double g_tail = 0.0;
  for (const auto& [m, h] : g) g_tail = std::max(g_tail, h.tail_norm());
  r.pass = r.max_shift_residual <= tol + 2.0 * g_tail &&
           r.max_adjoint_residual <= tol + 2.0 * g_tail && r.max_adjoint_cross_check <= tol &&
           r.max_unitarity_defect <= tol + 2.0 * g_tail && r.max_block_residual <= tol + budget;
  return r;
}

}  // namespace woldlab
