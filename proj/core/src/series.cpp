#include "woldlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "woldlab/error.hpp"

namespace woldlab {

void visit_generation_shell(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                            std::size_t n, const Vertex& ancestor_n, const Vertex& ancestor_n1,
                            double log_moment_v, std::size_t cap,
                            const std::function<void(const Vertex&, double)>& visit) {
  if (n == 0) {
    visit(v, 0.0);
    return;
  }
  struct Frame {
    Vertex u;
    std::size_t depth;  // generations below ancestor_n
    double log_w;       // log of the weight product from u up to ancestor_n
  };
  std::vector<Frame> stack;
  std::vector<Vertex> kids;
  kernel.children_into(ancestor_n, kids);
  for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
    if (*it != ancestor_n1) stack.push_back({*it, 1, ws.log_weight(*it)});
  }
  std::size_t visited = stack.size();
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == n) {
      visit(f.u, f.log_w - log_moment_v);
      continue;
    }
    kids.clear();
    kernel.children_into(f.u, kids);
    visited += kids.size();
    if (visited > cap) {
      throw ResourceLimitError("generation shell A(v," + std::to_string(n) +
                               ") exceeds vertex cap " + std::to_string(cap));
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      stack.push_back({*it, f.depth + 1, f.log_w + ws.log_weight(*it)});
    }
  }
}

// --- AlphaPartial ----------------------------------------------------------

AlphaPartial::AlphaPartial(const WeightSystem& ws, const TreeKernel& kernel, Vertex v,
                           std::size_t cap)
    : ws_(&ws), kernel_(&kernel), v_(v), cap_(cap) {
  ancestors_.push_back(v);
  terms_.push_back(1.0);
  partial_sums_.push_back(1.0);
  shell_sizes_.push_back(1);
  sum_.add(1.0);
}

void AlphaPartial::extend_to(std::size_t n) {
  while (terms_.size() <= n) {
    const std::size_t k = terms_.size();
    log_moment_v_.add(ws_->log_weight(ancestors_[k - 1]));
    ancestors_.push_back(kernel_->parent(ancestors_[k - 1]));
    CompensatedSum term;
    std::size_t count = 0;
    visit_generation_shell(*ws_, *kernel_, v_, k, ancestors_[k], ancestors_[k - 1],
                           log_moment_v_.value(), cap_, [&](const Vertex&, double log_ratio) {
                             term.add(std::exp(2.0 * log_ratio));
                             ++count;
                           });
    terms_.push_back(term.value());
    shell_sizes_.push_back(count);
    sum_.add(term.value());
    partial_sums_.push_back(sum_.value());
  }
}

AlphaPartial alpha_partial(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                           std::size_t n, std::size_t cap) {
  AlphaPartial p(ws, kernel, v, cap);
  p.extend_to(n);
  return p;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::converged:
      return "converged";
    case VerdictKind::diverged:
      return "diverged";
    case VerdictKind::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(VerdictMethod m) {
  return m == VerdictMethod::analytic ? "analytic" : "heuristic";
}

// --- verdicts --------------------------------------------------------------

SeriesVerdict heuristic_verdict(const AlphaPartial& partial, const SeriesConfig& config,
                                bool final) {
  SeriesVerdict out;
  out.vertex = partial.kernel().format(partial.vertex());
  out.method = VerdictMethod::heuristic;
  out.terms_used = partial.last_index() + 1;
  const double sum = partial.sum();
  const auto& terms = partial.terms();
  const auto& shells = partial.shell_sizes();
  out.evidence["partial_sum"] = sum;

  if (sum > config.divergence_threshold) {
    out.kind = VerdictKind::diverged;
    out.evidence["rule"] = "threshold";
    out.evidence["threshold"] = config.divergence_threshold;
    return out;
  }

  std::size_t empty_run = 0;
  for (auto it = shells.rbegin(); it != shells.rend() && *it == 0; ++it) ++empty_run;
  if (config.ratio_window > 0 && empty_run >= config.ratio_window) {
    out.kind = VerdictKind::converged;
    out.value = sum;
    out.tail_bound = 0.0;
    out.evidence["rule"] = "empty_generations";
    out.evidence["empty_run"] = empty_run;
    return out;
  }

  std::vector<double> recent;
  for (auto it = terms.rbegin(); it != terms.rend() && recent.size() < config.ratio_window;
       ++it) {
    if (*it > 0.0) recent.push_back(*it);
  }
  if (recent.size() < std::max<std::size_t>(config.ratio_window, 2)) {
    out.evidence["rule"] = "insufficient_terms";
    return out;
  }
  // recent is newest first; fitted per-step ratio in log space.
  const double log_r = (std::log(recent.front()) - std::log(recent.back())) /
                       static_cast<double>(recent.size() - 1);
  const double r = std::exp(log_r);
  const double t_last = recent.front();
  double t_min = recent.front();
  for (double t : recent) t_min = std::min(t_min, t);
  out.evidence["ratio"] = r;
  out.evidence["last_term"] = t_last;

  if (r < 1.0 - config.delta) {
    const double tail = t_last * r / (1.0 - r);
    if (final || tail <= config.tail_target * std::max(1.0, sum)) {
      out.kind = VerdictKind::converged;
      out.value = sum + tail;
      out.tail_bound = std::max(tail, partial.error_bound());
      out.evidence["rule"] = "geometric_ratio";
      return out;
    }
  } else if (final && log_r >= 0.0) {
    out.kind = VerdictKind::diverged;
    out.evidence["rule"] = "terms_bounded_below";
    out.evidence["term_lower_bound"] = t_min;
    return out;
  }
  out.evidence["rule"] = "undecided";
  return out;
}

SeriesVerdict alpha_verdict(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& v,
                            const SeriesConfig& config) {
  std::vector<const AlphaPlugin*> plugins;
  if (config.use_plugins) {
    for (const auto& p : alpha_plugins()) {
      if (p->applies(ws, kernel, v)) plugins.push_back(p.get());
    }
  }
  AlphaPartial partial(ws, kernel, v, config.max_vertices);
  std::size_t n = std::min(std::max<std::size_t>(config.initial_terms, 1), config.n_max);
  for (;;) {
    partial.extend_to(n);
    const bool final = n >= config.n_max;
    for (const auto* p : plugins) {
      if (auto d = p->decide(partial, config, final)) {
        d->vertex = kernel.format(v);
        d->method = VerdictMethod::analytic;
        d->terms_used = partial.last_index() + 1;
        d->evidence["plugin"] = p->name();
        d->evidence["partial_sum"] = partial.sum();
        return *d;
      }
    }
    auto h = heuristic_verdict(partial, config, final);
    if (h.kind != VerdictKind::inconclusive || final) return h;
    n = std::min(2 * n, config.n_max);
  }
}

GenerationInvarianceReport generation_invariance_check(const WeightSystem& ws,
                                                       const TreeKernel& kernel, const Vertex& u,
                                                       const Vertex& v,
                                                       const SeriesConfig& config) {
  GenerationInvarianceReport r;
  r.match = same_generation(kernel, u, v);
  if (!r.match.found) {
    throw PreconditionError(kernel.format(u) + " and " + kernel.format(v) +
                            " are not in the same generation");
  }
  r.first = alpha_verdict(ws, kernel, u, config);
  r.second = u == v ? r.first : alpha_verdict(ws, kernel, v, config);
  r.consistent = !((r.first.converged() && r.second.diverged()) ||
                   (r.first.diverged() && r.second.converged()));
  return r;
}

// --- hyper-range vectors ---------------------------------------------------

double HyperRangeVector::tail_norm() const { return std::sqrt(std::max(0.0, tail_mass_sq)); }

HyperRangeVector g_vector(const WeightSystem& ws, const TreeKernel& kernel,
                          const PathSegment& path, std::int64_t m, std::size_t depth,
                          const SeriesConfig& config) {
  HyperRangeVector g;
  g.m = m;
  g.anchor = path.at(m);
  g.depth = depth;
  g.alpha = alpha_verdict(ws, kernel, g.anchor, config);
  if (g.alpha.diverged()) {
    g.zero = true;
    return g;
  }
  if (!g.alpha.converged()) {
    throw PreconditionError("alpha at " + kernel.format(g.anchor) +
                            " is inconclusive; g-vector undefined");
  }
  AlphaPartial partial(ws, kernel, g.anchor, config.max_vertices);
  partial.extend_to(depth);
  CompensatedSum log_moment;
  Vertex below = g.anchor;
  g.coefficients.set(g.anchor, 1.0);
  for (std::size_t n = 1; n <= depth; ++n) {
    log_moment.add(ws.log_weight(below));
    const Vertex top = kernel.parent(below);
    visit_generation_shell(ws, kernel, g.anchor, n, top, below, log_moment.value(),
                           config.max_vertices, [&](const Vertex& u, double log_ratio) {
                             g.coefficients.set(u, std::exp(log_ratio));
                           });
    below = top;
  }
  const double total = *g.alpha.value + g.alpha.tail_bound.value_or(0.0);
  g.tail_mass_sq = std::max(0.0, total - partial.sum());
  return g;
}

RecurrenceCheck hyperrange_recurrence_check(const WeightSystem& ws, const TreeKernel& kernel,
                                            const PathSegment& path, std::int64_t m,
                                            std::size_t depth, double tol,
                                            const SeriesConfig& config) {
  if (!path.covers(m + 1)) throw PreconditionError("path segment does not cover m + 1");
  const auto gm = g_vector(ws, kernel, path, m, depth, config);
  const auto gn = g_vector(ws, kernel, path, m + 1, depth + 1, config);
  if (gm.zero || gn.zero) throw PreconditionError("recurrence check requires finite alpha");
  RecurrenceCheck r;
  r.lambda_next = ws.weight(path.at(m + 1));
  const auto diff = apply_shift(ws, kernel, gm.coefficients, config.max_vertices) -
                    r.lambda_next * gn.coefficients;
  r.residual = diff.norm();
  double norm_s = 0.0;
  for (const auto& [v, x] : gm.coefficients.entries()) {
    norm_s = std::max(norm_s, shift_norm_sq(ws, kernel, v, 1, config.max_vertices));
  }
  r.tail_budget = std::sqrt(norm_s) * gm.tail_norm() + r.lambda_next * gn.tail_norm();
  r.pass = r.residual <= tol + r.tail_budget;
  return r;
}

RangeMembership range_membership_check(const WeightSystem& ws, const TreeKernel& kernel,
                                       const SparseVector& f, std::size_t n, double tol,
                                       std::size_t cap) {
  RangeMembership r;
  if (f.empty()) {
    r.status = Tri::yes;
    return r;
  }
  if (n == 0) {
    r.status = Tri::yes;
    r.preimage = f;
    return r;
  }
  std::map<Vertex, bool> roots;
  for (const auto& [u, x] : f.entries()) roots[par_n(kernel, u, n)] = true;

  r.status = Tri::yes;
  for (const auto& [v, unused] : roots) {
    std::optional<std::pair<Vertex, double>> ref;
    struct Frame {
      Vertex u;
      std::size_t depth;
      double log_w;
    };
    std::vector<Frame> stack{{v, 0, 0.0}};
    std::vector<Vertex> kids;
    std::size_t visited = 0;
    while (!stack.empty()) {
      const Frame fr = stack.back();
      stack.pop_back();
      if (fr.depth == n) {
        const double ratio = f.get(fr.u) / std::exp(fr.log_w);
        if (!ref) {
          ref.emplace(fr.u, ratio);
          continue;
        }
        const double dev = std::fabs(ratio - ref->second);
        r.max_deviation = std::max(r.max_deviation, dev);
        if (dev > tol * std::max({1.0, std::fabs(ratio), std::fabs(ref->second)}) &&
            !r.witness) {
          r.witness = std::make_pair(ref->first, fr.u);
          r.status = Tri::no;
        }
        continue;
      }
      kids.clear();
      kernel.children_into(fr.u, kids);
      visited += kids.size();
      if (visited > cap) {
        throw ResourceLimitError("Chi^<" + std::to_string(n) + "> exceeds vertex cap " +
                                 std::to_string(cap));
      }
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        stack.push_back({*it, fr.depth + 1, fr.log_w + ws.log_weight(*it)});
      }
    }
    if (ref) r.preimage.set(v, ref->second);
  }
  if (r.status != Tri::yes) r.preimage = SparseVector{};
  return r;
}

}  // namespace woldlab
