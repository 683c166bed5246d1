#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "woldlab/series.hpp"
#include "woldlab/weights.hpp"

namespace woldlab {

namespace {

SeriesVerdict converged(double value, double tail, nlohmann::json evidence) {
  SeriesVerdict v;
  v.kind = VerdictKind::converged;
  v.value = value;
  v.tail_bound = tail;
  v.evidence = std::move(evidence);
  return v;
}

SeriesVerdict diverged(nlohmann::json evidence) {
  SeriesVerdict v;
  v.kind = VerdictKind::diverged;
  v.evidence = std::move(evidence);
  return v;
}

/// alpha = 1 on the integer path: every generation is a single vertex.
class ZPathPlugin final : public AlphaPlugin {
 public:
  std::string name() const override { return "zpath-exact"; }
  bool applies(const WeightSystem&, const TreeKernel& kernel, const Vertex&) const override {
    return dynamic_cast<const BilateralPathTree*>(&kernel) != nullptr;
  }
  std::optional<SeriesVerdict> decide(const AlphaPartial&, const SeriesConfig&,
                                      bool) const override {
    return converged(1.0, 0.0, {{"rule", "single_vertex_generations"}});
  }
};

/// On T_{k,inf} a vertex (d, j) with d >= 1 only has siblings in shell d, and
/// spine vertices have none.
class KInfinityPlugin final : public AlphaPlugin {
 public:
  std::string name() const override { return "tkinf-finite"; }
  bool applies(const WeightSystem&, const TreeKernel& kernel, const Vertex&) const override {
    return dynamic_cast<const KInfinityTree*>(&kernel) != nullptr;
  }
  std::optional<SeriesVerdict> decide(const AlphaPartial& partial, const SeriesConfig&,
                                      bool) const override {
    const auto d = partial.vertex().first;
    const auto needed = static_cast<std::size_t>(std::max<std::int64_t>(d, 0));
    if (partial.last_index() < needed) return std::nullopt;
    return converged(partial.sum(), 0.0,
                     {{"rule", "finite_generations"}, {"last_nonempty_shell", needed}});
  }
};

/// Shared machinery for T_qb systems whose terms obey an exact law along the
/// spine. A vertex (n0, m) shares its shells beyond n0 with the spine vertex
/// (0, m - n0), up to the constant kappa = (lambda^(n0)(rep)/lambda^(n0)(v))^2.
class QuasiBrownianLawPlugin : public AlphaPlugin {
 public:
  std::optional<SeriesVerdict> decide(const AlphaPartial& partial, const SeriesConfig& config,
                                      bool final) const override {
    const Vertex v = partial.vertex();
    const std::int64_t n0 = v.first;
    const std::int64_t m0 = v.second - n0;
    const Vertex rep{0, m0};
    const auto n0u = static_cast<std::size_t>(n0);
    const double log_kappa =
        2.0 * (moment(partial.weights(), partial.kernel(), rep, n0u).log_value -
               moment(partial.weights(), partial.kernel(), v, n0u).log_value);
    const std::int64_t k0 = std::max<std::int64_t>({n0 + 1, 2 - m0, 1});
    const auto last = static_cast<std::int64_t>(partial.last_index());
    if (last < k0 + 3) return std::nullopt;

    double max_err = 0.0;
    for (std::int64_t k = k0; k <= last; ++k) {
      const double t = partial.terms()[static_cast<std::size_t>(k)];
      if (!(t > 0.0)) return std::nullopt;
      const double expected = log_kappa + log_term(partial.weights(), m0, k);
      max_err = std::max(max_err, std::fabs(std::log(t) - expected));
    }
    if (max_err > 1e-9) return std::nullopt;
    nlohmann::json ev{{"law_start", k0},
                      {"law_checked_terms", last - k0 + 1},
                      {"law_max_log_error", max_err},
                      {"log_kappa", log_kappa},
                      {"representative_m", m0}};
    return conclude(partial, config, final, m0, k0, log_kappa, std::move(ev));
  }

 protected:
  /// log t_k(rep) for k >= max(1, 2 - m0).
  virtual double log_term(const WeightSystem& ws, std::int64_t m0, std::int64_t k) const = 0;
  virtual std::optional<SeriesVerdict> conclude(const AlphaPartial& partial,
                                                const SeriesConfig& config, bool final,
                                                std::int64_t m0, std::int64_t k0,
                                                double log_kappa, nlohmann::json ev) const = 0;

  static bool on_tqb(const TreeKernel& kernel) {
    return dynamic_cast<const QuasiBrownianTree*>(&kernel) != nullptr;
  }
};

const QuadraticFamilyWeights* as_quadratic(const WeightSystem& ws) {
  return dynamic_cast<const QuadraticFamilyWeights*>(&ws);
}

const QuadraticFamilyWeights* dual_of_quadratic(const WeightSystem& ws) {
  const auto* d = dynamic_cast<const CauchyDualWeights*>(&ws);
  return d ? as_quadratic(d->base()) : nullptr;
}

/// t_k(rep) = p_{m0+k}(k-1) / max(m0, 1) >= 1 / max(m0, 1): divergent.
class QuadraticDivergencePlugin final : public QuasiBrownianLawPlugin {
 public:
  std::string name() const override { return "prop51-divergence"; }
  bool applies(const WeightSystem& ws, const TreeKernel& kernel, const Vertex&) const override {
    return on_tqb(kernel) && as_quadratic(ws) != nullptr;
  }

 protected:
  double log_term(const WeightSystem& ws, std::int64_t m0, std::int64_t k) const override {
    const auto& p = as_quadratic(ws)->params();
    return std::log(p.p(m0 + k, static_cast<double>(k - 1))) -
           std::log(static_cast<double>(std::max<std::int64_t>(m0, 1)));
  }
  std::optional<SeriesVerdict> conclude(const AlphaPartial&, const SeriesConfig&, bool,
                                        std::int64_t m0, std::int64_t, double log_kappa,
                                        nlohmann::json ev) const override {
    ev["rule"] = "comparison";
    ev["term_lower_bound"] =
        std::exp(log_kappa) / static_cast<double>(std::max<std::int64_t>(m0, 1));
    return diverged(std::move(ev));
  }
};

/// int_{y0}^inf dy / (1 + a y + b y^2) for a, b > 0 and y0 >= 0.
double quadratic_tail_integral(double a, double b, double y0) {
  const double disc = a * a - 4.0 * b;
  if (disc < 0.0) {
    const double s = std::sqrt(-disc);
    const double z = (2.0 * b * y0 + a) / s;
    return 2.0 / s * std::atan(1.0 / z);
  }
  if (disc == 0.0) {
    const double r = -a / (2.0 * b);
    return 1.0 / (b * (y0 - r));
  }
  const double s = std::sqrt(disc);
  const double r1 = (-a - s) / (2.0 * b);
  const double r2 = (-a + s) / (2.0 * b);
  return std::log((y0 - r1) / (y0 - r2)) / (b * (r2 - r1));
}

/// t_k(rep) * p_{m0+k}(k-1) = C with C = 4^(1-m0) for m0 <= 0, 1/m0 otherwise.
/// The tail is bracketed with integrals of the convex, decreasing 1/p.
class QuadraticDualPlugin final : public QuasiBrownianLawPlugin {
 public:
  std::string name() const override { return "prop51-dual-convergence"; }
  bool applies(const WeightSystem& ws, const TreeKernel& kernel, const Vertex&) const override {
    return on_tqb(kernel) && dual_of_quadratic(ws) != nullptr;
  }

 protected:
  static double log_c(std::int64_t m0) {
    return m0 <= 0 ? static_cast<double>(1 - m0) * std::log(4.0)
                   : -std::log(static_cast<double>(m0));
  }
  double log_term(const WeightSystem& ws, std::int64_t m0, std::int64_t k) const override {
    const auto& p = dual_of_quadratic(ws)->params();
    return log_c(m0) - std::log(p.p(m0 + k, static_cast<double>(k - 1)));
  }
  std::optional<SeriesVerdict> conclude(const AlphaPartial& partial, const SeriesConfig& config,
                                        bool final, std::int64_t m0, std::int64_t,
                                        double log_kappa, nlohmann::json ev) const override {
    const auto& params = dual_of_quadratic(partial.weights())->params();
    const auto n = static_cast<std::int64_t>(partial.last_index());
    const auto extent = std::max(params.a.table_extent(), params.b.table_extent());
    if (m0 + n + 1 <= extent) return std::nullopt;
    const double a = params.a.at(m0 + n + 1);
    const double b = params.b.at(m0 + n + 1);
    const double nd = static_cast<double>(n);
    // 1/p is convex on [y, inf) iff 3b^2 y^2 + 3ab y + a^2 - b >= 0.
    const double y = nd - 0.5;
    if (3.0 * b * b * y * y + 3.0 * a * b * y + a * a - b < 0.0) return std::nullopt;

    const double c = std::exp(log_kappa + log_c(m0));
    const double lower = c * (quadratic_tail_integral(a, b, nd) + 0.5 / (1.0 + a * nd + b * nd * nd));
    const double upper = c * quadratic_tail_integral(a, b, nd - 0.5);
    const double half_gap = 0.5 * (upper - lower);
    const double tail = std::max(half_gap, partial.error_bound());
    if (!final && tail > config.tail_target) return std::nullopt;

    ev["rule"] = "integral_bracket";
    ev["law_constant"] = c;
    ev["remainder_lower"] = lower;
    ev["remainder_upper"] = upper;
    return converged(partial.sum() + 0.5 * (lower + upper), tail, std::move(ev));
  }
};

/// Constant weights on T_qb: every weight ratio is 1, so t_k(rep) = |A(rep,k)| = 1.
class ConstantTqbPlugin final : public QuasiBrownianLawPlugin {
 public:
  std::string name() const override { return "constant-tqb"; }
  bool applies(const WeightSystem& ws, const TreeKernel& kernel, const Vertex&) const override {
    return on_tqb(kernel) && dynamic_cast<const ConstantWeights*>(&ws) != nullptr;
  }

 protected:
  double log_term(const WeightSystem&, std::int64_t, std::int64_t) const override { return 0.0; }
  std::optional<SeriesVerdict> conclude(const AlphaPartial&, const SeriesConfig&, bool,
                                        std::int64_t, std::int64_t, double log_kappa,
                                        nlohmann::json ev) const override {
    ev["rule"] = "constant_terms";
    ev["term_lower_bound"] = std::exp(log_kappa);
    return diverged(std::move(ev));
  }
};

/// Dual of constant weights on T_qb: t_k(rep) = 4^(k-1).
class ConstantTqbDualPlugin final : public QuasiBrownianLawPlugin {
 public:
  std::string name() const override { return "constant-tqb-dual"; }
  bool applies(const WeightSystem& ws, const TreeKernel& kernel, const Vertex&) const override {
    const auto* d = dynamic_cast<const CauchyDualWeights*>(&ws);
    return on_tqb(kernel) && d != nullptr &&
           dynamic_cast<const ConstantWeights*>(&d->base()) != nullptr;
  }

 protected:
  double log_term(const WeightSystem&, std::int64_t, std::int64_t k) const override {
    return static_cast<double>(k - 1) * std::log(4.0);
  }
  std::optional<SeriesVerdict> conclude(const AlphaPartial&, const SeriesConfig&, bool,
                                        std::int64_t, std::int64_t k0, double log_kappa,
                                        nlohmann::json ev) const override {
    ev["rule"] = "term_ratio";
    ev["term_ratio"] = 4.0;
    ev["term_lower_bound"] = std::exp(log_kappa + static_cast<double>(k0 - 1) * std::log(4.0));
    return diverged(std::move(ev));
  }
};

}  // namespace

const std::vector<std::unique_ptr<AlphaPlugin>>& alpha_plugins() {
  static const auto registry = [] {
    std::vector<std::unique_ptr<AlphaPlugin>> r;
    r.push_back(std::make_unique<ZPathPlugin>());
    r.push_back(std::make_unique<KInfinityPlugin>());
    r.push_back(std::make_unique<QuadraticDivergencePlugin>());
    r.push_back(std::make_unique<QuadraticDualPlugin>());
    r.push_back(std::make_unique<ConstantTqbPlugin>());
    r.push_back(std::make_unique<ConstantTqbDualPlugin>());
    return r;
  }();
  return registry;
}

}  // namespace woldlab
