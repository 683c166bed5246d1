#include <cmath>
#include <numbers>
#include <vector>

#include <woldlab/error.hpp>
#include <woldlab/families.hpp>
#include <woldlab/operator.hpp>
#include <woldlab/wold.hpp>

#include "commands.hpp"

namespace woldlab::cli {

using nlohmann::json;

namespace {

struct Row {
  std::string check;
  bool pass = false;
  json detail;
};

/// Tracks the worst deviation of a sweep and where it happened.
struct Sweep {
  explicit Sweep(double t) : tol(t) {}

  double tol;
  double max_err = 0.0;
  std::optional<std::string> first_failure;
  std::size_t checked = 0;

  void add(double err, const std::string& where) {
    ++checked;
    max_err = std::max(max_err, err);
    if (!(err <= tol) && !first_failure) first_failure = where;
  }
  bool ok() const { return !first_failure; }
  json detail() const {
    return {{"checked", checked},
            {"max_error", max_err},
            {"tolerance", tol},
            {"first_failure", first_failure ? json(*first_failure) : json(nullptr)}};
  }
};

double rel(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

std::string at(std::int64_t n, std::int64_t m) {
  return "(" + std::to_string(n) + "," + std::to_string(m) + ")";
}

}  // namespace

int cmd_repro(const RunConfig& cfg, std::ostream& out, std::ostream& diff) {
  const bool ex52 = cfg.repro_item == "ex52";
  if (!ex52 && cfg.repro_item != "prop51") {
    throw ParseError("repro item must be prop51 or ex52, got '" + cfg.repro_item + "'");
  }
  PolyFamilyParams params;
  if (!ex52) {
    params.a = CoefficientRule::parse(cfg.rule_a);
    params.b = CoefficientRule::parse(cfg.rule_b);
  }
  const TreePtr tree = std::make_shared<QuasiBrownianTree>();
  WeightsPtr ws = std::make_shared<QuadraticFamilyWeights>(params, ex52 ? "ex52" : "prop51");
  if (cfg.mutate) {
    const auto [v, factor] = parse_mutation(*tree, *cfg.mutate);
    ws = std::make_shared<MutatedWeights>(ws, v, factor);
  }
  const auto dual = cauchy_dual(ws, tree);
  const auto& p = params;
  const auto lam = [&](std::int64_t n, std::int64_t m) { return ws->weight({n, m}); };

  SeriesConfig series;
  series.n_max = std::min<std::size_t>(cfg.n_max, 2048);
  const Window window{{0, 0}, 3, 3};
  std::vector<Row> rows;

  constexpr std::int64_t kM = 20;
  constexpr std::int64_t kN = 50;
  {
    const auto h = check_family_hypotheses(p, -kM, kM);
    rows.push_back({"hypotheses", h.holds,
                    {{"positive_coefficients", h.positive_coefficients},
                     {"sup_a", h.sup_a}, {"sup_b", h.sup_b}, {"inf_b", h.inf_b},
                     {"certified_for_all_m", h.window_certified}}});
  }
  {
    double sup_p1 = 0.0;
    for (std::int64_t m = -kM; m <= kM; ++m) sup_p1 = std::max(sup_p1, p.p(m, 1.0));
    const double bound = std::max({2.0, 4.0, sup_p1});
    double sup = 0.0;
    std::string arg;
    for (std::int64_t n = 0; n <= kN; ++n) {
      for (std::int64_t m = -kM; m <= kM; ++m) {
        const double s = shift_norm_sq(*ws, *tree, {n, m}, 1);
        if (s > sup) {
          sup = s;
          arg = at(n, m);
        }
      }
    }
    rows.push_back({"bounded", sup <= bound * (1.0 + 1e-12),
                    {{"sup_norm_sq", sup}, {"argmax", arg}, {"certificate", bound}}});
  }
  {
    Sweep sw(1e-12);
    for (std::int64_t m = -5; m <= 10; ++m) {
      sw.add(std::fabs(shift_norm_sq(*ws, *tree, {0, m}, 1) - (m >= 2 ? 1.0 : 2.0)), at(0, m));
    }
    rows.push_back({"norm_spine", sw.ok(), sw.detail()});
  }
  {
    Sweep sw(1e-12);
    for (std::int64_t m = -kM; m <= kM; ++m) {
      for (std::int64_t n = 1; n <= kN; ++n) {
        for (std::size_t k = 0; k <= 5; ++k) {
          const double want = p.p(m, static_cast<double>(n + static_cast<std::int64_t>(k) - 1)) /
                              p.p(m, static_cast<double>(n - 1));
          sw.add(rel(shift_norm_sq(*ws, *tree, {n, m}, k), want),
                 at(n, m) + " k=" + std::to_string(k));
        }
      }
    }
    rows.push_back({"norm_closed_form", sw.ok(), sw.detail()});
  }
  {
    Sweep sw(1e-12);
    for (std::int64_t m = 1; m <= kM; ++m) {
      const double md = static_cast<double>(m);
      sw.add(rel(dual->weight({0, m}), std::sqrt(md / (md + 1.0))), at(0, m));
      if (m >= 2) sw.add(rel(dual->weight({1, m}), 1.0 / std::sqrt(md)), at(1, m));
    }
    for (std::int64_t m = -kM; m <= kM; ++m) {
      for (std::int64_t n = 2; n <= kN; ++n) {
        sw.add(rel(dual->weight({n, m}), 1.0 / lam(n, m)), at(n, m));
      }
    }
    rows.push_back({"dual_closed_form", sw.ok(), sw.detail()});
  }
  {
    Sweep sw(1e-12);
    const auto back = cauchy_dual(dual, tree);
    for (const auto& v : window_vertices(*tree, window)) {
      sw.add(rel(back->weight(v), ws->weight(v)), at(v.first, v.second));
    }
    rows.push_back({"dual_involution", sw.ok(), sw.detail()});
  }
  {
    double min_norm = std::numeric_limits<double>::infinity();
    std::string arg;
    for (std::int64_t n = 0; n <= kN; ++n) {
      for (std::int64_t m = -kM; m <= kM; ++m) {
        const double s = shift_norm_sq(*ws, *tree, {n, m}, 1);
        if (s < min_norm) {
          min_norm = s;
          arg = at(n, m);
        }
      }
    }
    rows.push_back({"norm_increasing", min_norm >= 1.0 - 1e-12,
                    {{"min_norm_sq", min_norm}, {"argmin", arg}}});
  }
  {
    Sweep sw(1e-9);
    for (std::int64_t m = -kM; m <= kM; ++m) {
      for (std::int64_t n = 1; n <= kM; ++n) {
        sw.add(std::fabs(defect_diagonal(*ws, *tree, {n, m}, 3)), at(n, m));
      }
    }
    rows.push_back({"defect3_off_spine_zero", sw.ok(), sw.detail()});
  }
  {
    Sweep sw(1e-9);
    const auto a = [&](std::int64_t m) { return p.a.at(m); };
    const auto b = [&](std::int64_t m) { return p.b.at(m); };
    for (std::int64_t m = -kM; m <= 100; ++m) {
      double want = 0.0;
      if (m >= 4) {
        want = (a(m) - a(m - 1) - b(m) - b(m - 1)) / static_cast<double>(m);
      } else if (m == 3) {
        want = (a(3) - a(2) - b(3) - b(2) - 1.0) / 3.0;
      } else if (m == 2) {
        want = (a(2) - a(1) + 1.0 - b(2) - b(1)) / 2.0;
      } else {
        want = a(m) - a(m - 1) - b(m) - b(m - 1);
      }
      sw.add(std::fabs(defect_diagonal(*ws, *tree, {0, m}, 3) - want), at(0, m));
    }
    rows.push_back({"defect3_spine_closed_form", sw.ok(), sw.detail()});
  }
  if (ex52) {
    const auto r = classify(*ws, *tree, window, 3, 1e-9);
    rows.push_back({"three_expansion", r.expansion,
                    {{"classification", to_string(r.classification)},
                     {"witness", r.expansion_witness ? json(at(r.expansion_witness->first,
                                                               r.expansion_witness->second))
                                                     : json(nullptr)}}});
  }

  const auto alpha = alpha_verdict(*ws, *tree, {0, 0}, series);
  rows.push_back({"alpha_diverges", alpha.diverged(),
                  {{"verdict", to_string(alpha.kind)}, {"method", to_string(alpha.method)},
                   {"partial_sum", alpha.evidence.value("partial_sum", 0.0)}}});
  const auto dual00 = alpha_verdict(*dual, *tree, {0, 0}, series);
  rows.push_back({"dual_alpha_converges", dual00.converged(),
                  {{"verdict", to_string(dual00.kind)}, {"method", to_string(dual00.method)},
                   {"value", dual00.value ? json(*dual00.value) : json(nullptr)},
                   {"tail_bound", dual00.tail_bound ? json(*dual00.tail_bound) : json(nullptr)}}});
  {
    // The displayed series sum_{n>=1} 1/p_{n+1}(n-1) is alpha'((0,1)) - 1.
    const auto dual01 = alpha_verdict(*dual, *tree, {0, 1}, series);
    constexpr std::int64_t kTerms = 1'000'000;
    CompensatedSum direct;
    for (std::int64_t n = 1; n <= kTerms; ++n) {
      direct.add(1.0 / p.p(n + 1, static_cast<double>(n - 1)));
    }
    const double oracle_tail = 1.0 / (p.b.inf() * static_cast<double>(kTerms - 1));
    const double c = 2.0 * p.b.inf();
    const double x = std::sqrt(2.0 / c);
    const double comparison =
        1.0 + 0.5 * (std::numbers::pi * x / std::tanh(std::numbers::pi * x) - 1.0);
    bool ok = dual01.converged();
    json d{{"verdict", to_string(dual01.kind)}, {"oracle_direct_sum", direct.value()},
           {"oracle_tail_bound", oracle_tail}, {"comparison_bound", comparison}, {"c", c}};
    if (ok) {
      const double series_value = *dual01.value - 1.0;
      const double err = std::fabs(series_value - direct.value());
      const double budget = *dual01.tail_bound + oracle_tail + 1e-12;
      d["series_value"] = series_value;
      d["error"] = err;
      d["budget"] = budget;
      ok = err <= budget && series_value <= comparison;
    }
    rows.push_back({"dual_alpha_series_and_comparison", ok, d});
  }
  {
    WoldConfig wc;
    wc.series = series;
    wc.seed = cfg.seed;
    const auto v = wold_verdict(ws, tree, window, wc);
    rows.push_back({"wold_verdict", v.outcome == WoldOutcome::no_wold,
                    {{"outcome", to_string(v.outcome)}, {"reason", v.reason}}});
  }

  bool all = true;
  json checks = json::array();
  for (const auto& r : rows) {
    all = all && r.pass;
    checks.push_back({{"check", r.check}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass) diff << "FAIL " << r.check << ": " << r.detail.dump() << '\n';
  }
  if (cfg.format == "csv") {
    out << "check,pass\n";
    for (const auto& r : rows) out << r.check << ',' << (r.pass ? "pass" : "fail") << '\n';
  } else {
    write_json(out, {{"item", cfg.repro_item},
                     {"weights", ws->describe()},
                     {"checks", checks},
                     {"pass", all}});
  }
  return all ? kOk : kReproFailed;
}

}  // namespace woldlab::cli
