#include "commands.hpp"

#include <cmath>
#include <sstream>

#include <woldlab/error.hpp>
#include <woldlab/families.hpp>
#include <woldlab/json_io.hpp>
#include <woldlab/operator.hpp>
#include <woldlab/wold.hpp>

namespace woldlab::cli {

using nlohmann::json;

namespace {

Window parse_window(const Vertex& base, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("--window expects up,down");
  try {
    std::size_t pos = 0;
    const auto up_s = text.substr(0, comma);
    const auto down_s = text.substr(comma + 1);
    const long up = std::stol(up_s, &pos);
    if (pos != up_s.size()) throw ParseError("bad --window");
    const long down = std::stol(down_s, &pos);
    if (pos != down_s.size()) throw ParseError("bad --window");
    if (up < 0 || down < 0) throw ParseError("--window depths must be nonnegative");
    return {base, static_cast<std::size_t>(up), static_cast<std::size_t>(down)};
  } catch (const std::logic_error&) {
    throw ParseError("--window expects two integers, got '" + text + "'");
  }
}

Vertex default_vertex(const TreeKernel& kernel) {
  if (kernel.name() == "adjacency") {
    const auto* adj = dynamic_cast<const AdjacencyTree*>(&kernel);
    for (const auto& v : adj->vertices()) {
      if (!adj->is_boundary(v)) return v;
    }
    throw ParseError("adjacency tree has no interior vertex");
  }
  return {0, 0};
}

std::string fmt(const TreeKernel& k, const Vertex& v) { return k.format(v); }

}  // namespace

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::pair<Vertex, double> parse_mutation(const TreeKernel& kernel, const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ParseError("--mutate expects <vertex>:<factor>");
  const Vertex v = kernel.parse(text.substr(0, colon));
  const auto f = text.substr(colon + 1);
  char* end = nullptr;
  const double factor = std::strtod(f.c_str(), &end);
  if (f.empty() || end != f.c_str() + f.size()) throw ParseError("bad mutation factor '" + f + "'");
  return {v, factor};
}

Scenario resolve(const RunConfig& cfg, bool with_weights) {
  if (cfg.n_max < 1) throw ParseError("--N must be positive");
  if (!(cfg.tol > 0.0)) throw ParseError("--tol must be positive");
  if (!(cfg.threshold > 0.0)) throw ParseError("--threshold must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ParseError("--delta must lie in (0,1)");
  if (cfg.ratio_window < 2) throw ParseError("--ratio-window must be at least 2");
  if (cfg.format != "json" && cfg.format != "csv") throw ParseError("--format must be json or csv");

  Scenario s;
  s.tree = make_tree(cfg.tree);
  s.vertex = cfg.vertex ? s.tree->parse(*cfg.vertex) : default_vertex(*s.tree);
  s.window = parse_window(s.vertex, cfg.window);
  if (!with_weights) return s;
  WeightsPtr base = make_weights(cfg.weights, s.tree);
  if (cfg.mutate) {
    const auto [at, factor] = parse_mutation(*s.tree, *cfg.mutate);
    base = std::make_shared<MutatedWeights>(base, at, factor);
  }
  s.weights = cfg.dual ? cauchy_dual(base, s.tree) : base;
  s.series.n_max = cfg.n_max;
  s.series.divergence_threshold = cfg.threshold;
  s.series.ratio_window = cfg.ratio_window;
  s.series.delta = cfg.delta;
  s.series.initial_terms = std::min<std::size_t>(64, cfg.n_max);
  return s;
}

int cmd_tree_show(const RunConfig& cfg, std::ostream& out) {
  const auto s = resolve(cfg, false);
  const auto& k = *s.tree;
  json children = json::array();
  for (const auto& c : k.children(s.vertex)) children.push_back(fmt(k, c));
  json window = json::array();
  for (const auto& v : window_vertices(k, s.window)) window.push_back(fmt(k, v));
  json shells = json::array();
  for (std::size_t n = 0; n <= cfg.shells; ++n) {
    json members = json::array();
    for (const auto& u : enum_A(k, s.vertex, n)) members.push_back(fmt(k, u));
    shells.push_back({{"n", n}, {"A", std::move(members)}});
  }
  if (cfg.format == "csv") {
    out << "vertex,parent,children\n";
    for (const auto& v : window_vertices(k, s.window)) {
      out << '"' << fmt(k, v) << "\",\"" << fmt(k, k.parent(v)) << "\",\"";
      bool first = true;
      for (const auto& c : k.children(v)) {
        out << (first ? "" : " ") << fmt(k, c);
        first = false;
      }
      out << "\"\n";
    }
    return kOk;
  }
  write_json(out, {{"tree", k.describe()},
                   {"vertex", fmt(k, s.vertex)},
                   {"parent", fmt(k, k.parent(s.vertex))},
                   {"children", children},
                   {"window", window},
                   {"shells", shells}});
  return kOk;
}

int cmd_alpha(const RunConfig& cfg, std::ostream& out) {
  const auto s = resolve(cfg);
  const auto verdict = alpha_verdict(*s.weights, *s.tree, s.vertex, s.series);
  const auto partial =
      alpha_partial(*s.weights, *s.tree, s.vertex, verdict.terms_used - 1, s.series.max_vertices);
  if (cfg.format == "csv") {
    out << "n,t_n,partial_sum\n";
    out.precision(17);
    for (std::size_t n = 0; n < partial.terms().size(); ++n) {
      out << n << ',' << partial.terms()[n] << ',' << partial.partial_sums()[n] << '\n';
    }
    return kOk;
  }
  json table = json::array();
  for (std::size_t n = 0; n < partial.terms().size(); ++n) {
    table.push_back({n, partial.terms()[n], partial.partial_sums()[n]});
  }
  write_json(out, {{"tree", s.tree->describe()},
                   {"weights", s.weights->describe()},
                   {"verdict", verdict_to_json(verdict)},
                   {"table_columns", {"n", "t_n", "partial_sum"}},
                   {"table", table}});
  return kOk;
}

int cmd_dual(const RunConfig& cfg, std::ostream& out) {
  auto s = resolve(cfg);
  const auto& k = *s.tree;
  const auto dual = cauchy_dual(s.weights, s.tree);
  const auto back = cauchy_dual(dual, s.tree);
  double involution = 0.0;
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "vertex,weight,dual_weight\n";
  for (const auto& v : window_vertices(k, s.window)) {
    const double w = s.weights->weight(v);
    const double d = dual->weight(v);
    involution = std::max(involution, std::fabs(back->weight(v) - w) / w);
    rows.push_back({{"vertex", fmt(k, v)}, {"weight", w}, {"dual_weight", d}});
    csv << '"' << fmt(k, v) << "\"," << w << ',' << d << '\n';
  }
  if (cfg.format == "csv") {
    out << csv.str();
    return kOk;
  }
  write_json(out, {{"weights", s.weights->describe()},
                   {"entries", rows},
                   {"involution_max_relative_residual", involution}});
  return kOk;
}

int cmd_defect(const RunConfig& cfg, std::ostream& out) {
  const auto s = resolve(cfg);
  const auto& k = *s.tree;
  const auto r = classify(*s.weights, k, s.window, cfg.m_defect, cfg.tol);
  if (cfg.format == "csv") {
    out.precision(17);
    out << "vertex,d_" << r.m << '\n';
    for (const auto& [v, d] : r.diagonal) out << '"' << fmt(k, v) << "\"," << d << '\n';
    out << "# classification: " << to_string(r.classification) << '\n';
    return kOk;
  }
  json entries = json::array();
  for (const auto& [v, d] : r.diagonal) entries.push_back({fmt(k, v), d});
  auto opt = [&](const std::optional<Vertex>& v) { return v ? json(fmt(k, *v)) : json(nullptr); };
  write_json(out, {{"m", r.m},
                   {"entries", entries},
                   {"classification", to_string(r.classification)},
                   {"m_expansion", r.expansion},
                   {"m_concave", r.concave},
                   {"m_isometry", r.m_isometry},
                   {"isometry", r.isometry},
                   {"expansion_witness", opt(r.expansion_witness)},
                   {"concave_witness", opt(r.concave_witness)}});
  return kOk;
}

int cmd_balanced(const RunConfig& cfg, std::ostream& out) {
  const auto s = resolve(cfg);
  const auto& k = *s.tree;
  const auto b = is_balanced(*s.weights, k, s.window, kDefaultGenerationBound, cfg.tol);
  const auto ni = is_norm_increasing(*s.weights, k, s.window, cfg.tol);
  const auto bd = boundedness_estimate(*s.weights, k, s.window);
  const char* ni_status = ni.status == Tri::yes ? "yes" : ni.status == Tri::no ? "no" : "inconclusive";
  if (cfg.format == "csv") {
    out << "property,value\n";
    out << "balanced," << balance_to_json(k, b).at("balanced").get<std::string>() << '\n';
    out << "norm_increasing," << ni_status << '\n';
    out.precision(17);
    out << "sup_norm_sq," << bd.sup << '\n';
    return kOk;
  }
  write_json(out, {{"balance", balance_to_json(k, b)},
                   {"norm_increasing",
                    {{"status", ni_status},
                     {"min_norm_sq", ni.min_norm_sq},
                     {"argmin", fmt(k, ni.argmin)},
                     {"isometric", ni.equality},
                     {"witness", ni.witness ? json(fmt(k, *ni.witness)) : json(nullptr)}}},
                   {"bounded",
                    {{"sup_norm_sq", bd.sup}, {"argmax", fmt(k, bd.argmax)},
                     {"sampled", bd.sampled}, {"global", bd.global}}}});
  return kOk;
}

int cmd_wold(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
  const auto s = resolve(cfg);
  WoldConfig wc;
  wc.series = s.series;
  wc.tol = cfg.tol;
  wc.seed = cfg.seed;
  const auto v = wold_verdict(s.weights, s.tree, s.window, wc);
  auto j = wold_to_json(*s.tree, v);
  j["tree"] = s.tree->describe();
  j["weights"] = s.weights->describe();
  j["seed"] = cfg.seed;
  if (cfg.format == "csv") {
    out << "outcome,case,alpha,dual_alpha\n"
        << to_string(v.outcome) << ',' << case_label(v.outcome) << ',' << to_string(v.alpha.kind)
        << ',' << (v.dual_alpha ? to_string(v.dual_alpha->kind) : "") << '\n';
  } else {
    write_json(out, j);
  }
  summary << "wold: " << to_string(v.outcome) << " (case " << case_label(v.outcome)
          << "): " << v.reason << '\n';
  return kOk;
}

int cmd_gvec(const RunConfig& cfg, std::ostream& out) {
  const auto s = resolve(cfg);
  const auto& k = *s.tree;
  const auto path = bilateral_path(k, s.vertex, std::min<std::int64_t>(cfg.m_index - 1, 0),
                                   std::max<std::int64_t>(cfg.m_index + 1, 0));
  const auto g = g_vector(*s.weights, k, path, cfg.m_index, cfg.depth, s.series);
  json j{{"m", g.m},
         {"anchor", fmt(k, g.anchor)},
         {"depth", g.depth},
         {"zero", g.zero},
         {"vector", sparse_to_json(k, g.coefficients)},
         {"tail_norm", g.tail_norm()},
         {"alpha", verdict_to_json(g.alpha)},
         {"recurrence", nullptr}};
  if (!g.zero) {
    const auto r = hyperrange_recurrence_check(*s.weights, k, path, cfg.m_index, cfg.depth,
                                               cfg.tol, s.series);
    j["recurrence"] = {{"residual", r.residual}, {"tail_budget", r.tail_budget},
                       {"lambda_next", r.lambda_next}, {"pass", r.pass}};
  }
  if (cfg.format == "csv") {
    out.precision(17);
    out << "vertex,coefficient\n";
    for (const auto& [v, x] : g.coefficients.entries()) out << '"' << fmt(k, v) << "\"," << x << '\n';
    return kOk;
  }
  write_json(out, j);
  return kOk;
}

}  // namespace woldlab::cli
