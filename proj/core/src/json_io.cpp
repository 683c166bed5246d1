#include "woldlab/json_io.hpp"

#include "woldlab/error.hpp"

namespace woldlab {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

VerdictKind kind_from_string(const std::string& s) {
  if (s == "converged") return VerdictKind::converged;
  if (s == "diverged") return VerdictKind::diverged;
  if (s == "inconclusive") return VerdictKind::inconclusive;
  throw ParseError("unknown verdict '" + s + "'");
}

const char* tri_string(Tri t) {
  switch (t) {
    case Tri::yes:
      return "yes";
    case Tri::no:
      return "no";
    case Tri::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace

json sparse_to_json(const TreeKernel& kernel, const SparseVector& f) {
  json entries = json::array();
  for (const auto& [v, x] : f.entries()) entries.push_back(json::array({kernel.format(v), x}));
  return {{"entries", std::move(entries)}};
}

SparseVector sparse_from_json(const TreeKernel& kernel, const json& j) {
  try {
    SparseVector f;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("sparse entry must be [vertex, value]");
      f.add(kernel.parse(e.at(0).get<std::string>()), e.at(1).get<double>());
    }
    return f;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("sparse vector JSON: ") + ex.what());
  }
}

json verdict_to_json(const SeriesVerdict& v) {
  return {{"vertex", v.vertex},
          {"verdict", to_string(v.kind)},
          {"value", optional_number(v.value)},
          {"tail_bound", optional_number(v.tail_bound)},
          {"evidence", v.evidence},
          {"method", to_string(v.method)},
          {"terms_used", v.terms_used}};
}

SeriesVerdict verdict_from_json(const json& j) {
  try {
    SeriesVerdict v;
    v.vertex = j.at("vertex").get<std::string>();
    v.kind = kind_from_string(j.at("verdict").get<std::string>());
    v.value = number_or_null(j, "value");
    v.tail_bound = number_or_null(j, "tail_bound");
    const auto method = j.at("method").get<std::string>();
    if (method == "analytic") {
      v.method = VerdictMethod::analytic;
    } else if (method == "heuristic") {
      v.method = VerdictMethod::heuristic;
    } else {
      throw ParseError("unknown method '" + method + "'");
    }
    v.terms_used = j.value("terms_used", std::size_t{0});
    v.evidence = j.value("evidence", json::object());
    return v;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("verdict JSON: ") + ex.what());
  }
}

json balance_to_json(const TreeKernel& kernel, const BalanceResult& b) {
  json j{{"balanced", tri_string(b.status)},
         {"max_spread", b.max_spread},
         {"classes", b.classes},
         {"vertices", b.vertices},
         {"witness", nullptr}};
  if (b.witness) {
    j["witness"] = json::array({kernel.format(b.witness->first), kernel.format(b.witness->second)});
  }
  return j;
}

json weight_relation_to_json(const TreeKernel& kernel, const WeightRelationReport& r) {
  return {{"max_residual", r.max_residual},
          {"max_excess", r.max_excess},
          {"witness", r.witness ? json(kernel.format(*r.witness)) : json(nullptr)},
          {"checked", r.checked},
          {"pass", r.pass},
          {"definitive", r.definitive}};
}

json wold_to_json(const TreeKernel& kernel, const WoldVerdict& w) {
  json j = verdict_to_json(w.alpha);
  j["case"] = case_label(w.outcome);
  j["outcome"] = to_string(w.outcome);
  j["reason"] = w.reason;
  j["likely"] = w.likely;
  j["likely_outcome"] = w.likely_outcome ? json(to_string(*w.likely_outcome)) : json(nullptr);
  j["min_norm_sq"] = w.min_norm_sq;
  j["alpha"] = verdict_to_json(w.alpha);
  j["dual_alpha"] = w.dual_alpha ? verdict_to_json(*w.dual_alpha) : json(nullptr);
  j["weight_relation"] =
      w.weight_relation ? weight_relation_to_json(kernel, *w.weight_relation) : json(nullptr);
  j["balance"] = w.balance ? balance_to_json(kernel, *w.balance) : json(nullptr);
  json spots = json::array();
  for (const auto& s : w.spot_checks) {
    spots.push_back(
        {{"vertex", kernel.format(s.vertex)}, {"verdict", to_string(s.kind)}, {"agrees", s.agrees}});
  }
  j["spot_checks"] = std::move(spots);
  j["witnesses"] = w.witnesses;
  return j;
}

WoldOutcome wold_outcome_from_json(const json& j) {
  const auto s = j.at("outcome").get<std::string>();
  for (auto o : {WoldOutcome::has_wold_case_i, WoldOutcome::has_wold_case_ii,
                 WoldOutcome::no_wold, WoldOutcome::inconclusive}) {
    if (s == to_string(o)) return o;
  }
  throw ParseError("unknown outcome '" + s + "'");
}

}  // namespace woldlab
