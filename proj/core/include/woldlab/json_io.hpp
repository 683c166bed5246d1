#pragma once

#include <nlohmann/json.hpp>

#include "woldlab/operator.hpp"
#include "woldlab/series.hpp"
#include "woldlab/tree.hpp"
#include "woldlab/wold.hpp"

namespace woldlab {

/// {"entries": [["<vertex>", <float>], ...]}
nlohmann::json sparse_to_json(const TreeKernel& kernel, const SparseVector& f);
SparseVector sparse_from_json(const TreeKernel& kernel, const nlohmann::json& j);

/// {"vertex", "verdict", "value", "tail_bound", "evidence", "method", "terms_used"}
nlohmann::json verdict_to_json(const SeriesVerdict& v);
SeriesVerdict verdict_from_json(const nlohmann::json& j);

nlohmann::json balance_to_json(const TreeKernel& kernel, const BalanceResult& b);
nlohmann::json weight_relation_to_json(const TreeKernel& kernel, const WeightRelationReport& r);

/// Series verdict fields for the alpha sub-verdict plus "case", "outcome",
/// per-condition evidence and witnesses.
nlohmann::json wold_to_json(const TreeKernel& kernel, const WoldVerdict& w);
WoldOutcome wold_outcome_from_json(const nlohmann::json& j);

}  // namespace woldlab
