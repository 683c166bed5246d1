#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>
#include <woldlab/series.hpp>
#include <woldlab/tree.hpp>
#include <woldlab/tree_ops.hpp>
#include <woldlab/weights.hpp>

namespace woldlab::cli {

enum ExitCode { kOk = 0, kReproFailed = 1, kConfigError = 2, kResourceError = 3 };

struct RunConfig {
  std::string tree = "tqb";
  std::string weights = "ex52";
  std::optional<std::string> vertex;
  std::string window = "2,2";
  std::size_t n_max = 10'000;
  double threshold = 1e6;
  std::size_t ratio_window = 50;
  double delta = 0.05;
  double tol = 1e-9;
  bool dual = false;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::optional<std::string> mutate;
  std::string out;

  // command-specific
  unsigned m_defect = 3;
  std::int64_t m_index = 0;
  std::size_t depth = 6;
  std::size_t shells = 3;
  std::string repro_item;
  std::string rule_a = "const:1";
  std::string rule_b = "const:1";
};

/// Resolved inputs shared by every command.
struct Scenario {
  TreePtr tree;
  WeightsPtr weights;  ///< dual already applied when requested
  Vertex vertex;
  Window window;
  SeriesConfig series;
};

Scenario resolve(const RunConfig& cfg, bool with_weights = true);
/// "n,m:factor" -> (vertex, factor)
std::pair<Vertex, double> parse_mutation(const TreeKernel& kernel, const std::string& text);

int cmd_tree_show(const RunConfig& cfg, std::ostream& out);
int cmd_alpha(const RunConfig& cfg, std::ostream& out);
int cmd_dual(const RunConfig& cfg, std::ostream& out);
int cmd_defect(const RunConfig& cfg, std::ostream& out);
int cmd_balanced(const RunConfig& cfg, std::ostream& out);
int cmd_wold(const RunConfig& cfg, std::ostream& out, std::ostream& summary);
int cmd_gvec(const RunConfig& cfg, std::ostream& out);
int cmd_repro(const RunConfig& cfg, std::ostream& out, std::ostream& diff);

void write_json(std::ostream& out, const nlohmann::json& j);

}  // namespace woldlab::cli
