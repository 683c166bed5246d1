#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <woldlab/error.hpp>

#include "commands.hpp"

using namespace woldlab;
using namespace woldlab::cli;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--tree", cfg.tree, "zpath | tqb | tkinf:k=K | file:PATH")->capture_default_str();
  sub->add_option("--weights", cfg.weights,
                  "constant:c=C | ex52 | prop51:a=RULE,b=RULE | tkinf-isometric | file:PATH")
      ->capture_default_str();
  sub->add_option("--vertex", cfg.vertex, "vertex token, e.g. 0,0 (or an integer on zpath)");
  sub->add_option("--window", cfg.window, "window depths up,down")->capture_default_str();
  sub->add_option("--N", cfg.n_max, "maximum number of series terms")->capture_default_str();
  sub->add_option("--threshold", cfg.threshold, "divergence threshold B")->capture_default_str();
  sub->add_option("--ratio-window", cfg.ratio_window, "terms used for the ratio fit")
      ->capture_default_str();
  sub->add_option("--delta", cfg.delta, "ratio margin")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "comparison tolerance")->capture_default_str();
  sub->add_flag("--dual", cfg.dual, "use the Cauchy dual weights");
  sub->add_option("--format", cfg.format, "json | csv")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed for sampled checks")->capture_default_str();
  sub->add_option("--mutate", cfg.mutate, "multiply one weight: VERTEX:FACTOR");
  sub->add_option("--out", cfg.out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"woldlab: weighted shifts on rootless directed trees"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* tree = app.add_subcommand("tree", "inspect a tree kernel");
  tree->require_subcommand(1);
  auto* show = tree->add_subcommand("show", "parent, children, window and generation shells");
  add_common(show, cfg);
  show->add_option("--shells", cfg.shells, "largest n for A(v,n)")->capture_default_str();

  auto* alpha = app.add_subcommand("alpha", "alpha series partial sums and verdict");
  add_common(alpha, cfg);
  auto* dual = app.add_subcommand("dual", "Cauchy dual weights over the window");
  add_common(dual, cfg);
  auto* defect = app.add_subcommand("defect", "diagonal of the m-th defect operator");
  add_common(defect, cfg);
  defect->add_option("--m", cfg.m_defect, "defect order")->capture_default_str();
  auto* balanced = app.add_subcommand("balanced", "balancedness and norm checks on the window");
  add_common(balanced, cfg);
  auto* wold = app.add_subcommand("wold", "Wold-type decomposition verdict");
  add_common(wold, cfg);
  auto* gvec = app.add_subcommand("gvec", "truncated hyper-range vector g_m");
  add_common(gvec, cfg);
  gvec->add_option("--m", cfg.m_index, "path index m")->capture_default_str();
  gvec->add_option("--depth", cfg.depth, "generation depth")->capture_default_str();
  auto* repro = app.add_subcommand("repro", "reproduce the quadratic-family results");
  add_common(repro, cfg);
  repro->add_option("item", cfg.repro_item, "prop51 | ex52")->required();
  repro->add_option("--a", cfg.rule_a, "coefficient rule for a_m")->capture_default_str();
  repro->add_option("--b", cfg.rule_b, "coefficient rule for b_m")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write '" << cfg.out << "'\n";
      return kConfigError;
    }
  }
  std::ostream& out = cfg.out.empty() ? std::cout : file;

  try {
    if (show->parsed()) return cmd_tree_show(cfg, out);
    if (alpha->parsed()) return cmd_alpha(cfg, out);
    if (dual->parsed()) return cmd_dual(cfg, out);
    if (defect->parsed()) return cmd_defect(cfg, out);
    if (balanced->parsed()) return cmd_balanced(cfg, out);
    if (wold->parsed()) return cmd_wold(cfg, out, std::cerr);
    if (gvec->parsed()) return cmd_gvec(cfg, out);
    if (repro->parsed()) return cmd_repro(cfg, out, std::cerr);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResourceError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
