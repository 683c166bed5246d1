// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion, preceded
// by indented detail lines. Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <woldlab/families.hpp>
#include <woldlab/operator.hpp>
#include <woldlab/series.hpp>
#include <woldlab/tree_ops.hpp>
#include <woldlab/weights.hpp>
#include <woldlab/wold.hpp>

#include "oracles.hpp"
#include "properties.hpp"

using namespace woldlab;

namespace {

struct Report {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { lines.push_back("note " + what); }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

double p_of(const PolyFamilyParams& pf, std::int64_t m, double x) {
  return 1.0 + pf.a.at(m) * x + pf.b.at(m) * x * x;
}

struct Family {
  std::string spec;
  PolyFamilyParams params;
};

std::vector<Family> quadratic_families() {
  return {{"ex52", {}},
          {"prop51:a=table:-3=2|0=0.5|4=3|else=1,b=const:0.7",
           {CoefficientRule::parse("table:-3=2|0=0.5|4=3|else=1"), CoefficientRule::constant(0.7)}}};
}

Report ac1() {
  Report r;
  const auto tqb = make_tree("tqb");
  for (const auto& fam : quadratic_families()) {
    const auto ws = make_weights(fam.spec, tqb);
    double spine = 0.0;
    for (std::int64_t m = -5; m <= 10; ++m) {
      spine = std::max(spine, std::abs(shift_norm_sq(*ws, *tqb, {0, m}, 1) - (m >= 2 ? 1.0 : 2.0)));
    }
    double off = 0.0;
    for (std::int64_t m = -20; m <= 20; ++m) {
      for (std::int64_t n = 1; n <= 50; ++n) {
        for (std::size_t k = 0; k <= 5; ++k) {
          const double want = p_of(fam.params, m, static_cast<double>(n + static_cast<std::int64_t>(k) - 1)) /
                              p_of(fam.params, m, static_cast<double>(n - 1));
          off = std::max(off, std::abs(shift_norm_sq(*ws, *tqb, {n, m}, k) - want));
        }
      }
    }
    r.check(spine <= 1e-12, fam.spec + ": spine norms, max error " + fmt(spine) + " <= 1e-12");
    r.check(off <= 1e-12, fam.spec + ": ||S^k e_(n,m)||^2 = p_m(n+k-1)/p_m(n-1), max error " + fmt(off) + " <= 1e-12");
  }
  return r;
}

Report ac2() {
  Report r;
  const auto tqb = make_tree("tqb");
  for (const auto& fam : quadratic_families()) {
    const auto ws = make_weights(fam.spec, tqb);
    const auto dual = cauchy_dual(ws, tqb);
    const auto twice = cauchy_dual(dual, tqb);
    double closed = 0.0;
    double defining = 0.0;
    double involution = 0.0;
    for (std::int64_t m = -20; m <= 20; ++m) {
      if (m >= 1) closed = std::max(closed, std::abs(dual->weight({0, m}) - std::sqrt(double(m) / double(m + 1))));
      if (m >= 2) closed = std::max(closed, std::abs(dual->weight({1, m}) - 1.0 / std::sqrt(double(m))));
      for (std::int64_t n = 0; n <= 50; ++n) {
        const Vertex v{n, m};
        if (n >= 2) {
          const double want = std::sqrt(p_of(fam.params, m, double(n - 2)) / p_of(fam.params, m, double(n - 1)));
          closed = std::max(closed, std::abs(dual->weight(v) - want));
        }
        const double norm = oracle::norm_sq(oracle::shift(*ws, *tqb, {{tqb->parent(v), 1.0}}));
        defining = std::max(defining, std::abs(dual->weight(v) - ws->weight(v) / norm));
        involution = std::max(involution, std::abs(twice->weight(v) - ws->weight(v)));
      }
    }
    r.check(closed <= 1e-12, fam.spec + ": dual closed forms, max error " + fmt(closed) + " <= 1e-12");
    r.check(defining <= 1e-12, fam.spec + ": dual against the defining quotient, max error " + fmt(defining));
    r.check(involution <= 1e-12, fam.spec + ": dual of dual, max error " + fmt(involution) + " <= 1e-12");
  }
  return r;
}

Report ac3() {
  Report r;
  const auto tqb = make_tree("tqb");
  const auto ws = make_weights("ex52", tqb);
  const Window window{{0, 0}, 8, 8};
  double worst = -1e300;
  for (const auto& v : window_vertices(*tqb, window)) worst = std::max(worst, defect_diagonal(*ws, *tqb, v, 3));
  r.check(worst <= 1e-9, "max d_3 over the window " + fmt(worst) + " <= 1e-9");
  double off = 0.0;
  for (std::int64_t m = -20; m <= 100; ++m) {
    for (std::int64_t n = 1; n <= 50; ++n) off = std::max(off, std::abs(defect_diagonal(*ws, *tqb, {n, m}, 3)));
  }
  r.check(off <= 1e-9, "max |d_3((n,m))| for n >= 1: " + fmt(off) + " <= 1e-9");
  double spine = 0.0;
  for (std::int64_t m = 4; m <= 100; ++m) {
    spine = std::max(spine, std::abs(defect_diagonal(*ws, *tqb, {0, m}, 3) + 2.0 / double(m)));
  }
  r.check(spine <= 1e-9, "max |d_3((0,m)) + 2/m| for m in [4,100]: " + fmt(spine) + " <= 1e-9");
  const auto c3 = classify(*ws, *tqb, window, 3);
  const auto c1 = classify(*ws, *tqb, window, 1);
  r.check(c3.expansion, std::string("classify m=3: ") + to_string(c3.classification));
  r.check(c1.expansion, std::string("classify m=1 (norm-increasing): ") + to_string(c1.classification));
  return r;
}

Report ac4() {
  Report r;
  const auto tqb = make_tree("tqb");
  const auto ws = make_weights("ex52", tqb);
  const auto partial = alpha_partial(*ws, *tqb, {0, 0}, 500);
  const auto& sums = partial.partial_sums();
  const auto hit = std::find_if(sums.begin(), sums.end(), [](double s) { return s > 1e3; });
  r.check(hit != sums.end(), "alpha partial sums at (0,0) exceed 1e3 at N = " +
                                 (hit == sums.end() ? std::string("none") : std::to_string(hit - sums.begin())) +
                                 " <= 500");
  const auto a = alpha_verdict(*ws, *tqb, {0, 0});
  r.check(a.diverged(), std::string("alpha verdict at (0,0): ") + to_string(a.kind));

  const auto dual = cauchy_dual(ws, tqb);
  const auto d = alpha_verdict(*dual, *tqb, {0, 0});
  r.check(d.converged(), std::string("dual alpha verdict at (0,0): ") + to_string(d.kind));
  if (!d.converged()) return r;
  const double value = *d.value;
  const double tail = *d.tail_bound;
  r.check(tail <= 1e-6 && d.terms_used <= 10'000,
          "dual alpha tail bound " + fmt(tail) + " <= 1e-6 using " + std::to_string(d.terms_used) + " <= 1e4 terms");

  const auto s = oracle::series_k2k1();
  const double budget = tail + s.error;
  r.check(std::abs(value - s.value) <= budget, "dual alpha(0,0) = " + fmt(value) + " matches sum 1/p_{n+1}(n-1) = " +
                                                   fmt(s.value) + " within " + fmt(budget));
  const auto cmp = oracle::comparison_sum(1.0);
  r.check(value <= cmp.value + cmp.error,
          "dual alpha(0,0) = " + fmt(value) + " <= sum 2/(2+(n-1)^2) = " + fmt(cmp.value));

  const auto d01 = alpha_verdict(*dual, *tqb, {0, 1});
  if (d01.converged()) {
    r.note("dual alpha(0,1) - 1 = " + fmt(*d01.value - 1.0) + " vs oracle " + fmt(s.value) + ", gap " +
           fmt(std::abs(*d01.value - 1.0 - s.value)) + ", budget " + fmt(*d01.tail_bound + s.error));
  }
  r.note("direct definitional partial sum of dual alpha(0,0) over 2000 terms: " +
         fmt(alpha_partial(*dual, *tqb, {0, 0}, 2000).sum()));
  return r;
}

bool definitive(const WoldVerdict& w) {
  return !w.likely && w.outcome != WoldOutcome::inconclusive && w.alpha.definitive() &&
         (!w.dual_alpha || w.dual_alpha->definitive());
}

Report ac5() {
  Report r;
  struct Case {
    std::string tree, weights;
    WoldOutcome want;
  };
  for (const auto& c : std::vector<Case>{{"tqb", "ex52", WoldOutcome::no_wold},
                                         {"zpath", "constant:1", WoldOutcome::has_wold_case_ii},
                                         {"tqb", "constant:1", WoldOutcome::has_wold_case_i}}) {
    const auto t = make_tree(c.tree);
    const auto w = wold_verdict(make_weights(c.weights, t), t, {{0, 0}, 2, 2});
    r.check(w.outcome == c.want && definitive(w), c.tree + " " + c.weights + ": " + to_string(w.outcome) +
                                                       (definitive(w) ? " (definitive)" : " (not definitive)"));
  }
  const auto tqb = make_tree("tqb");
  const auto dual = cauchy_dual(make_weights("constant:1", tqb), tqb);
  const auto p = alpha_partial(*dual, *tqb, {0, 0}, 20);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 20; ++n) {
    const double want = std::pow(4.0, double(n) - 1.0);
    worst = std::max(worst, std::abs(p.terms()[n] - want) / want);
  }
  r.check(worst <= 1e-12, "all-ones dual alpha terms match 4^(n-1) for n <= 20, max relative error " + fmt(worst));
  return r;
}

Report ac6() {
  Report r;
  struct Case {
    std::string tree;
    Vertex base;
  };
  std::uint64_t seed = 600;
  for (const auto& c : std::vector<Case>{{"zpath", {0, 0}}, {"tqb", {0, 0}}, {"tkinf:2", {0, 0}}, {"tkinf:3", {1, 1}}}) {
    const auto t = make_tree(c.tree);
    const auto o = props::shell_properties(*t, c.base, 200, seed++);
    for (const auto& f : o.failures) r.note(f);
    r.check(o.ok() && o.instances == 200, c.tree + ": shell properties and enum_A oracle on " + std::to_string(o.instances) +
                                              " instances, " + std::to_string(o.failures.size()) + " failures");
  }
  return r;
}

double max_abs_gram_offset(const std::vector<oracle::Vec>& vecs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i; j < vecs.size(); ++j) {
      worst = std::max(worst, std::abs(oracle::inner(vecs[i], vecs[j]) - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

Report ac7() {
  Report r;
  for (int k : {2, 3}) {
    const std::string tag = "k=" + std::to_string(k) + ": ";
    const auto t = make_tree("tkinf:" + std::to_string(k));
    const auto ws = make_weights("tkinf-isometric:k=" + std::to_string(k), t);
    const auto path = bilateral_path(*t, {0, 0}, -5, 5);
    constexpr std::size_t depth = 16;

    double rec = 0.0;
    for (std::int64_t m = -3; m <= 3; ++m) {
      rec = std::max(rec, hyperrange_recurrence_check(*ws, *t, path, m, depth, 1e-10).residual);
    }
    r.check(rec <= 1e-10, tag + "max ||S g_m - lambda g_{m+1}|| over m in [-3,3]: " + fmt(rec));

    std::map<std::int64_t, oracle::Vec> g;
    for (std::int64_t m = -4; m <= 3; ++m) {
      const auto gm = g_vector(*ws, *t, path, m, depth);
      for (const auto& [v, x] : gm.coefficients.entries()) g[m][v] = x;
    }
    double pair = 0.0;
    for (std::int64_t a = -3; a <= 3; ++a) {
      for (std::int64_t b = a + 1; b <= 3; ++b) pair = std::max(pair, std::abs(oracle::inner(g[a], g[b])));
    }
    r.check(pair <= 1e-10, tag + "max |<g_m, g_m'>| for m != m': " + fmt(pair));

    double adj = 0.0;
    for (std::int64_t m = -3; m <= 3; ++m) {
      const double c = shift_norm_sq(*ws, *t, path.at(m - 1), 1) / ws->weight(path.at(m));
      auto diff = oracle::adjoint(*ws, *t, g[m]);
      for (const auto& [v, x] : g[m - 1]) diff[v] -= c * x;
      adj = std::max(adj, std::sqrt(oracle::norm_sq(diff)));
    }
    r.check(adj <= 1e-10, tag + "max ||S* g_m - c_m g_{m-1}||: " + fmt(adj));

    const Window window{{0, 0}, 2, 2};
    const auto lib = wandering_orthogonality_check(*ws, *t, window, 4);
    std::vector<oracle::Vec> orbit;
    for (const auto& v : window_vertices(*t, window)) {
      for (const auto& f : ker_adjoint_local_basis(*ws, *t, v)) {
        oracle::Vec of(f.entries().begin(), f.entries().end());
        for (std::size_t j = 0; j <= 4; ++j) orbit.push_back(oracle::power(*ws, *t, of, j));
      }
    }
    const double gram = max_abs_gram_offset(orbit);
    r.check(lib.pass && lib.max_pair_residual <= 1e-10 && gram <= 1e-10,
            tag + "wandering Gram residuals up to n_max=4: library " + fmt(lib.max_pair_residual) + ", oracle " +
                fmt(gram) + " over " + std::to_string(orbit.size()) + " vectors");
  }
  return r;
}

Report ac8() {
  Report r;
  struct Case {
    std::string tree, weights;
    Vertex base;
    bool dual = false;
  };
  std::uint64_t seed = 800;
  for (const auto& c : std::vector<Case>{{"tqb", "ex52", {0, 0}},
                                         {"tqb", "ex52", {1, 2}, true},
                                         {"tqb", "constant:1", {0, 0}},
                                         {"zpath", "constant:1", {0, 0}},
                                         {"tkinf:2", "tkinf-isometric:k=2", {0, 0}},
                                         {"tkinf:3", "tkinf-isometric:k=3", {0, 0}}}) {
    const auto t = make_tree(c.tree);
    auto ws = make_weights(c.weights, t);
    if (c.dual) ws = cauchy_dual(ws, t);
    const std::string tag = c.tree + " " + c.weights + (c.dual ? " dual" : "") + ": ";
    const auto adj = props::adjoint_duality(*ws, *t, c.base, 500, seed++, 1e-12);
    for (const auto& f : adj.failures) r.note(f);
    r.check(adj.ok() && adj.instances == 500, tag + "adjoint duality on 500 pairs, " +
                                                   std::to_string(adj.failures.size()) + " over 1e-12 relative");
    const auto def = props::defect_agreement(*ws, *t, c.base, 100, seed++, 1e-10);
    for (const auto& f : def.failures) r.note(f);
    r.check(def.ok() && def.instances == 100,
            tag + "defect diagonal vs expansion on 100 instances, " + std::to_string(def.failures.size()) + " over 1e-10");
  }
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Report ac9() {
  Report r;
  const auto dir = std::filesystem::temp_directory_path() / ("woldlab_ac9_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::string> commands{
      "wold --tree tqb --weights ex52 --seed 42",
      "wold --tree tqb --weights constant:1 --seed 7 --window 3,3",
      "alpha --tree tqb --weights ex52 --dual --vertex 0,0",
      "balanced --tree tqb --weights ex52 --window 3,3",
      "gvec --tree tkinf:3 --weights tkinf-isometric:k=3 --vertex 0,0 --m 1 --depth 6"};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string runs[2];
    int codes[2] = {0, 0};
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".json");
      const std::string cmd = std::string("\"") + WOLDLAB_CLI_PATH + "\" " + commands[i] + " --out \"" + out.string() +
                              "\" 2>/dev/null";
      codes[rep] = std::system(cmd.c_str());
      runs[rep] = slurp(out);
    }
    r.check(codes[0] == 0 && codes[1] == 0 && !runs[0].empty() && runs[0] == runs[1],
            commands[i] + ": " + std::to_string(runs[0].size()) + " bytes, identical=" + (runs[0] == runs[1] ? "yes" : "no"));
  }
  std::filesystem::remove_all(dir);
  return r;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Report()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"woldlab acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9); default all")->check(CLI::Range(0, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "quadratic-family shift norms", 5.0, ac1},
      {2, "Cauchy dual closed forms and involution", 0.0, ac2},
      {3, "third defect diagonal and classification", 10.0, ac3},
      {4, "alpha divergence and dual alpha value", 20.0, ac4},
      {5, "Wold verdicts on the builtin scenarios", 0.0, ac5},
      {6, "generation shell property suite", 10.0, ac6},
      {7, "hyper-range suite on T_{k,inf}", 0.0, ac7},
      {8, "adjoint duality and defect oracle", 0.0, ac8},
      {9, "deterministic CLI reports", 0.0, ac9},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    try {
      rep = c.run();
    } catch (const std::exception& e) {
      rep.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) rep.check(secs < c.budget_s, "runtime " + fmt(secs) + " s < " + fmt(c.budget_s) + " s");
    for (const auto& line : rep.lines) std::cout << "    " << line << '\n';
    std::printf("AC%d %s  %s (%.2f s)\n", c.id, rep.pass ? "PASS" : "FAIL", c.title, secs);
    std::fflush(stdout);
    all = all && rep.pass;
  }
  return all ? 0 : 1;
}
