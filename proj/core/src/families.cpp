#include "woldlab/families.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "woldlab/error.hpp"

namespace woldlab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

/// Splits "family:params" into its two halves.
std::pair<std::string_view, std::string_view> split_family(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {spec, {}};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

/// Value of "key=value" or a bare value; empty when absent.
std::string_view param_value(std::string_view params, std::string_view key) {
  if (params.empty()) return {};
  const auto eq = params.find('=');
  if (eq == std::string_view::npos) return params;
  if (params.substr(0, eq) != key) {
    throw ParseError("unknown parameter '" + std::string(params.substr(0, eq)) + "'");
  }
  return params.substr(eq + 1);
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError("invalid integer '" + std::string(s) + "' for " + std::string(what));
  }
  return v;
}

double parse_number(std::string_view s, std::string_view what) {
  const std::string buf(trim(s));
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw ParseError("invalid number '" + buf + "' for " + std::string(what));
  }
  return v;
}

void require_tqb(const TreePtr& kernel, std::string_view family) {
  if (!dynamic_cast<const QuasiBrownianTree*>(kernel.get())) {
    throw ParseError(std::string(family) + " weights require --tree tqb");
  }
}

}  // namespace

TreePtr make_tree(std::string_view spec) {
  const auto [family, params] = split_family(trim(spec));
  if (family == "zpath" && params.empty()) return std::make_shared<BilateralPathTree>();
  if (family == "tqb" && params.empty()) return std::make_shared<QuasiBrownianTree>();
  if (family == "tkinf") {
    const auto k = param_value(params, "k");
    if (k.empty()) throw ParseError("tkinf needs k, e.g. tkinf:k=3");
    return std::make_shared<KInfinityTree>(parse_int(k, "k"));
  }
  if (family == "file") {
    if (params.empty()) throw ParseError("file: needs a path");
    return load_adjacency(read_file(std::string(params)));
  }
  throw ParseError("unknown tree '" + std::string(spec) + "'");
}

WeightsPtr make_weights(std::string_view spec, const TreePtr& kernel) {
  const auto [family, params] = split_family(trim(spec));
  if (family == "constant") {
    const auto c = param_value(params, "c");
    return std::make_shared<ConstantWeights>(c.empty() ? 1.0 : parse_number(c, "c"));
  }
  if (family == "ex52" && params.empty()) {
    require_tqb(kernel, family);
    return std::make_shared<QuadraticFamilyWeights>(PolyFamilyParams{}, "ex52");
  }
  if (family == "prop51") {
    require_tqb(kernel, family);
    PolyFamilyParams p;
    auto rest = params;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ParseError("prop51 expects a=<rule>,b=<rule>");
      const auto key = item.substr(0, eq);
      const auto rule = CoefficientRule::parse(item.substr(eq + 1));
      if (key == "a") {
        p.a = rule;
      } else if (key == "b") {
        p.b = rule;
      } else {
        throw ParseError("unknown prop51 parameter '" + std::string(key) + "'");
      }
    }
    return std::make_shared<QuadraticFamilyWeights>(std::move(p));
  }
  if (family == "tkinf-isometric") {
    const auto* tk = dynamic_cast<const KInfinityTree*>(kernel.get());
    if (!tk) throw ParseError("tkinf-isometric weights require a tkinf tree");
    const auto k = param_value(params, "k");
    const int kv = k.empty() ? tk->k() : parse_int(k, "k");
    if (kv != tk->k()) throw ParseError("tkinf-isometric k does not match the tree");
    return std::make_shared<KInfinityIsometricWeights>(kv);
  }
  if (family == "file") {
    if (params.empty()) throw ParseError("file: needs a path");
    return parse_weight_csv(read_file(std::string(params)), *kernel);
  }
  throw ParseError("unknown weights '" + std::string(spec) + "'");
}

WeightsPtr parse_weight_csv(std::string_view text, const TreeKernel& kernel) {
  std::map<Vertex, double> table;
  std::optional<double> fallback;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line == "vertex,weight") continue;

    std::string_view token;
    std::string_view value;
    if (line.front() == '"') {
      const auto close = line.find('"', 1);
      if (close == std::string_view::npos || close + 1 >= line.size() || line[close + 1] != ',') {
        throw ParseError("line " + std::to_string(line_no) + ": malformed quoted vertex");
      }
      token = line.substr(1, close - 1);
      value = line.substr(close + 2);
    } else {
      const auto comma = line.rfind(',');
      if (comma == std::string_view::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": expected vertex,weight");
      }
      token = trim(line.substr(0, comma));
      value = line.substr(comma + 1);
    }
    const double w = parse_number(value, "weight on line " + std::to_string(line_no));
    if (!(w > 0.0)) {
      throw DomainError("line " + std::to_string(line_no) + ": weight must be positive");
    }
    if (token == "*") {
      if (fallback) throw ParseError("line " + std::to_string(line_no) + ": duplicate default");
      fallback = w;
      continue;
    }
    const Vertex v = kernel.parse(token);
    if (!table.emplace(v, w).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate vertex '" +
                       std::string(token) + "'");
    }
  }
  return std::make_shared<TableWeights>(std::move(table), fallback);
}

}  // namespace woldlab
