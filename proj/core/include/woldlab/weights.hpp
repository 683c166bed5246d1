#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "woldlab/tree.hpp"
#include "woldlab/tree_ops.hpp"
#include "woldlab/vertex.hpp"

namespace woldlab {

/// Positive weight system {lambda_v}. Immutable and shareable across threads.
class WeightSystem {
 public:
  virtual ~WeightSystem() = default;

  virtual double weight(const Vertex& v) const = 0;
  /// log(weight(v)); overridden where a direct log is more accurate.
  virtual double log_weight(const Vertex& v) const;

  virtual std::string family() const = 0;
  virtual std::string describe() const { return family(); }
};

using WeightsPtr = std::shared_ptr<const WeightSystem>;

class ConstantWeights final : public WeightSystem {
 public:
  explicit ConstantWeights(double c);
  double weight(const Vertex&) const override { return c_; }
  std::string family() const override { return "constant"; }
  std::string describe() const override;
  double value() const noexcept { return c_; }

 private:
  double c_;
};

/// Coefficient sequence m -> c_m: either a constant or a finite table of
/// overrides on top of a default ("table:-1=2|0=1.5|else=1").
class CoefficientRule {
 public:
  static CoefficientRule constant(double c);
  static CoefficientRule parse(std::string_view text);

  double at(std::int64_t m) const;
  /// Exact infimum / supremum over all of Z (the table is finite).
  double inf() const;
  double sup() const;
  bool is_constant() const { return table_.empty(); }
  /// Largest |m| with an override; 0 for constant rules.
  std::int64_t table_extent() const;
  std::string to_string() const;

 private:
  double fallback_ = 1.0;
  std::map<std::int64_t, double> table_;
};

/// p_m(x) = 1 + a_m x + b_m x^2.
struct PolyFamilyParams {
  CoefficientRule a = CoefficientRule::constant(1.0);
  CoefficientRule b = CoefficientRule::constant(1.0);

  double p(std::int64_t m, double x) const { return 1.0 + a.at(m) * x + b.at(m) * x * x; }
};

/// Hypothesis check for the quadratic family on a window of m values.
/// Suprema and infima over Z are only certified on the sampled range.
struct FamilyHypotheses {
  std::int64_t m_lo = 0;
  std::int64_t m_hi = 0;
  bool positive_coefficients = false;
  double sup_a = 0.0;
  double sup_b = 0.0;
  double inf_b = 0.0;
  bool holds = false;
  bool window_certified = true;
};

FamilyHypotheses check_family_hypotheses(const PolyFamilyParams& params, std::int64_t m_lo,
                                         std::int64_t m_hi);

/// Weights on the quasi-Brownian tree built from a quadratic family:
///   lambda_(n,m) = sqrt(p_m(n-1) / p_m(n-2))  for n >= 2,
///                  sqrt(m / (m + 1))           for n = 0, m >= 1,
///                  1 / sqrt(m)                 for n = 1, m >= 1,
///                  1                           for n in {0, 1}, m < 1.
class QuadraticFamilyWeights final : public WeightSystem {
 public:
  QuadraticFamilyWeights(PolyFamilyParams params, std::string family_name = "prop51");

  double weight(const Vertex& v) const override;
  double log_weight(const Vertex& v) const override;
  std::string family() const override { return family_name_; }
  std::string describe() const override;

  const PolyFamilyParams& params() const noexcept { return params_; }

 private:
  PolyFamilyParams params_;
  std::string family_name_;
};

/// The isometric system on T_{k,inf}: lambda_(1,j) = 1/sqrt(k), others 1.
class KInfinityIsometricWeights final : public WeightSystem {
 public:
  explicit KInfinityIsometricWeights(int k);
  double weight(const Vertex& v) const override;
  std::string family() const override { return "tkinf-isometric"; }
  std::string describe() const override;
  int k() const noexcept { return k_; }

 private:
  int k_;
};

/// Weights read from CSV; vertices outside the table use the optional default.
class TableWeights final : public WeightSystem {
 public:
  TableWeights(std::map<Vertex, double> table, std::optional<double> fallback);
  double weight(const Vertex& v) const override;
  std::string family() const override { return "file"; }

 private:
  std::map<Vertex, double> table_;
  std::optional<double> fallback_;
};

/// Multiplies one vertex's weight by a factor. Used as a negative control.
class MutatedWeights final : public WeightSystem {
 public:
  MutatedWeights(WeightsPtr base, Vertex at, double factor);
  double weight(const Vertex& v) const override;
  std::string family() const override { return base_->family(); }
  std::string describe() const override;
  const WeightSystem& base() const { return *base_; }

 private:
  WeightsPtr base_;
  Vertex at_;
  double factor_;
};

/// Cauchy dual weights lambda'_v = lambda_v / ||S e_par(v)||^2.
class CauchyDualWeights final : public WeightSystem {
 public:
  CauchyDualWeights(WeightsPtr base, TreePtr kernel, double eps);

  double weight(const Vertex& v) const override;
  double log_weight(const Vertex& v) const override;
  std::string family() const override { return "dual(" + base_->family() + ")"; }
  std::string describe() const override { return "dual(" + base_->describe() + ")"; }

  const WeightSystem& base() const { return *base_; }
  const WeightsPtr& base_ptr() const { return base_; }

 private:
  WeightsPtr base_;
  TreePtr kernel_;
  double eps_;
};

/// log lambda^(n)(u), the moment along the n-step ancestor chain of u.
struct MomentValue {
  double log_value = 0.0;
  std::size_t n = 0;
  Vertex u;

  double value() const;
};

MomentValue moment(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& u,
                   std::size_t n);

/// ||S^n e_u||^2 = sum over Chi^<n>(u) of lambda^(n)(v)^2.
double shift_norm_sq(const WeightSystem& ws, const TreeKernel& kernel, const Vertex& u,
                     std::size_t n, std::size_t cap = default_vertex_cap());

inline constexpr double kDefaultDualEps = 1e-12;

/// Throws DomainError when the sampled ||S e_v||^2 falls below eps.
WeightsPtr cauchy_dual(WeightsPtr ws, TreePtr kernel, double eps = kDefaultDualEps);

/// Smallest ||S e_v||^2 over the window (left-invertibility proxy).
struct LowerNormBound {
  double min_norm_sq = 0.0;
  Vertex argmin;
};
LowerNormBound min_shift_norm_sq(const WeightSystem& ws, const TreeKernel& kernel,
                                 const Window& window);

enum class Tri { yes, no, inconclusive };

struct BalanceResult {
  Tri status = Tri::inconclusive;
  std::optional<std::pair<Vertex, Vertex>> witness;
  double max_spread = 0.0;  ///< largest within-class difference of ||S e||^2
  std::size_t classes = 0;
  std::size_t vertices = 0;
};

BalanceResult is_balanced(const WeightSystem& ws, const TreeKernel& kernel, const Window& window,
                          std::size_t n_max = kDefaultGenerationBound, double tol = 1e-10);

struct NormIncreasingResult {
  Tri status = Tri::inconclusive;
  std::optional<Vertex> witness;
  double min_norm_sq = 0.0;
  Vertex argmin;
  bool equality = false;  ///< every ||S e_v||^2 equals 1 within tol
};

NormIncreasingResult is_norm_increasing(const WeightSystem& ws, const TreeKernel& kernel,
                                        const Window& window, double tol = 1e-9);

/// Sampled sup of sum over Chi(v) of lambda_u^2; certifies the window only.
struct BoundednessEstimate {
  double sup = 0.0;
  Vertex argmax;
  std::size_t sampled = 0;
  bool global = false;
};

BoundednessEstimate boundedness_estimate(const WeightSystem& ws, const TreeKernel& kernel,
                                         const Window& window);

}  // namespace woldlab
