#pragma once

#include <cstddef>
#include <cstdint>

namespace woldlab {

/// Neumaier-compensated accumulator. Also tracks sum |x_i| so callers can
/// report an a-priori bound on the accumulated rounding error.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }
  double abs_sum() const noexcept { return abs_sum_; }
  std::size_t count() const noexcept { return count_; }

  /// Bound on |value() - exact sum| (first-order, 2u * sum|x_i|).
  double error_bound() const noexcept;

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double abs_sum_ = 0.0;
  std::size_t count_ = 0;
};

/// Largest m for which binomial() is computed exactly.
inline constexpr unsigned kMaxExactBinomial = 60;

/// Exact C(m, k) in 64-bit integer arithmetic; throws DomainError for m > 60.
std::uint64_t binomial(unsigned m, unsigned k);

inline constexpr std::size_t kDefaultVertexCap = 1'000'000;

/// Vertex cap for set enumeration: WOLDLAB_MAX_VERTICES if set and valid,
/// otherwise kDefaultVertexCap.
std::size_t default_vertex_cap();

}  // namespace woldlab
