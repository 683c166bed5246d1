#include "woldlab/numeric.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "woldlab/error.hpp"

namespace woldlab {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
  abs_sum_ += std::fabs(x);
  ++count_;
}

double CompensatedSum::error_bound() const noexcept {
  constexpr double u = std::numeric_limits<double>::epsilon() / 2;
  return 2.0 * u * abs_sum_ + 2.0 * static_cast<double>(count_) * u * u * abs_sum_;
}

std::uint64_t binomial(unsigned m, unsigned k) {
  if (m > kMaxExactBinomial) {
    throw DomainError("binomial coefficient requested for m = " + std::to_string(m) +
                      " > " + std::to_string(kMaxExactBinomial));
  }
  if (k > m) return 0;
  if (k > m - k) k = m - k;
  __extension__ using u128 = unsigned __int128;
  u128 c = 1;
  for (unsigned i = 1; i <= k; ++i) {
    c = c * (m - k + i) / i;  // exact: c holds C(m - k + i, i) afterwards
  }
  return static_cast<std::uint64_t>(c);
}

std::size_t default_vertex_cap() {
  if (const char* env = std::getenv("WOLDLAB_MAX_VERTICES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultVertexCap;
}

}  // namespace woldlab
