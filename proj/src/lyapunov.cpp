#include "alf/lyapunov.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace alf {

double compactified_time(int n) { return 2.0 / std::numbers::pi * std::atan(static_cast<double>(n - 1)); }

CompactifiedSeries compactify(const EntropySeries& series) {
  if (series.empty()) throw std::invalid_argument("cannot compactify an empty series");
  CompactifiedSeries out;
  out.reserve(series.size());
  for (const auto& row : series) out.push_back({compactified_time(row.n), row.h});
  return out;
}

LyapunovEstimate lagrange_extrapolate(const CompactifiedSeries& series, int m) {
  if (m < 2 || static_cast<std::size_t>(m) > series.size())
    throw std::invalid_argument("degree m must satisfy 2 <= m <= series length");
  double value = 0;
  for (int i = 0; i < m; ++i) {
    double basis = 1;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double denom = series[i].t - series[j].t;
      if (denom == 0) throw std::invalid_argument("duplicate abscissae in Lagrange extrapolation");
      basis *= (1.0 - series[j].t) / denom;
    }
    value += series[i].h * basis;
  }
  return {m, value};
}

double theoretical_lyapunov(double alpha) {
  if (!(alpha > 0 || alpha < -4))
    throw std::domain_error("theoretical Lyapunov exponent needs hyperbolic alpha (alpha > 0 or alpha < -4), got " +
                            std::to_string(alpha));
  // for alpha < -4 the dominant eigenvalue is negative; its modulus is |alpha + 2 - sqrt(...)| / 2
  if (alpha < -4) return std::log(std::abs(alpha + 2 - std::sqrt(alpha * (alpha + 4)))) - std::log(2.0);
  return std::log(alpha + 2 + std::sqrt(alpha * (alpha + 4))) - std::log(2.0);
}

double breaking_time(double alpha, double grid) { return 2.0 * std::log(grid) / theoretical_lyapunov(alpha); }

double naive_transition(int partition_size, double grid) {
  if (partition_size < 2) throw std::invalid_argument("naive transition needs D >= 2");
  return 2.0 * std::log(grid) / std::log(static_cast<double>(partition_size));
}

}  // namespace alf
