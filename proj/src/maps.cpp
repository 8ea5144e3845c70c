#include "alf/maps.hpp"

namespace alf {

std::string to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::hyperbolic:
      return "hyperbolic";
    case RegimeTag::elliptic:
      return "elliptic";
    case RegimeTag::parabolic:
      return "parabolic";
  }
  return "unknown";
}

Regime classify_regime(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
  Regime r;
  std::tie(r.lambda_plus, r.lambda_minus) = eigenvalues(alpha);
  // (alpha + 2)^2 - 4 = alpha (alpha + 4): zero at alpha in {0, -4}
  const double disc = alpha * (alpha + 4.0);
  if (disc == 0.0)
    r.tag = RegimeTag::parabolic;
  else if (disc < 0.0)
    r.tag = RegimeTag::elliptic;
  else
    r.tag = RegimeTag::hyperbolic;
  return r;
}

int elliptic_period(std::int64_t alpha, int max_period) {
  const IntMatrix2 t = forward_matrix<std::int64_t>(alpha);
  IntMatrix2 power = IntMatrix2::Identity();
  for (int k = 1; k <= max_period; ++k) {
    power = power * t;
    if (power == IntMatrix2::Identity()) return k;
    // entries of hyperbolic powers grow without bound
    if (power.cwiseAbs().maxCoeff() > (std::int64_t{1} << 40)) return 0;
  }
  return 0;
}

Vector2<double> apply_T(const MapParams& params, const Vector2<double>& x) {
  if (!params.integer_alpha())
    throw std::invalid_argument("apply_T requires integer alpha; use apply_S for real alpha");
  const double a = params.alpha;
  return {frac((1.0 + a) * x(0) + x(1)), frac(a * x(0) + x(1))};
}

LatticePoint apply_U_lattice(const MapParams& params, const LatticePoint& l) {
  const std::int64_t n = params.grid;
  const IntMatrix2 t = reduced(forward_matrix<std::int64_t>(params.int_alpha()), n);
  return mat_vec_mod(t, reduce(l, n), n);
}

std::vector<LatticePoint> lattice_trajectory(const MapParams& params, const LatticePoint& l, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const std::int64_t n = params.grid;
  const IntMatrix2 t = reduced(forward_matrix<std::int64_t>(params.int_alpha()), n);
  std::vector<LatticePoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  out.push_back(reduce(l, n));
  for (int k = 1; k < steps; ++k) out.push_back(mat_vec_mod(t, out.back(), n));
  return out;
}

std::vector<TorusPoint> trajectory_U(const MapParams& params, const LatticePoint& l, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<TorusPoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  if (params.integer_alpha()) {
    for (const auto& p : lattice_trajectory(params, l, steps))
      out.emplace_back(static_cast<double>(p.l1), static_cast<double>(p.l2));
    return out;
  }
  const LatticePoint start = reduce(l, params.grid);
  TorusPoint x(static_cast<double>(start.l1), static_cast<double>(start.l2));
  out.push_back(x);
  for (int k = 1; k < steps; ++k) {
    x = apply_U_torus(params.alpha, params.grid, x);
    out.push_back(x);
  }
  return out;
}

}  // namespace alf
