// Torus automorphisms T_alpha, sawtooth maps S_alpha and their lifts to the
// N x N lattice.
//
// Integer alpha goes through exact integer arithmetic with explicit mod-N
// reduction; no floating point ever enters that path. Real alpha uses the
// sawtooth map S_alpha on [0,1)^2 (or N * S_alpha(x / N) on [0,N)^2).
//
// Error bound of the floating path: each step of N * S_alpha(x / N) performs
// a handful of multiply/add operations on values bounded by (2 + |alpha|) N,
// followed by a floor-based reduction, so the per-step absolute error is
// O((2 + |alpha|) N eps). The amplification of earlier errors is bounded by
// the operator norm of the map (about lambda_plus per step), i.e. after n
// steps the error is below (2 + |alpha|) N eps * lambda_plus^n, which for
// n <= 16, N <= 10^3 and |alpha| <= 2 stays under 1e-6 lattice units. The one
// exception is a point landing within that error of the discontinuity line
// {x1 = 0}, where the branch of the fractional part may flip.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alf {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

using IntMatrix2 = Matrix2<std::int64_t>;

struct MapParams {
  double alpha = 1.0;
  int grid = 2;  // N, inverse lattice spacing

  MapParams() = default;
  MapParams(double alpha_, int grid_) : alpha(alpha_), grid(grid_) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
    if (grid < 2) throw std::invalid_argument("grid N must be >= 2");
  }

  bool integer_alpha() const { return std::isfinite(alpha) && alpha == std::floor(alpha); }

  std::int64_t int_alpha() const {
    if (!integer_alpha()) throw std::invalid_argument("alpha is not an integer");
    return static_cast<std::int64_t>(alpha);
  }
};

/// A point of (Z/NZ)^2.
struct LatticePoint {
  std::int64_t l1 = 0;
  std::int64_t l2 = 0;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// A point of [0,N)^2 (or [0,1)^2 for the unit-torus maps).
using TorusPoint = Vector2<double>;

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline LatticePoint reduce(const LatticePoint& p, std::int64_t n) { return {mod(p.l1, n), mod(p.l2, n)}; }

inline std::size_t lattice_index(const LatticePoint& p, std::int64_t n) {
  return static_cast<std::size_t>(p.l1 * n + p.l2);
}

inline LatticePoint lattice_point(std::size_t index, std::int64_t n) {
  const auto i = static_cast<std::int64_t>(index);
  return {i / n, i % n};
}

/// Fractional part in [0,1). Exact integers (the discontinuity set) map to 0.
template <typename Scalar>
Scalar frac(Scalar x) {
  Scalar f = x - std::floor(x);
  // x slightly below an integer can round to exactly 1
  if (f >= Scalar(1)) f = Scalar(0);
  return f;
}

/// Reduction into [0,n).
template <typename Scalar>
Scalar wrap(Scalar x, Scalar n) {
  Scalar r = x - n * std::floor(x / n);
  if (r >= n) r -= n;
  if (r < Scalar(0)) r = Scalar(0);
  return r;
}

// ---------------------------------------------------------------------------
// Matrices

template <typename Scalar>
Matrix2<Scalar> forward_matrix(Scalar alpha) {
  Matrix2<Scalar> m;
  m << Scalar(1) + alpha, Scalar(1), alpha, Scalar(1);
  return m;
}

/// Transpose action on frequencies: W(n) o T_alpha = W(T^tr n).
template <typename Scalar>
Matrix2<Scalar> transpose_matrix(Scalar alpha) {
  return forward_matrix(alpha).transpose();
}

template <typename Scalar>
Matrix2<Scalar> inverse_matrix(Scalar alpha) {
  Matrix2<Scalar> m;
  m << Scalar(1), Scalar(-1), -alpha, Scalar(1) + alpha;
  return m;
}

inline IntMatrix2 mat_mul_mod(const IntMatrix2& a, const IntMatrix2& b, std::int64_t n) {
  IntMatrix2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c(i, j) = mod(mod(a(i, 0) * b(0, j), n) + mod(a(i, 1) * b(1, j), n), n);
  return c;
}

inline LatticePoint mat_vec_mod(const IntMatrix2& a, const LatticePoint& v, std::int64_t n) {
  return {mod(mod(a(0, 0) * v.l1, n) + mod(a(0, 1) * v.l2, n), n),
          mod(mod(a(1, 0) * v.l1, n) + mod(a(1, 1) * v.l2, n), n)};
}

/// Integer matrix with entries reduced into [0,n).
inline IntMatrix2 reduced(const IntMatrix2& a, std::int64_t n) {
  return a.unaryExpr([n](std::int64_t v) { return mod(v, n); });
}

// ---------------------------------------------------------------------------
// Spectrum and regimes

enum class RegimeTag { hyperbolic, elliptic, parabolic };

std::string to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::hyperbolic;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
};

/// lambda_pm = (alpha + 2 +- sqrt((alpha + 2)^2 - 4)) / 2.
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> eigenvalues(Scalar alpha) {
  const Scalar trace = alpha + Scalar(2);
  // alpha (alpha + 4) == trace^2 - 4, without the cancellation near alpha = 0
  const std::complex<Scalar> root = std::sqrt(std::complex<Scalar>(alpha * (alpha + Scalar(4)), Scalar(0)));
  return {(trace + root) / Scalar(2), (trace - root) / Scalar(2)};
}

Regime classify_regime(double alpha);

/// Smallest k in [1, max_period] with T_alpha^k = Id over the integers, or 0.
int elliptic_period(std::int64_t alpha, int max_period = 12);

// ---------------------------------------------------------------------------
// Unit-torus maps

/// T_alpha x (mod 1) for integer alpha.
Vector2<double> apply_T(const MapParams& params, const Vector2<double>& x);

/// S_alpha x = ((1+alpha){x1} + x2, alpha {x1} + x2) (mod 1).
template <typename Scalar>
Vector2<Scalar> apply_S(Scalar alpha, const Vector2<Scalar>& x) {
  const Scalar q = frac(x(0));
  const Scalar p = x(1);
  // p' = p + alpha {q}, q' = q + p'
  const Scalar p_next = p + alpha * q;
  return {frac(q + p_next), frac(p_next)};
}

/// S_alpha^{-1} x = (1 0; -alpha 1) {(1 -1; 0 1) x} (mod 1).
template <typename Scalar>
Vector2<Scalar> apply_S_inverse(Scalar alpha, const Vector2<Scalar>& x) {
  const Scalar q = frac(x(0) - x(1));
  const Scalar p = frac(x(1));
  return {q, frac(p - alpha * q)};
}

inline Vector2<double> apply_S(const MapParams& params, const Vector2<double>& x) {
  return apply_S(params.alpha, x);
}

inline Vector2<double> apply_S_inverse(const MapParams& params, const Vector2<double>& x) {
  return apply_S_inverse(params.alpha, x);
}

// ---------------------------------------------------------------------------
// Lattice lifts U_alpha(x) = N T_alpha(x / N)

/// ((1+alpha) l1 + l2, alpha l1 + l2) mod N, exact.
LatticePoint apply_U_lattice(const MapParams& params, const LatticePoint& l);

/// N S_alpha(x / N) on [0,N)^2.
template <typename Scalar>
Vector2<Scalar> apply_U_torus(Scalar alpha, int grid, const Vector2<Scalar>& x) {
  const Scalar n = static_cast<Scalar>(grid);
  const Scalar q = wrap(x(0), n);
  const Scalar p_next = x(1) + alpha * q;
  return {wrap(q + p_next, n), wrap(p_next, n)};
}

/// (U^0 l, U^1 l, ..., U^{steps-1} l). Exact for integer alpha.
std::vector<TorusPoint> trajectory_U(const MapParams& params, const LatticePoint& l, int steps);

/// Integer-alpha orbit as lattice points.
std::vector<LatticePoint> lattice_trajectory(const MapParams& params, const LatticePoint& l, int steps);

}  // namespace alf
