// Discretization of trigonometric polynomials on the unit torus onto the
// N x N lattice (diagonal matrices), and the coherent-state reconstruction
// that maps diagonal observables back to functions.
#pragma once

#include "alf/maps.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace alf {

using Frequency = std::pair<std::int64_t, std::int64_t>;

/// f(x) = sum_n c_n exp(2 pi i n.x) with finitely many nonzero c_n.
template <typename Scalar = double>
struct TrigPolynomial {
  using Complex = std::complex<Scalar>;
  std::map<Frequency, Complex> terms;

  /// The Weyl exponential W(n)(x) = exp(2 pi i n.x).
  static TrigPolynomial exponential(std::int64_t n1, std::int64_t n2, Complex coeff = Complex(1)) {
    TrigPolynomial f;
    f.terms[{n1, n2}] = coeff;
    return f;
  }

  static TrigPolynomial constant(Complex c) { return exponential(0, 0, c); }

  Complex operator()(const Vector2<Scalar>& x) const {
    Complex sum(0);
    for (const auto& [n, c] : terms) {
      const Scalar phase = Scalar(2) * std::numbers::pi_v<Scalar> *
                           (static_cast<Scalar>(n.first) * x(0) + static_cast<Scalar>(n.second) * x(1));
      sum += c * std::polar(Scalar(1), phase);
    }
    return sum;
  }

  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) {
    for (const auto& [n, c] : b.terms) a.terms[n] += c;
    return a;
  }

  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
    TrigPolynomial out;
    for (const auto& [n, c] : a.terms)
      for (const auto& [m, d] : b.terms) out.terms[{n.first + m.first, n.second + m.second}] += c * d;
    return out;
  }

  TrigPolynomial conj() const {
    TrigPolynomial out;
    for (const auto& [n, c] : terms) out.terms[{-n.first, -n.second}] = std::conj(c);
    return out;
  }
};

/// Diagonal of an N^2 x N^2 diagonal matrix, indexed by lattice_index.
template <typename Scalar = double>
struct DiagonalObservable {
  int grid = 2;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> values;

  std::complex<Scalar> at(const LatticePoint& l) const { return values(lattice_index(reduce(l, grid), grid)); }

  /// Normalized trace (1/N^2) Tr M, the tracial state.
  std::complex<Scalar> tracial_state() const { return values.mean(); }
};

template <typename Scalar = double>
struct CoherentWeights {
  Scalar lambda11 = 1, lambda12 = 0, lambda21 = 0, lambda22 = 0;
  LatticePoint base;
};

/// sum_l f(l / N) |l><l|.
template <typename Scalar>
DiagonalObservable<Scalar> sample(const TrigPolynomial<Scalar>& f, int grid) {
  if (grid < 2) throw std::invalid_argument("grid N must be >= 2");
  DiagonalObservable<Scalar> m;
  m.grid = grid;
  m.values.resize(static_cast<Eigen::Index>(grid) * grid);
  const Scalar n = static_cast<Scalar>(grid);
  for (std::int64_t l1 = 0; l1 < grid; ++l1)
    for (std::int64_t l2 = 0; l2 < grid; ++l2) {
      // reduce n.l mod N in integers so aliased frequencies agree exactly
      std::complex<Scalar> v(0);
      for (const auto& [k, c] : f.terms) {
        const std::int64_t phase = mod(mod(k.first, grid) * l1 + mod(k.second, grid) * l2, grid);
        v += c * std::polar(Scalar(1), Scalar(2) * std::numbers::pi_v<Scalar> * static_cast<Scalar>(phase) / n);
      }
      m.values(static_cast<Eigen::Index>(l1 * grid + l2)) = v;
    }
  return m;
}

/// Weights of |beta(x)> on the four corners of the lattice cell containing x.
template <typename Scalar>
CoherentWeights<Scalar> coherent_weights(const Vector2<Scalar>& x, int grid) {
  const Scalar n = static_cast<Scalar>(grid);
  const Scalar s1 = n * frac(x(0));
  const Scalar s2 = n * frac(x(1));
  const Scalar f1 = frac(s1);
  const Scalar f2 = frac(s2);
  const Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
  const Scalar c1 = std::cos(half_pi * f1), si1 = std::sin(half_pi * f1);
  const Scalar c2 = std::cos(half_pi * f2), si2 = std::sin(half_pi * f2);
  CoherentWeights<Scalar> w;
  w.lambda11 = c1 * c2;
  w.lambda12 = c1 * si2;
  w.lambda21 = si1 * c2;
  w.lambda22 = si1 * si2;
  w.base = reduce(LatticePoint{static_cast<std::int64_t>(std::floor(s1)), static_cast<std::int64_t>(std::floor(s2))},
                  grid);
  return w;
}

/// <beta(x)| M |beta(x)>.
template <typename Scalar>
std::complex<Scalar> reconstruct(const DiagonalObservable<Scalar>& m, const Vector2<Scalar>& x) {
  const auto w = coherent_weights(x, m.grid);
  const auto& b = w.base;
  return w.lambda11 * w.lambda11 * m.at(b) + w.lambda12 * w.lambda12 * m.at({b.l1, b.l2 + 1}) +
         w.lambda21 * w.lambda21 * m.at({b.l1 + 1, b.l2}) + w.lambda22 * w.lambda22 * m.at({b.l1 + 1, b.l2 + 1});
}

/// Estimate of sup_x |reconstruct(sample(f), x) - f(x)| over a fixed
/// samples x samples grid, shifted off the lattice by irrational offsets.
template <typename Scalar>
Scalar convergence_gap(const TrigPolynomial<Scalar>& f, int grid, int samples) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const auto m = sample(f, grid);
  const Scalar s = static_cast<Scalar>(samples);
  const Scalar off1 = std::numbers::sqrt2_v<Scalar> - Scalar(1);
  const Scalar off2 = std::numbers::sqrt3_v<Scalar> - Scalar(1);
  Scalar gap = 0;
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) {
      const Vector2<Scalar> x((static_cast<Scalar>(i) + off1) / s, (static_cast<Scalar>(j) + off2) / s);
      gap = std::max(gap, std::abs(reconstruct(m, x) - f(x)));
    }
  return gap;
}

}  // namespace alf
