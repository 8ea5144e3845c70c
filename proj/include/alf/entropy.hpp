// Entropy of exponential partitions of unity under discretized torus maps.
//
// Two engines compute the same quantity:
//  - frequency engine (integer alpha): the histogram nu of the string-image
//    map, built by a convolution recursion over time steps, and its Shannon
//    entropy;
//  - Gram engine (any alpha): the N^2 x N^2 Gram matrix G(n) of the string
//    amplitude vectors, built as a Hadamard product over time steps, and its
//    Von Neumann entropy.
// oracle_density_matrix is the direct D^n x D^n multitime correlation matrix,
// usable only at test scale.
#pragma once

#include "alf/maps.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alf {

/// The set {r_1 .. r_D} of lattice points defining the partition of unity.
class Partition {
 public:
  Partition(std::vector<LatticePoint> points, int grid);

  const std::vector<LatticePoint>& points() const { return points_; }
  int grid() const { return grid_; }
  std::size_t size() const { return points_.size(); }
  const LatticePoint& operator[](std::size_t j) const { return points_[j]; }

 private:
  std::vector<LatticePoint> points_;
  int grid_;
};

/// Symbols i_p are 0-based indices into the partition.
using SymbolString = std::vector<std::size_t>;

struct FrequencyField {
  int grid = 2;
  int n = 0;
  std::vector<double> nu;
  // Exact counts #[r] with denominator D^n, while D^n fits in 64 bits.
  std::vector<std::uint64_t> counts;
  std::uint64_t denominator = 0;

  bool exact() const { return !counts.empty(); }
  double at(const LatticePoint& r) const { return nu[lattice_index(reduce(r, grid), grid)]; }
};

template <typename Scalar = double>
struct GramMatrix {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix entries;
  int n = 0;
};

struct EntropyRow {
  int n = 0;
  double H = 0;  // nats
  double h = 0;  // nats per step, H / n
};

using EntropySeries = std::vector<EntropyRow>;

enum class Engine { frequency, gram, automatic };

Engine parse_engine(const std::string& name);
std::string to_string(Engine engine);

// ---------------------------------------------------------------------------
// Frequency engine

/// (T^tr)^p r_j mod N for p = 0..steps-1; row p, column j.
std::vector<std::vector<LatticePoint>> transported_partition(const Partition& part, const MapParams& params, int steps);

/// sum_p (T^tr)^p r_{i_p} mod N.
LatticePoint string_image(const Partition& part, const MapParams& params, const SymbolString& symbols);

/// nu(r) = #{strings i of length n : string_image(i) = r} / D^n.
FrequencyField frequencies(const Partition& part, const MapParams& params, int n);

/// Incremental form of frequencies(): step() advances n by one.
class FrequencyRecursion {
 public:
  FrequencyRecursion(const Partition& part, const MapParams& params);

  /// Advances to n + 1 and returns the new field.
  const FrequencyField& step();
  const FrequencyField& field() const { return field_; }

 private:
  void normalize();

  Partition part_;
  std::int64_t grid_;
  IntMatrix2 transpose_;
  std::vector<LatticePoint> shifts_;  // (T^tr)^n r_j
  FrequencyField field_;
  std::vector<double> prob_;  // used once counts overflow
};

/// -sum nu ln nu, with 0 ln 0 = 0.
double shannon_entropy(const FrequencyField& nu);

/// Lattice points where nu > 0, in lattice order.
std::vector<LatticePoint> support_set(const FrequencyField& nu);

// ---------------------------------------------------------------------------
// Gram engine

/// Incremental G(n): G(n+1) = G(n) o K_n (Hadamard), where
/// K_p(l1, l2) = (1/D) sum_j exp(2 pi i / N r_j.(U^p(l1) - U^p(l2))).
template <typename Scalar = double>
class GramRecursion {
 public:
  using Complex = std::complex<Scalar>;
  using Matrix = typename GramMatrix<Scalar>::Matrix;

  GramRecursion(const Partition& part, const MapParams& params) : part_(part), params_(params) {
    if (part.grid() != params.grid) throw std::invalid_argument("partition and map use different grids");
    const int grid = params.grid;
    const Eigen::Index dim = static_cast<Eigen::Index>(grid) * grid;
    gram_.entries = Matrix::Constant(dim, dim, Complex(Scalar(1) / static_cast<Scalar>(dim)));
    gram_.n = 0;
    exact_ = params.integer_alpha();
    if (exact_) {
      int_pos_.resize(static_cast<std::size_t>(dim));
      for (Eigen::Index i = 0; i < dim; ++i) int_pos_[static_cast<std::size_t>(i)] = lattice_point(static_cast<std::size_t>(i), grid);
      forward_ = reduced(forward_matrix<std::int64_t>(params.int_alpha()), grid);
    } else {
      real_pos_.resize(static_cast<std::size_t>(dim));
      for (Eigen::Index i = 0; i < dim; ++i) {
        const auto l = lattice_point(static_cast<std::size_t>(i), grid);
        real_pos_[static_cast<std::size_t>(i)] = Vector2<Scalar>(static_cast<Scalar>(l.l1), static_cast<Scalar>(l.l2));
      }
    }
  }

  const GramMatrix<Scalar>& step() {
    const int grid = params_.grid;
    const Eigen::Index dim = gram_.entries.rows();
    const Eigen::Index d = static_cast<Eigen::Index>(part_.size());
    const Scalar two_pi_over_n = Scalar(2) * std::numbers::pi_v<Scalar> / static_cast<Scalar>(grid);

    Matrix phases(dim, d);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto& r = part_[static_cast<std::size_t>(j)];
        Scalar angle;
        if (exact_) {
          const auto& u = int_pos_[static_cast<std::size_t>(i)];
          angle = two_pi_over_n * static_cast<Scalar>(mod(r.l1 * u.l1 + r.l2 * u.l2, grid));
        } else {
          const auto& u = real_pos_[static_cast<std::size_t>(i)];
          const Scalar dot = static_cast<Scalar>(r.l1) * u(0) + static_cast<Scalar>(r.l2) * u(1);
          angle = two_pi_over_n * wrap(dot, static_cast<Scalar>(grid));
        }
        phases(i, j) = std::polar(Scalar(1), angle);
      }
    Matrix kernel = phases * phases.adjoint();
    gram_.entries.array() *= kernel.array() / static_cast<Scalar>(d);
    ++gram_.n;

    if (exact_) {
      for (auto& u : int_pos_) u = mat_vec_mod(forward_, u, grid);
    } else {
      for (auto& u : real_pos_) u = apply_U_torus(static_cast<Scalar>(params_.alpha), grid, u);
    }
    return gram_;
  }

  const GramMatrix<Scalar>& matrix() const { return gram_; }

 private:
  Partition part_;
  MapParams params_;
  GramMatrix<Scalar> gram_;
  bool exact_ = false;
  IntMatrix2 forward_;
  std::vector<LatticePoint> int_pos_;
  std::vector<Vector2<Scalar>> real_pos_;
};

/// G(n) with entries (1/N^2) prod_p K_p(l1, l2).
template <typename Scalar = double>
GramMatrix<Scalar> gram_matrix(const Partition& part, const MapParams& params, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  GramRecursion<Scalar> rec(part, params);
  for (int k = 0; k < n; ++k) rec.step();
  return rec.matrix();
}

struct GramDiagnostics {
  double hermitian_error = 0;  // max |G - G^H|
  double trace_error = 0;      // |Tr G - 1|
  double min_eigenvalue = 0;
};

/// Sorted (ascending) eigenvalues of a Hermitian matrix.
///
/// The implicit QR iteration occasionally stalls on the highly degenerate
/// spectra of Gram matrices; a rescaled retry and then the real symmetric
/// embedding [Re -Im; Im Re] (same spectrum, each eigenvalue doubled) are
/// used as fallbacks.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hermitian_eigenvalues(
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& m) {
  using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) return solver.eigenvalues();

  const Scalar scale = m.cwiseAbs().maxCoeff();
  if (scale > Scalar(0)) {
    solver.compute(m / scale, Eigen::EigenvaluesOnly);
    if (solver.info() == Eigen::Success) return solver.eigenvalues() * scale;
  }

  const Eigen::Index n = m.rows();
  RealMatrix embedded(2 * n, 2 * n);
  embedded << m.real(), -m.imag(), m.imag(), m.real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> real_solver(embedded, Eigen::EigenvaluesOnly);
  if (real_solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = real_solver.eigenvalues()(2 * i);
  return out;
}

template <typename Scalar>
GramDiagnostics diagnose(const GramMatrix<Scalar>& g) {
  GramDiagnostics out;
  out.hermitian_error = static_cast<double>((g.entries - g.entries.adjoint()).cwiseAbs().maxCoeff());
  out.trace_error = static_cast<double>(std::abs(g.entries.trace() - std::complex<Scalar>(1)));
  out.min_eigenvalue = static_cast<double>(hermitian_eigenvalues<Scalar>(g.entries).minCoeff());
  return out;
}

/// Eigenvalues below this are a malformed (non-PSD) matrix.
inline constexpr double kNegativeEigenvalueLimit = -1e-8;

/// -sum eta ln eta over eigenvalues clamped to [0, 1].
template <typename Scalar>
double von_neumann_entropy(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& eigenvalues) {
  double h = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    double eta = static_cast<double>(eigenvalues(i));
    if (eta < kNegativeEigenvalueLimit)
      throw std::domain_error("matrix is not positive semidefinite: eigenvalue " + std::to_string(eta));
    eta = std::clamp(eta, 0.0, 1.0);
    if (eta > 0) h -= eta * std::log(eta);
  }
  return h;
}

template <typename Scalar>
double gram_entropy(const GramMatrix<Scalar>& g) {
  return von_neumann_entropy<Scalar>(hermitian_eigenvalues<Scalar>(g.entries));
}

// ---------------------------------------------------------------------------

/// Rows (n, H(n), H(n)/n) for n = 1..n_max. Engine::automatic picks the
/// frequency engine for integer alpha and the Gram engine otherwise.
EntropySeries entropy_series(const Partition& part, const MapParams& params, int n_max, Engine engine);

/// Largest D^n accepted by oracle_density_matrix.
inline constexpr std::size_t kOracleMaxDimension = 4096;

/// The D^n x D^n multitime correlation matrix, by direct summation over the
/// lattice: rho_{i,j} = (1/N^2 D^n) sum_l exp(2 pi i / N sum_p (r_{i_p} - r_{j_p}).U^p(l)).
Eigen::MatrixXcd oracle_density_matrix(const Partition& part, const MapParams& params, int n);

}  // namespace alf
