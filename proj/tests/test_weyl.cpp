#include "alf/weyl.hpp"

#include <doctest.h>

#include <random>

using namespace alf;
using C = std::complex<double>;
using Poly = TrigPolynomial<double>;

TEST_CASE("sample") {
  const auto one = sample(Poly::constant(1.0), 6);
  CHECK(one.values.size() == 36);
  CHECK((one.values.array() - C(1)).abs().maxCoeff() == 0.0);

  const auto w = sample(Poly::exponential(1, 0), 4);
  const C expect[] = {C(1, 0), C(0, 1), C(-1, 0), C(0, -1)};
  for (std::int64_t l1 = 0; l1 < 4; ++l1)
    for (std::int64_t l2 = 0; l2 < 4; ++l2) CHECK(std::abs(w.at({l1, l2}) - expect[l1]) < 1e-15);

  // aliasing: W((N, 0)) is the identity on the lattice, as direct evaluation shows
  const auto aliased = sample(Poly::exponential(7, 0), 7);
  const Poly direct = Poly::exponential(7, 0);
  for (std::int64_t l1 = 0; l1 < 7; ++l1) {
    CHECK(std::abs(aliased.at({l1, 3}) - C(1)) < 1e-15);
    CHECK(std::abs(direct(Vector2<double>(l1 / 7.0, 3 / 7.0)) - C(1)) < 1e-12);
  }
}

TEST_CASE("sample is a *-morphism") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> freq(-9, 9);
  std::normal_distribution<double> coeff;
  auto random_poly = [&] {
    Poly f;
    for (int k = 0; k < 4; ++k) f.terms[{freq(rng), freq(rng)}] += C(coeff(rng), coeff(rng));
    return f;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const Poly f = random_poly(), g = random_poly();
    const int n = 3 + trial % 7;
    const auto prod = sample(f * g, n);
    const Eigen::VectorXcd pointwise = sample(f, n).values.cwiseProduct(sample(g, n).values);
    CHECK((prod.values - pointwise).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((sample(f.conj(), n).values - sample(f, n).values.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((sample(f + g, n).values - sample(f, n).values - sample(g, n).values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tracial state of Weyl exponentials") {
  for (int n : {3, 4, 10}) {
    for (std::int64_t a = -2 * n; a <= 2 * n; a += 1)
      for (std::int64_t b : {std::int64_t{0}, std::int64_t{1}, std::int64_t{n}, std::int64_t{-n}, std::int64_t{3}}) {
        const C trace = sample(Poly::exponential(a, b), n).tracial_state();
        const double expect = (mod(a, n) == 0 && mod(b, n) == 0) ? 1.0 : 0.0;
        REQUIRE(std::abs(trace - C(expect)) < 1e-12);
      }
  }
}

TEST_CASE("coherent_weights") {
  const auto at_lattice = coherent_weights(Vector2<double>(0.3, 0.7), 10);
  CHECK(at_lattice.lambda11 == doctest::Approx(1.0));
  CHECK(at_lattice.lambda12 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_lattice.lambda21 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_lattice.lambda22 == doctest::Approx(0.0).epsilon(1e-12));

  const auto center = coherent_weights(Vector2<double>(0.25, 0.75), 2);
  for (double w : {center.lambda11, center.lambda12, center.lambda21, center.lambda22})
    CHECK(w == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(center.base == LatticePoint{0, 1});

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const auto w = coherent_weights(Vector2<double>(u(rng), u(rng)), 2 + i % 50);
    const double norm = w.lambda11 * w.lambda11 + w.lambda12 * w.lambda12 + w.lambda21 * w.lambda21 +
                        w.lambda22 * w.lambda22;
    REQUIRE(std::abs(norm - 1.0) < 1e-14);
  }
}

TEST_CASE("reconstruct") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  DiagonalObservable<double> m;
  m.grid = 8;
  m.values.resize(64);
  for (auto& v : m.values) v = C(g(rng), g(rng));

  // equals the stored value on lattice points
  for (std::int64_t l1 = 0; l1 < 8; ++l1)
    for (std::int64_t l2 = 0; l2 < 8; ++l2)
      REQUIRE(std::abs(reconstruct(m, Vector2<double>(l1 / 8.0, l2 / 8.0)) - m.at({l1, l2})) < 1e-12);

  const auto ones = sample(Poly::constant(1.0), 9);
  CHECK(std::abs(reconstruct(ones, Vector2<double>(0.123, 0.987)) - C(1)) < 1e-14);

  // f = W((1,0)), N = 10, x = (0.05, 0): half way between l1 = 0 and l1 = 1
  const auto w = sample(Poly::exponential(1, 0), 10);
  const C expect = (C(1) + std::polar(1.0, std::numbers::pi / 5)) / 2.0;
  CHECK(std::abs(reconstruct(w, Vector2<double>(0.05, 0.0)) - expect) < 1e-14);

  // lattice-point exactness for a sampled trigonometric polynomial
  Poly f = Poly::exponential(1, 1) + Poly::exponential(-2, 3, C(0.5, 0.25));
  const auto sf = sample(f, 12);
  for (std::int64_t l1 = 0; l1 < 12; ++l1)
    for (std::int64_t l2 = 0; l2 < 12; ++l2) {
      const Vector2<double> x(l1 / 12.0, l2 / 12.0);
      REQUIRE(std::abs(reconstruct(sf, x) - f(x)) < 1e-12);
    }
}

TEST_CASE("convergence_gap") {
  CHECK(convergence_gap(Poly::constant(1.0), 10, 50) < 1e-14);
  CHECK(convergence_gap(Poly::constant(1.0), 77, 50) < 1e-14);

  const auto w10 = Poly::exponential(1, 0);
  CHECK(convergence_gap(w10, 100, 101) < convergence_gap(w10, 10, 101));

  const auto w11 = Poly::exponential(1, 1);
  const double g10 = convergence_gap(w11, 10, 317);
  const double g50 = convergence_gap(w11, 50, 317);
  const double g250 = convergence_gap(w11, 250, 317);
  CHECK(g10 > g50);
  CHECK(g50 > g250);
  CHECK(g250 > 0);

  // deterministic
  CHECK(convergence_gap(w11, 50, 317) == g50);
  CHECK_THROWS_AS(convergence_gap(w11, 10, 0), std::invalid_argument);
}
