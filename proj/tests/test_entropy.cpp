#include "alf/entropy.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace alf;

namespace {

Partition random_points(int d, int grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> u(0, grid - 1);
  std::set<LatticePoint> pts;
  while (static_cast<int>(pts.size()) < d) pts.insert({u(rng), u(rng)});
  std::vector<LatticePoint> v(pts.begin(), pts.end());
  std::shuffle(v.begin(), v.end(), rng);
  return Partition(v, grid);
}

Eigen::VectorXd sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("Partition validation") {
  CHECK_THROWS_AS(Partition({}, 5), std::invalid_argument);
  CHECK_THROWS_AS(Partition({{0, 0}, {0, 0}}, 5), std::invalid_argument);
  CHECK_THROWS_AS(Partition({{5, 0}}, 5), std::invalid_argument);
  CHECK_THROWS_AS(Partition({{0, -1}}, 5), std::invalid_argument);
  CHECK(Partition({{0, 0}, {4, 4}}, 5).size() == 2);
}

TEST_CASE("string_image") {
  const Partition part({{0, 0}, {1, 0}}, 2);
  const MapParams cat(1, 2);
  CHECK(string_image(part, cat, {0}) == LatticePoint{0, 0});
  CHECK(string_image(part, cat, {1}) == LatticePoint{1, 0});
  // r + T^tr r = (1,0) + (2,1) = (3,1) = (1,1) mod 2
  CHECK(string_image(part, cat, {1, 1}) == LatticePoint{1, 1});

  std::set<LatticePoint> images;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) images.insert(string_image(part, cat, {a, b}));
  CHECK(images.size() == 4);

  CHECK_THROWS_AS(string_image(part, MapParams(0.5, 2), {0}), std::invalid_argument);
  CHECK_THROWS_AS(string_image(part, cat, {}), std::invalid_argument);
  CHECK_THROWS_AS(string_image(part, cat, {2}), std::out_of_range);

  SUBCASE("agrees with the enumeration oracle") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
      const int grid = 2 + trial % 9;
      const int d = 1 + trial % 3;
      const Partition p = random_points(std::min(d, grid * grid), grid, rng);
      const std::int64_t alpha = trial % 7 - 3;
      const int n = 1 + trial % 5;
      const auto counts = oracle::brute_force_counts(p.points(), alpha, grid, n);
      SymbolString s(static_cast<std::size_t>(n));
      for (auto& x : s) x = rng() % p.size();
      const auto img = string_image(p, MapParams(static_cast<double>(alpha), grid), s);
      CHECK(counts[lattice_index(img, grid)] > 0);
    }
  }
}

TEST_CASE("frequencies") {
  SUBCASE("n = 1 is uniform on the partition") {
    const Partition p({{1, 2}, {3, 3}, {0, 4}}, 5);
    const auto nu = frequencies(p, MapParams(2, 5), 1);
    for (std::size_t i = 0; i < nu.nu.size(); ++i) {
      const auto l = lattice_point(i, 5);
      const bool member = std::find(p.points().begin(), p.points().end(), l) != p.points().end();
      CHECK(nu.nu[i] == doctest::Approx(member ? 1.0 / 3 : 0.0));
    }
    CHECK(support_set(nu) == std::vector<LatticePoint>{{0, 4}, {1, 2}, {3, 3}});
  }

  SUBCASE("N = 2 cat map, two steps cover the torus uniformly") {
    const auto nu = frequencies(Partition({{0, 0}, {1, 0}}, 2), MapParams(1, 2), 2);
    for (double v : nu.nu) CHECK(v == 0.25);
    CHECK(shannon_entropy(nu) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(nu.exact());
    CHECK(nu.denominator == 4);
  }

  SUBCASE("exhaustive oracle: D <= 3, n <= 6, N <= 8") {
    std::mt19937_64 rng(11);
    int cases = 0;
    for (int grid = 2; grid <= 8; ++grid)
      for (int d = 1; d <= 3; ++d)
        for (std::int64_t alpha : {-3, -2, -1, 0, 1, 2, 5}) {
          if (d > grid * grid) continue;
          const Partition p = random_points(d, grid, rng);
          FrequencyRecursion rec(p, MapParams(static_cast<double>(alpha), grid));
          for (int n = 1; n <= 6; ++n) {
            const auto& nu = rec.step();
            const auto counts = oracle::brute_force_counts(p.points(), alpha, grid, n);
            REQUIRE(nu.counts == counts);
            ++cases;
          }
        }
    CHECK(cases == 7 * 3 * 7 * 6);
  }

  CHECK_THROWS_AS(frequencies(Partition({{0, 0}}, 3), MapParams(0.5, 3), 1), std::invalid_argument);
  CHECK_THROWS_AS(frequencies(Partition({{0, 0}}, 3), MapParams(1, 3), 0), std::invalid_argument);
  CHECK_THROWS_AS(frequencies(Partition({{0, 0}}, 3), MapParams(1, 4), 1), std::invalid_argument);
}

TEST_CASE("frequency field invariants") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const int grid = 5 + 7 * trial;
    const int d = 2 + trial % 4;
    const Partition p = random_points(d, grid, rng);
    FrequencyRecursion rec(p, MapParams(static_cast<double>(trial % 5 - 2), grid));
    double previous = 0;
    for (int n = 1; n <= 30; ++n) {
      const auto& nu = rec.step();
      double total = 0;
      for (double v : nu.nu) {
        REQUIRE(v >= 0);
        total += v;
      }
      REQUIRE(std::abs(total - 1.0) < 1e-12);
      if (nu.exact()) {
        std::uint64_t sum = 0;
        for (auto c : nu.counts) sum += c;
        REQUIRE(sum == nu.denominator);
      }
      const double h = shannon_entropy(nu);
      REQUIRE(h >= previous - 1e-9);
      REQUIRE(h <= std::min(n * std::log(static_cast<double>(d)), 2 * std::log(static_cast<double>(grid))) + 1e-9);
      REQUIRE(support_set(nu).size() <= static_cast<std::size_t>(grid) * grid);
      previous = h;
    }
  }
}

TEST_CASE("frequency counts switch to ratios when D^n overflows 64 bits") {
  const Partition p({{0, 1}, {2, 3}, {4, 0}, {1, 1}, {3, 2}}, 7);
  FrequencyRecursion rec(p, MapParams(1, 7));
  for (int n = 1; n <= 27; ++n) {
    const auto& nu = rec.step();
    CHECK(nu.exact());  // 5^27 < 2^64
  }
  const auto& nu = rec.step();  // 5^28 > 2^64
  CHECK_FALSE(nu.exact());
  double total = 0;
  for (double v : nu.nu) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shannon_entropy(nu) == doctest::Approx(2 * std::log(7.0)).epsilon(1e-9));
}

TEST_CASE("shannon_entropy") {
  FrequencyField uniform;
  uniform.grid = 6;
  uniform.nu.assign(36, 1.0 / 36);
  CHECK(shannon_entropy(uniform) == doctest::Approx(2 * std::log(6.0)).epsilon(1e-14));

  FrequencyField point;
  point.grid = 6;
  point.nu.assign(36, 0.0);
  point.nu[7] = 1.0;
  CHECK(shannon_entropy(point) == 0.0);

  FrequencyField quarter;
  quarter.grid = 2;
  quarter.nu = {0.25, 0.25, 0.25, 0.25};
  CHECK(shannon_entropy(quarter) == doctest::Approx(1.3862943611198906));
}

TEST_CASE("gram_matrix") {
  SUBCASE("full-lattice partition at n = 1 is I / N^2") {
    std::vector<LatticePoint> all;
    for (std::int64_t a = 0; a < 4; ++a)
      for (std::int64_t b = 0; b < 4; ++b) all.push_back({a, b});
    const auto g = gram_matrix(Partition(all, 4), MapParams(0.3, 4), 1);
    CHECK((g.entries - Eigen::MatrixXcd::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(gram_entropy(g) == doctest::Approx(2 * std::log(4.0)).epsilon(1e-12));
  }

  SUBCASE("factorization equals the direct D^n sum") {
    const Partition p({{0, 1}, {2, 1}}, 3);
    const auto g = gram_matrix(p, MapParams(1, 3), 3);
    const Eigen::MatrixXcd direct = oracle::direct_gram(p.points(), 1, 3, 3);
    CHECK((g.entries - direct).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("factorization, integer and sawtooth alpha, D^n <= 512") {
    std::mt19937_64 rng(31);
    for (double alpha : {1.0, 2.0, -1.0, 0.0, 0.25, 0.5, 0.95, 1.7, -0.6}) {
      for (int grid : {3, 5, 6}) {
        const int d = 2 + static_cast<int>(rng() % 2);
        const Partition p = random_points(d, grid, rng);
        const int n_max = d == 2 ? 9 : 5;
        GramRecursion<double> rec(p, MapParams(alpha, grid));
        for (int n = 1; n <= n_max; ++n) {
          const auto& g = rec.step();
          const Eigen::MatrixXcd direct = oracle::direct_gram(p.points(), alpha, grid, n);
          REQUIRE((g.entries - direct).cwiseAbs().maxCoeff() < 1e-12);
          const auto diag = diagnose(g);
          REQUIRE(diag.hermitian_error < 1e-10);
          REQUIRE(diag.trace_error < 1e-9);
          REQUIRE(diag.min_eigenvalue >= -1e-10);
        }
      }
    }
  }

  SUBCASE("float scalar") {
    const Partition p({{0, 1}, {2, 1}, {1, 1}}, 5);
    const auto gf = gram_matrix<float>(p, MapParams(1, 5), 3);
    const auto gd = gram_matrix<double>(p, MapParams(1, 5), 3);
    CHECK((gf.entries.cast<std::complex<double>>() - gd.entries).cwiseAbs().maxCoeff() < 1e-5);
  }

  CHECK_THROWS_AS(gram_matrix(Partition({{0, 0}}, 3), MapParams(1, 3), 0), std::invalid_argument);
}

TEST_CASE("gram_entropy") {
  CHECK(gram_entropy(GramMatrix<double>{Eigen::MatrixXcd::Identity(25, 25) / 25.0, 1}) ==
        doctest::Approx(2 * std::log(5.0)).epsilon(1e-13));

  Eigen::VectorXcd v = Eigen::VectorXcd::Random(9);
  v.normalize();
  CHECK(std::abs(gram_entropy(GramMatrix<double>{v * v.adjoint(), 1})) < 1e-10);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(4, 4) / 2.0;
  bad(3, 3) = -0.5;
  CHECK_THROWS_AS(gram_entropy(GramMatrix<double>{bad, 1}), std::domain_error);

  // tiny negative roundoff is clamped
  Eigen::MatrixXcd nearly = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  nearly(0, 0) += 1e-11;
  nearly(1, 1) -= 1e-11;
  Eigen::MatrixXcd with_negative = Eigen::MatrixXcd::Zero(3, 3);
  with_negative.topLeftCorner(2, 2) = nearly;
  with_negative(2, 2) = -1e-11;
  CHECK(gram_entropy(GramMatrix<double>{with_negative, 1}) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("spectral equivalence for integer alpha: eig G(n) = sorted nu") {
  std::mt19937_64 rng(41);
  for (int grid = 3; grid <= 12; grid += 3)
    for (int d = 2; d <= 4; ++d)
      for (double alpha : {1.0, 2.0, -2.0, 0.0, 17.0}) {
        const Partition p = random_points(d, grid, rng);
        const MapParams params(alpha, grid);
        GramRecursion<double> gram(p, params);
        FrequencyRecursion freq(p, params);
        for (int n = 1; n <= 4; ++n) {
          const auto& g = gram.step();
          const auto& nu = freq.step();
          const Eigen::VectorXd eig = hermitian_eigenvalues<double>(g.entries);
          REQUIRE((eig - sorted(nu.nu)).cwiseAbs().maxCoeff() < 1e-8);
          REQUIRE(std::abs(gram_entropy(g) - shannon_entropy(nu)) < 1e-8);
        }
      }
}

TEST_CASE("oracle_density_matrix") {
  SUBCASE("trace and Hermiticity") {
    const Partition p({{0, 1}, {3, 2}, {4, 4}}, 5);
    const auto rho = oracle_density_matrix(p, MapParams(1, 5), 3);
    CHECK(rho.rows() == 27);
    CHECK(std::abs(rho.trace() - std::complex<double>(1)) < 1e-12);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    for (Eigen::Index i = 0; i < rho.rows(); ++i) CHECK(rho(i, i).real() == doctest::Approx(1.0 / 27));
  }

  SUBCASE("N = 5, D = 2, n = 3, alpha = 1: nonzero spectra of rho and G(n) agree") {
    const Partition p({{1, 3}, {4, 0}}, 5);
    const MapParams params(1, 5);
    std::vector<double> a, b;
    const Eigen::VectorXd rho_eig = oracle::spectrum(oracle_density_matrix(p, params, 3));
    const Eigen::VectorXd g_eig = hermitian_eigenvalues<double>(gram_matrix(p, params, 3).entries);
    for (auto v : rho_eig) if (v > 1e-9) a.push_back(v);
    for (auto v : g_eig) if (v > 1e-9) b.push_back(v);
    REQUIRE(a.size() == b.size());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
  }

  SUBCASE("entropy equals the Gram entropy, D^n <= 512, integer and sawtooth alpha") {
    std::mt19937_64 rng(53);
    for (double alpha : {1.0, 2.0, -1.0, 0.3, 0.75}) {
      for (int grid : {4, 6}) {
        const Partition p = random_points(3, grid, rng);
        const MapParams params(alpha, grid);
        for (int n = 1; n <= 5; ++n) {
          const double from_oracle = oracle::entropy_of(oracle::spectrum(oracle_density_matrix(p, params, n)));
          REQUIRE(std::abs(from_oracle - gram_entropy(gram_matrix(p, params, n))) < 1e-9);
        }
      }
    }
  }

  CHECK_THROWS_AS(oracle_density_matrix(Partition({{0, 0}, {1, 1}}, 3), MapParams(1, 3), 13), std::length_error);
}

TEST_CASE("entropy_series") {
  const Partition p({{3, 7}, {11, 2}, {5, 5}}, 13);

  const auto freq = entropy_series(p, MapParams(1, 13), 6, Engine::frequency);
  const auto gram = entropy_series(p, MapParams(1, 13), 6, Engine::gram);
  const auto autom = entropy_series(p, MapParams(1, 13), 6, Engine::automatic);
  REQUIRE(freq.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(freq[i].n == static_cast<int>(i) + 1);
    CHECK(freq[i].h == doctest::Approx(freq[i].H / freq[i].n));
    CHECK(std::abs(freq[i].H - gram[i].H) < 1e-8);
    CHECK(autom[i].H == freq[i].H);
  }
  CHECK(freq[0].H == doctest::Approx(std::log(3.0)));

  // auto picks the Gram engine off the integers
  const auto saw = entropy_series(p, MapParams(0.5, 13), 3, Engine::automatic);
  const auto saw_gram = entropy_series(p, MapParams(0.5, 13), 3, Engine::gram);
  CHECK(saw[2].H == saw_gram[2].H);

  try {
    entropy_series(p, MapParams(0.5, 13), 3, Engine::frequency);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("sawtooth") != std::string::npos);
  }
  CHECK_THROWS_AS(entropy_series(p, MapParams(1, 13), 0, Engine::gram), std::invalid_argument);
  CHECK(parse_engine("auto") == Engine::automatic);
  CHECK_THROWS_AS(parse_engine("fast"), std::invalid_argument);
}
