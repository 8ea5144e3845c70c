#include "alf/entropy.hpp"

#include <limits>
#include <set>

namespace alf {

Partition::Partition(std::vector<LatticePoint> points, int grid) : points_(std::move(points)), grid_(grid) {
  if (grid_ < 2) throw std::invalid_argument("grid N must be >= 2");
  if (points_.empty()) throw std::invalid_argument("partition needs at least one point");
  std::set<LatticePoint> seen;
  for (const auto& p : points_) {
    if (p.l1 < 0 || p.l1 >= grid_ || p.l2 < 0 || p.l2 >= grid_)
      throw std::invalid_argument("partition point outside [0,N)^2");
    if (!seen.insert(p).second) throw std::invalid_argument("partition points must be distinct");
  }
}

Engine parse_engine(const std::string& name) {
  if (name == "frequency") return Engine::frequency;
  if (name == "gram") return Engine::gram;
  if (name == "auto" || name == "automatic") return Engine::automatic;
  throw std::invalid_argument("unknown engine '" + name + "' (expected frequency, gram or auto)");
}

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::frequency:
      return "frequency";
    case Engine::gram:
      return "gram";
    case Engine::automatic:
      return "auto";
  }
  return "unknown";
}

namespace {

void require_integer_alpha(const MapParams& params) {
  if (!params.integer_alpha())
    throw std::invalid_argument(
        "the frequency engine requires integer alpha: for sawtooth maps the discretized dynamics does not "
        "commute with sampling, so the frequency histogram is not the Gram spectrum; use the gram engine");
}

IntMatrix2 transpose_mod(const MapParams& params) {
  return reduced(transpose_matrix<std::int64_t>(params.int_alpha()), params.grid);
}

}  // namespace

std::vector<std::vector<LatticePoint>> transported_partition(const Partition& part, const MapParams& params,
                                                             int steps) {
  require_integer_alpha(params);
  const std::int64_t n = params.grid;
  const IntMatrix2 t = transpose_mod(params);
  std::vector<std::vector<LatticePoint>> out;
  out.reserve(static_cast<std::size_t>(steps));
  std::vector<LatticePoint> row = part.points();
  for (int p = 0; p < steps; ++p) {
    out.push_back(row);
    for (auto& r : row) r = mat_vec_mod(t, r, n);
  }
  return out;
}

LatticePoint string_image(const Partition& part, const MapParams& params, const SymbolString& symbols) {
  if (symbols.empty()) throw std::invalid_argument("symbol string must be nonempty");
  if (part.grid() != params.grid) throw std::invalid_argument("partition and map use different grids");
  const auto shifts = transported_partition(part, params, static_cast<int>(symbols.size()));
  const std::int64_t n = params.grid;
  LatticePoint sum{0, 0};
  for (std::size_t p = 0; p < symbols.size(); ++p) {
    if (symbols[p] >= part.size()) throw std::out_of_range("symbol outside [0, D)");
    const auto& v = shifts[p][symbols[p]];
    sum = {mod(sum.l1 + v.l1, n), mod(sum.l2 + v.l2, n)};
  }
  return sum;
}

FrequencyRecursion::FrequencyRecursion(const Partition& part, const MapParams& params)
    : part_(part), grid_(params.grid) {
  require_integer_alpha(params);
  if (part.grid() != params.grid) throw std::invalid_argument("partition and map use different grids");
  transpose_ = transpose_mod(params);
  shifts_ = part.points();
  const auto cells = static_cast<std::size_t>(grid_ * grid_);
  field_.grid = params.grid;
  field_.n = 0;
  // h_0: point mass at the origin
  field_.counts.assign(cells, 0);
  field_.counts[0] = 1;
  field_.denominator = 1;
  normalize();
}

const FrequencyField& FrequencyRecursion::step() {
  const std::int64_t n = grid_;
  const auto cells = static_cast<std::size_t>(n * n);
  const std::uint64_t d = part_.size();

  std::uint64_t next_denominator = 0;
  const bool stays_exact =
      field_.exact() && !__builtin_mul_overflow(field_.denominator, d, &next_denominator);
  if (field_.exact() && !stays_exact) {
    // counts would overflow: continue with floating ratios
    prob_ = field_.nu;
    field_.counts.clear();
    field_.denominator = 0;
  }

  // next(r) = sum_j prev(r - shift_j); scatter form: next(s + shift_j) += prev(s)
  if (stays_exact) {
    std::vector<std::uint64_t> next(cells, 0);
    for (const auto& v : shifts_)
      for (std::int64_t s1 = 0; s1 < n; ++s1) {
        const std::int64_t t1 = mod(s1 + v.l1, n);
        for (std::int64_t s2 = 0; s2 < n; ++s2) {
          const std::uint64_t c = field_.counts[static_cast<std::size_t>(s1 * n + s2)];
          if (c != 0) next[static_cast<std::size_t>(t1 * n + mod(s2 + v.l2, n))] += c;
        }
      }
    field_.counts = std::move(next);
    field_.denominator = next_denominator;
  } else {
    std::vector<double> next(cells, 0.0);
    const double weight = 1.0 / static_cast<double>(d);
    for (const auto& v : shifts_)
      for (std::int64_t s1 = 0; s1 < n; ++s1) {
        const std::int64_t t1 = mod(s1 + v.l1, n);
        for (std::int64_t s2 = 0; s2 < n; ++s2) {
          const double p = prob_[static_cast<std::size_t>(s1 * n + s2)];
          if (p != 0.0) next[static_cast<std::size_t>(t1 * n + mod(s2 + v.l2, n))] += weight * p;
        }
      }
    prob_ = std::move(next);
  }
  ++field_.n;
  for (auto& v : shifts_) v = mat_vec_mod(transpose_, v, n);
  normalize();
  return field_;
}

void FrequencyRecursion::normalize() {
  if (field_.exact()) {
    const double denom = static_cast<double>(field_.denominator);
    field_.nu.resize(field_.counts.size());
    for (std::size_t i = 0; i < field_.counts.size(); ++i) field_.nu[i] = static_cast<double>(field_.counts[i]) / denom;
  } else {
    field_.nu = prob_;
  }
}

FrequencyField frequencies(const Partition& part, const MapParams& params, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  FrequencyRecursion rec(part, params);
  for (int k = 0; k < n; ++k) rec.step();
  return rec.field();
}

double shannon_entropy(const FrequencyField& nu) {
  double h = 0;
  for (const double v : nu.nu)
    if (v > 0) h -= v * std::log(v);
  return std::max(h, 0.0);
}

std::vector<LatticePoint> support_set(const FrequencyField& nu) {
  std::vector<LatticePoint> out;
  for (std::size_t i = 0; i < nu.nu.size(); ++i)
    if (nu.nu[i] > 0) out.push_back(lattice_point(i, nu.grid));
  return out;
}

EntropySeries entropy_series(const Partition& part, const MapParams& params, int n_max, Engine engine) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (engine == Engine::automatic) engine = params.integer_alpha() ? Engine::frequency : Engine::gram;
  EntropySeries out;
  out.reserve(static_cast<std::size_t>(n_max));
  if (engine == Engine::frequency) {
    FrequencyRecursion rec(part, params);
    for (int n = 1; n <= n_max; ++n) {
      const double h = shannon_entropy(rec.step());
      out.push_back({n, h, h / n});
    }
  } else {
    GramRecursion<double> rec(part, params);
    for (int n = 1; n <= n_max; ++n) {
      const double h = gram_entropy(rec.step());
      out.push_back({n, h, h / n});
    }
  }
  return out;
}

Eigen::MatrixXcd oracle_density_matrix(const Partition& part, const MapParams& params, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (part.grid() != params.grid) throw std::invalid_argument("partition and map use different grids");
  const std::size_t d = part.size();
  std::size_t strings = 1;
  for (int p = 0; p < n; ++p) {
    strings *= d;
    if (strings > kOracleMaxDimension)
      throw std::length_error("oracle density matrix limited to D^n <= " + std::to_string(kOracleMaxDimension));
  }
  const std::int64_t grid = params.grid;
  const auto cells = static_cast<std::size_t>(grid * grid);
  const double two_pi_over_n = 2.0 * std::numbers::pi / static_cast<double>(grid);

  // amplitudes(i, l) = exp(2 pi i / N sum_p r_{i_p} . U^p(l)); symbol i_p is digit p of i in base D
  Eigen::MatrixXcd amplitudes(static_cast<Eigen::Index>(strings), static_cast<Eigen::Index>(cells));
  std::vector<std::size_t> digits(static_cast<std::size_t>(n));
  for (std::size_t l = 0; l < cells; ++l) {
    const auto orbit = trajectory_U(params, lattice_point(l, grid), n);
    for (std::size_t i = 0; i < strings; ++i) {
      std::size_t rest = i;
      double exponent = 0;
      for (int p = 0; p < n; ++p) {
        const auto& r = part[rest % d];
        rest /= d;
        exponent += static_cast<double>(r.l1) * orbit[static_cast<std::size_t>(p)](0) +
                    static_cast<double>(r.l2) * orbit[static_cast<std::size_t>(p)](1);
      }
      amplitudes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          std::polar(1.0, two_pi_over_n * wrap(exponent, static_cast<double>(grid)));
    }
  }
  const double scale = 1.0 / (static_cast<double>(cells) * static_cast<double>(strings));
  return (amplitudes * amplitudes.adjoint()) * scale;
}

}  // namespace alf
