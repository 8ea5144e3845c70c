// Lyapunov exponents from entropy production: compactified time
// s_n = (2/pi) arctan(n - 1) and the Lagrange polynomial through the first m
// points (s_n, h_n), evaluated at t = 1 (n -> infinity).
#pragma once

#include "alf/entropy.hpp"

#include <vector>

namespace alf {

struct CompactifiedPoint {
  double t = 0;
  double h = 0;
};

using CompactifiedSeries = std::vector<CompactifiedPoint>;

struct LyapunovEstimate {
  int m = 0;
  double value = 0;
};

/// s_n = (2/pi) arctan(n - 1).
double compactified_time(int n);

CompactifiedSeries compactify(const EntropySeries& series);

/// Lagrange polynomial through the first m points, evaluated at t = 1.
LyapunovEstimate lagrange_extrapolate(const CompactifiedSeries& series, int m);

/// ln lambda_plus = ln(alpha + 2 + sqrt(alpha (alpha + 4))) - ln 2.
/// Throws for non-hyperbolic alpha.
double theoretical_lyapunov(double alpha);

/// tau_B = log_lambda N^2 = 2 ln N / ln lambda.
double breaking_time(double alpha, double grid);

/// n_bar = log_D N^2. This is a partition-dependent crossover, not a
/// breaking time: it moves with D.
double naive_transition(int partition_size, double grid);

}  // namespace alf
