#pragma once

#include <span>
#include <string>
#include <vector>

#include "cyclegame/eigencycle.hpp"

namespace cyclegame {

// Divides by the root of the sum of squares; rejects an all-zero set.
Set6 normalize_set(const Set6& values);

double pearson(std::span<const double> u, std::span<const double> v);

// I_x(a, b), regularized incomplete beta (continued fraction).
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

struct LabeledVector {
  std::string label;
  std::vector<double> values;
};

struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rho;  // symmetric, unit diagonal
  double flag_threshold = 0.9;

  bool flagged(std::size_t i, std::size_t j) const { return rho[i][j] < flag_threshold; }
};

CorrelationMatrix correlation_matrix(const std::vector<LabeledVector>& sources, double flag_threshold = 0.9);

struct OlsResult {
  double slope;
  double intercept;
  double p_value;  // two-sided, slope != 0
  double r;
  std::size_t n;
};

OlsResult ols_fit(std::span<const double> x, std::span<const double> y);

struct TTestResult {
  double t_stat;
  double p_value;
  std::size_t n;
  double mean;
};

// One-sample two-sided t-test against mean zero.
TTestResult ttest_zero(std::span<const double> samples);

}  // namespace cyclegame
