#pragma once

#include <cstddef>
#include <span>

namespace evofss {

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;  // two-tailed
  std::size_t df = 0;
  bool significant = false;  // p < 0.05
};

// Regularized incomplete beta I_x(a,b) via Lentz continued fraction;
// relative error below 1e-8 over the arguments used here.
double regularized_incomplete_beta(double a, double b, double x);

// Two-tailed p for a Student-t statistic with df degrees of freedom.
double student_t_two_tailed_p(double t, std::size_t df);

// Paired two-tailed t-test on equal-length samples, sd with the n-1
// denominator. Throws on n < 2 or an all-identical difference vector.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace evofss
