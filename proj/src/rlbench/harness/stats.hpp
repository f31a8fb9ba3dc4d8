#pragma once

#include <vector>

namespace rlbench {

// regularized incomplete beta function I_x(a, b), continued-fraction form
double incomplete_beta(double a, double b, double x);

// two-sided tail probability of Student's t with dof degrees of freedom
double student_t_two_sided_p(double t, double dof);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

// Unequal-variance t-test with Welch-Satterthwaite degrees of freedom and a
// two-sided p-value. Degenerate convention when both sample variances are
// zero: p = 1 for equal means, p = 0 otherwise.
WelchResult welch_t_test(const std::vector<double>& a,
                         const std::vector<double>& b);

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);      // (n-1) divisor
double population_std(const std::vector<double>& xs);       // n divisor

}  // namespace rlbench
