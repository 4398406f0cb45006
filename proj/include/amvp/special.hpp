#pragma once

namespace amvp::special {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, double d1, double d2);

/// CDF of Student's t with nu degrees of freedom.
double student_t_cdf(double x, double nu);

}  // namespace amvp::special
