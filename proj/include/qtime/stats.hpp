#pragma once

namespace qtime {

/// Inverse standard-normal CDF (Acklam's rational approximation, |eps| < 1e-9
/// over (0, 1)). Throws ContractError outside (0, 1).
double normal_quantile(double p);

/// Regularized incomplete beta function I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace qtime
