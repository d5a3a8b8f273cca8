#pragma once

#include <span>

namespace vpmine {

enum class Alternative { less, greater };

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

/// One-sided p-value of the paired t-test on the differences a[i] - b[i].
/// With zero-variance differences the test statistic is undefined; the
/// convention is p = 0.5 for both sides when the mean difference is zero,
/// otherwise 0 on the side the mean supports and 1 on the other.
double paired_t_one_sided(std::span<const double> a, std::span<const double> b, Alternative alt);

} // namespace vpmine
