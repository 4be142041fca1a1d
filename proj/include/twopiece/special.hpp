#pragma once

namespace twopiece {

// Special-function substrate. Every function throws DomainError for
// non-positive (or NaN) arguments.
//
// Accuracy on [1e-3, 1e3]: log_gamma to 1e-12 relative (series expansions
// around the zeros at 1 and 2, Stirling elsewhere); digamma to 1e-12 absolute.

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

double log_gamma(double x);
double digamma(double x);
double log_beta(double a, double b);

// log B(b, b) - log B(a, a). Exact product recurrence when a and b are
// integers at most 64 apart, log_beta difference otherwise. The recurrence
// avoids cancelling two large log-gamma values for big a.
double log_beta_symmetric_diff(double a, double b);

// log(1 + e^x) without overflow.
double softplus(double x);

}  // namespace twopiece
