#pragma once

#include "twopiece/params.hpp"
#include "twopiece/quadrature.hpp"

namespace twopiece {

// Closed-form Kullback-Leibler divergences D(f_p || f_p') between two members
// of a family that differ only in the tail parameter. The value does not
// depend on (alpha, mu, sigma). Both throw DomainError for p or p' < 1 and
// return exactly 0 when p == p'.
//
//   SEPD: log K(p) - log K(p') - 1/p + p^{p'/p} / p' * Gamma((p'+1)/p) / Gamma(1/p)
//   SGLD: log[B(p', p') / B(p, p)] + 2 (p - p') [psi(p) - psi(2p)]
double kl_sepd(int p, int p_prime);
double kl_sgld(int p, int p_prime);

// Dispatch on family (SEPD or SGLD).
double kl_closed_form(Family family, int p, int p_prime);

// Real-valued tail parameters; same formulas. Used by the propriety report and
// by tests that probe continuity.
double kl_sepd_real(double p, double p_prime);
double kl_sgld_real(double p, double p_prime);

// Direct numerical evaluation of  integral f log(f / f')  by adaptive
// quadrature, split at the mode. The two parameter sets must share alpha, mu
// and sigma. Throws QuadratureError (with the achieved tolerance) if the
// integral does not converge.
double kl_numeric(Family family, const TwoPieceParams& params_p,
                  const TwoPieceParams& params_p_prime,
                  const QuadratureOptions& options = {});

}  // namespace twopiece
