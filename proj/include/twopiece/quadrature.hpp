#pragma once

#include <functional>

#include "twopiece/errors.hpp"

namespace twopiece {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
  // Length scale of the map x = a + scale * t / (1 - t) used for infinite
  // limits; pick it near the integrand's natural width.
  double scale = 1.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double achieved, double requested)
      : NumericalError(what), achieved_(achieved), requested_(requested) {}
  double achieved_error() const noexcept { return achieved_; }
  double requested_error() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

// Globally adaptive 21-point Gauss-Kronrod quadrature. Either limit may be
// infinite; (-inf, inf) is split at `split`. Throws QuadratureError when the
// error estimate cannot be brought below max(abs_tol, rel_tol |I|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {}, double split = 0.0);

}  // namespace twopiece
