#pragma once

#include <string>
#include <string_view>

namespace twopiece {

// SEPD and SGLD are two-piece families; BetaLogistic is the symmetric
// type-III generalized logistic base density underlying the SGLD.
enum class Family { sepd, sgld, beta_logistic };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

// (alpha, p, mu, sigma) shared by the SEPD and SGLD. The tail parameter is a
// positive integer; construction rejects anything out of support.
class TwoPieceParams {
 public:
  TwoPieceParams(double alpha, int p, double mu = 0.0, double sigma = 1.0);

  double alpha() const noexcept { return alpha_; }
  int p() const noexcept { return p_; }
  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }

  TwoPieceParams with_p(int p) const { return {alpha_, p, mu_, sigma_}; }

  friend bool operator==(const TwoPieceParams&, const TwoPieceParams&) = default;

 private:
  double alpha_;
  int p_;
  double mu_;
  double sigma_;
};

}  // namespace twopiece
