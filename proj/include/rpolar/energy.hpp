#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "rpolar/mat3.hpp"
#include "rpolar/rotcore.hpp"

namespace rpolar {

enum class Regime {
  Classical,         // muc >= mu: the polar factor is the unique minimizer
  NonClassicalZero,  // muc == 0
  NonClassical,      // 0 < muc < mu
};

std::string_view to_string(Regime regime);

// Weights (mu, muc) of the Cosserat shear-stretch energy
//   W(R; F) = mu |sym(R^T F - 1)|^2 + muc |skew(R^T F - 1)|^2
// together with the quantities that reduce a non-classical weight pair to the
// limit case (1, 0). In the classical regime lambda_scale, rho and zeta are
// empty: there is no finite rescaling and every F is classical.
class MaterialParams {
 public:
  MaterialParams(double mu, double muc);

  double mu() const { return mu_; }
  double muc() const { return muc_; }
  Regime regime() const { return regime_; }
  bool classical() const { return regime_ == Regime::Classical; }

  // mu / (mu - muc)
  std::optional<double> lambda_scale() const;
  // Singular radius 2 mu / (mu - muc): threshold for sigma1 + sigma2.
  std::optional<double> rho() const;
  // 2 muc / (mu - muc) = rho - 2
  std::optional<double> zeta() const;

  static MaterialParams limit_case() { return {1.0, 0.0}; }

 private:
  double mu_;
  double muc_;
  Regime regime_;
};

double energy(const Mat3& R, const Mat3& F, const MaterialParams& p);

// Energy of a relative rotation Rhat against D = diag(sigma).
double relative_energy(const Mat3& Rhat, const Vec3& sigma, const MaterialParams& p);

// Energy composed with the covering map, evaluated on all of R^4 \ {0}. Off
// the unit sphere this is only a formal extension.
double lifted_energy(const Quaternion& q, const Vec3& sigma, const MaterialParams& p);

Mat3 rescale_F(const Mat3& F, const MaterialParams& p);
Mat3 isochoric_project(const Mat3& F);

// |skew((mu - muc) Ubar^2 - 2 mu Ubar)|_F with Ubar = R^T F; vanishes exactly
// at the critical rotations of W(.; F).
double el_residual_matrix(const Mat3& R, const Mat3& F, const MaterialParams& p);

// Left-hand sides of the quaternion Euler-Lagrange system of the Lagrange
// function |sym(pi(q) D - 1)|^2 - lambda (|q|^2 - 1). The first four entries
// are one quarter of the partial derivatives in w, x, y, z; the fifth is the
// constraint.
std::array<double, 5> el_residual_quat(const Quaternion& q, double lambda, const Vec3& sigma);

void require_positive_sigma(const Vec3& sigma);

}  // namespace rpolar
