#pragma once

// Energy-minimizing rotations ("relaxed polar factors") of the Cosserat
// shear-stretch energy, their domain classification and the reduced energy
//   W_red(F) = min_R W(R; F).
//
// With sigma1 >= sigma2 >= sigma3 the singular values of F and
// rho = 2 mu / (mu - muc), F is classical iff sigma1 + sigma2 <= rho. On the
// classical side the polar factor is optimal. Beyond it the minimizers are
//   rpolar+- = Rp Q R_z(+-beta) Q^T,   beta = arccos(rho / (sigma1 + sigma2)),
// i.e. the polar factor followed by a rotation by +-beta about the eigenvector
// q3 of the smallest singular value, acting in the plane of maximal strain.

#include <string_view>

#include "rpolar/energy.hpp"
#include "rpolar/mat3.hpp"
#include "rpolar/rotcore.hpp"

namespace rpolar {

enum class DomainTag { Classical, NonClassical, Boundary };

std::string_view to_string(DomainTag tag);

// Relative band around sigma1 + sigma2 == rho reported as Boundary.
inline constexpr double kBoundaryRelativeBand = 1e-12;

struct RelaxedRotations {
  Mat3 r_plus;   // R_p^T r_plus rotates by +beta_hat about +axis
  Mat3 r_minus;
  double beta_hat = 0.0;
  Vec3 axis;     // q3 of the decomposition
  DomainTag domain_tag = DomainTag::Classical;
  double reduced_energy = 0.0;
  bool coincide = true;
  bool degenerate_axis = false;  // sigma2 ~ sigma3: q3 is not unique
  double el_residual_plus = 0.0;
  double el_residual_minus = 0.0;
  Decomposition decomposition;
};

// (sigma1 + sigma2) / 2 and its strain counterpart.
double mmp_stretch(const Mat3& F);
double mmp_strain(const Mat3& F);

DomainTag classify_domain(const Mat3& F, const MaterialParams& p);
DomainTag classify_sigma(const Vec3& sigma_descending, const MaterialParams& p);

double optimal_relative_angle(const Mat3& F, const MaterialParams& p);
double optimal_relative_angle_sigma(const Vec3& sigma_descending, const MaterialParams& p);

RelaxedRotations relaxed_polar(const Mat3& F, const MaterialParams& p);

double reduced_energy(const Mat3& F, const MaterialParams& p);
// Accepts sigma in any order; sorts before evaluating.
double reduced_energy_sigma(Vec3 sigma, const MaterialParams& p);

// For fixed R, min over skew A of |F - R (1 + A)|^2 is attained at
// A* = skew(R^T F) with value |sym(R^T F) - 1|^2.
struct TangentBundleDistance {
  Mat3 A_star;
  double dist2 = 0.0;
};
TangentBundleDistance tangent_bundle_distance(const Mat3& F, const Mat3& R);

// zeta^2 / 2: every F with |U - 1|^2 < zeta^2 / 2 is classical.
double classical_neighborhood_radius(const MaterialParams& p);

// Unimodular F never lies strictly inside the classical domain of the limit
// case (sigma1 + sigma2 >= 2 by AM-GM). Returns true iff F is not Classical.
bool sl3_nonclassical_check(const Mat3& F);

// diag(rho - 1 + eps, 1, 1 / (rho - 1 + eps)): unimodular, s12 = rho + eps.
Mat3 d_epsilon_witness(const MaterialParams& p, double eps);

}  // namespace rpolar
