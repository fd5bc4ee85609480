#include "rpolar/relax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "rpolar/error.hpp"

namespace rpolar {

namespace {

double sq(double v) { return v * v; }

// Residual bound checked before relaxed_polar returns. The residual is
// quadratic in F.
double stationarity_bound(const Mat3& F) { return 1e-10 * std::max(1.0, F.frobenius_squared()); }

}  // namespace

std::string_view to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::Classical: return "Classical";
    case DomainTag::NonClassical: return "NonClassical";
    case DomainTag::Boundary: return "Boundary";
  }
  return "?";
}

double mmp_stretch(const Mat3& F) {
  const Decomposition dec = svd_ordered(F);
  return 0.5 * (dec.sigma[0] + dec.sigma[1]);
}

double mmp_strain(const Mat3& F) { return mmp_stretch(F) - 1.0; }

DomainTag classify_sigma(const Vec3& sigma, const MaterialParams& p) {
  const auto rho = p.rho();
  if (!rho) return DomainTag::Classical;
  const double s12 = sigma[0] + sigma[1];
  if (std::abs(s12 - *rho) <= kBoundaryRelativeBand * std::max(s12, *rho)) return DomainTag::Boundary;
  return s12 < *rho ? DomainTag::Classical : DomainTag::NonClassical;
}

DomainTag classify_domain(const Mat3& F, const MaterialParams& p) { return classify_sigma(svd_ordered(F).sigma, p); }

double optimal_relative_angle_sigma(const Vec3& sigma, const MaterialParams& p) {
  if (classify_sigma(sigma, p) != DomainTag::NonClassical) return 0.0;
  // arccos(rho / s12), written to stay accurate just past the branch point.
  const double rho = *p.rho();
  const double s12 = sigma[0] + sigma[1];
  return std::atan2(std::sqrt((s12 - rho) * (s12 + rho)), rho);
}

double optimal_relative_angle(const Mat3& F, const MaterialParams& p) {
  return optimal_relative_angle_sigma(svd_ordered(F).sigma, p);
}

double reduced_energy_sigma(Vec3 sigma, const MaterialParams& p) {
  require_positive_sigma(sigma);
  std::sort(sigma.v.begin(), sigma.v.end(), std::greater<>());
  const double mu = p.mu(), muc = p.muc();
  if (classify_sigma(sigma, p) != DomainTag::NonClassical)
    return mu * (sq(sigma[0] - 1) + sq(sigma[1] - 1) + sq(sigma[2] - 1));
  // Minimum over the in-plane angle of the energy of R_z(beta) D; continuous
  // with the classical branch at s12 == rho.
  const double rho = *p.rho();
  const double s12 = sigma[0] + sigma[1];
  const double d12 = sigma[0] - sigma[1];
  return 0.5 * mu * sq(d12) + mu * sq(sigma[2] - 1) + 0.5 * muc * sq(s12) - muc * rho;
}

double reduced_energy(const Mat3& F, const MaterialParams& p) { return reduced_energy_sigma(svd_ordered(F).sigma, p); }

RelaxedRotations relaxed_polar(const Mat3& F, const MaterialParams& p) {
  RelaxedRotations out;
  out.decomposition = svd_ordered(F);
  const Decomposition& dec = out.decomposition;
  out.axis = dec.q3();
  out.degenerate_axis = dec.degenerate[1];
  out.domain_tag = classify_sigma(dec.sigma, p);
  out.reduced_energy = reduced_energy_sigma(dec.sigma, p);

  if (out.domain_tag == DomainTag::NonClassical) {
    out.beta_hat = optimal_relative_angle_sigma(dec.sigma, p);
    const Mat3 RpQ = dec.Rp * dec.Q;
    out.r_plus = RpQ * rotation_z(out.beta_hat) * dec.Q.transpose();
    out.r_minus = RpQ * rotation_z(-out.beta_hat) * dec.Q.transpose();
    out.coincide = false;
  } else {
    out.r_plus = dec.Rp;
    out.r_minus = dec.Rp;
    out.beta_hat = 0.0;
    out.coincide = true;
  }

  out.el_residual_plus = el_residual_matrix(out.r_plus, F, p);
  out.el_residual_minus = el_residual_matrix(out.r_minus, F, p);
  const double bound = stationarity_bound(F);
  if (out.el_residual_plus > bound || out.el_residual_minus > bound)
    throw std::logic_error("relaxed polar factor fails the Euler-Lagrange equations: residual " +
                           std::to_string(std::max(out.el_residual_plus, out.el_residual_minus)));
  return out;
}

TangentBundleDistance tangent_bundle_distance(const Mat3& F, const Mat3& R) {
  require_rotation(R, "R");
  TangentBundleDistance out;
  out.A_star = transpose_times(R, F).skew();
  out.dist2 = (F - R * (Mat3::identity() + out.A_star)).frobenius_squared();
  return out;
}

double classical_neighborhood_radius(const MaterialParams& p) {
  if (p.regime() == Regime::Classical) throw Error(ErrorCode::ClassicalRegime, "neighborhood needs muc < mu");
  if (p.regime() == Regime::NonClassicalZero)
    throw Error(ErrorCode::InvalidArgument, "neighborhood radius collapses to zero for muc == 0");
  const double zeta = *p.zeta();
  return 0.5 * zeta * zeta;
}

bool sl3_nonclassical_check(const Mat3& F) {
  const double det = F.det();
  if (!(std::abs(det - 1.0) < 1e-9)) throw Error(ErrorCode::NotUnimodular, "det(F) = " + std::to_string(det));
  return classify_domain(F, MaterialParams::limit_case()) != DomainTag::Classical;
}

Mat3 d_epsilon_witness(const MaterialParams& p, double eps) {
  const auto rho = p.rho();
  if (!rho) throw Error(ErrorCode::ClassicalRegime, "no non-classical domain for muc >= mu");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const double a = *rho - 1.0 + eps;
  return Mat3::diag(a, 1.0, 1.0 / a);
}

}  // namespace rpolar
