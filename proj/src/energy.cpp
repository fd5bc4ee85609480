#include "rpolar/energy.hpp"

#include <cmath>
#include <string>

#include "rpolar/error.hpp"

namespace rpolar {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Classical: return "Classical";
    case Regime::NonClassicalZero: return "NonClassicalZero";
    case Regime::NonClassical: return "NonClassical";
  }
  return "Unknown";
}

MaterialParams::MaterialParams(double mu, double muc) : mu_(mu), muc_(muc) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (!(muc >= 0.0) || !std::isfinite(muc)) throw Error(ErrorCode::InvalidArgument, "muc must be non-negative");
  if (muc >= mu) {
    regime_ = Regime::Classical;
  } else if (muc == 0.0) {
    regime_ = Regime::NonClassicalZero;
  } else {
    regime_ = Regime::NonClassical;
  }
}

std::optional<double> MaterialParams::lambda_scale() const {
  if (classical()) return std::nullopt;
  return mu_ / (mu_ - muc_);
}

std::optional<double> MaterialParams::rho() const {
  if (classical()) return std::nullopt;
  return 2.0 * mu_ / (mu_ - muc_);
}

std::optional<double> MaterialParams::zeta() const {
  if (classical()) return std::nullopt;
  return 2.0 * muc_ / (mu_ - muc_);
}

namespace {

double weighted_norms(const Mat3& Ubar, const MaterialParams& p) {
  const Mat3 strain = Ubar.sym() - Mat3::identity();
  double e = p.mu() * strain.frobenius_squared();
  if (p.muc() != 0.0) e += p.muc() * Ubar.skew().frobenius_squared();
  return e;
}

}  // namespace

void require_positive_sigma(const Vec3& sigma) {
  for (double s : sigma.v)
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::NonPositiveSigma, "singular values must be positive");
}

double energy(const Mat3& R, const Mat3& F, const MaterialParams& p) {
  require_rotation(R, "R");
  return weighted_norms(transpose_times(R, F), p);
}

double relative_energy(const Mat3& Rhat, const Vec3& sigma, const MaterialParams& p) {
  require_rotation(Rhat, "Rhat");
  require_positive_sigma(sigma);
  return weighted_norms(Rhat * Mat3::diag(sigma), p);
}

double lifted_energy(const Quaternion& q, const Vec3& sigma, const MaterialParams& p) {
  return weighted_norms(quat_to_rotation(q) * Mat3::diag(sigma), p);
}

Mat3 rescale_F(const Mat3& F, const MaterialParams& p) {
  const auto scale = p.lambda_scale();
  if (!scale) throw Error(ErrorCode::ClassicalRegime, "no finite rescaling for muc >= mu");
  return (1.0 / *scale) * F;
}

Mat3 isochoric_project(const Mat3& F) {
  const double det = F.det();
  if (!(det > kDetEpsilon)) throw Error(ErrorCode::NonInvertible, "isochoric projection needs det(F) > 0");
  return (1.0 / std::cbrt(det)) * F;
}

double el_residual_matrix(const Mat3& R, const Mat3& F, const MaterialParams& p) {
  require_rotation(R, "R");
  const Mat3 Ubar = transpose_times(R, F);
  const Mat3 M = (p.mu() - p.muc()) * (Ubar * Ubar) - (2.0 * p.mu()) * Ubar;
  return M.skew().frobenius();
}

std::array<double, 5> el_residual_quat(const Quaternion& q, double lambda, const Vec3& sigma) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  const double w2 = w * w, x2 = x * x, y2 = y * y, z2 = z * z;
  const double s1 = sigma[0], s2 = sigma[1], s3 = sigma[2];
  const double d23 = s2 - s3, d31 = s3 - s1, d12 = s1 - s2;
  const double s23 = s2 + s3, s31 = s3 + s1, s12 = s1 + s2;
  const double half = 0.5 * lambda;

  std::array<double, 5> r{};
  r[0] = w * (d23 * d23 * x2 + d31 * d31 * y2 + d12 * d12 * z2 - half);
  r[1] = x * (d23 * d23 * w2 + 4.0 * (s2 * s2 + s3 * s3) * x2 + (4.0 * s3 * s3 + s12 * s12) * y2 +
              (4.0 * s2 * s2 + s31 * s31) * z2 - (d23 * d23 + (s23 - 2.0) * s23) - half);
  r[2] = y * (d31 * d31 * w2 + 4.0 * (s3 * s3 + s1 * s1) * y2 + (4.0 * s1 * s1 + s23 * s23) * z2 +
              (4.0 * s3 * s3 + s12 * s12) * x2 - (d31 * d31 + (s31 - 2.0) * s31) - half);
  r[3] = z * (d12 * d12 * w2 + 4.0 * (s1 * s1 + s2 * s2) * z2 + (4.0 * s2 * s2 + s31 * s31) * x2 +
              (4.0 * s1 * s1 + s23 * s23) * y2 - (d12 * d12 + (s12 - 2.0) * s12) - half);
  r[4] = w2 + x2 + y2 + z2 - 1.0;
  return r;
}

}  // namespace rpolar
