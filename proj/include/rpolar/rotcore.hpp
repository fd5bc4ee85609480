#pragma once

// Fixed-size rotation machinery: ordered SVD and polar decomposition of 3x3
// matrices, quaternions and the covering map onto SO(3), axis-angle
// conversion, and the Klein four-group acting on principal frames.

#include <array>

#include "rpolar/mat3.hpp"

namespace rpolar {

// Quaternion q = w + ix + jy + kz. Not necessarily of unit length: the
// covering map below is evaluated on the whole punctured space.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double norm_squared() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_squared()); }
  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr std::array<double, 4> coeffs() const { return {w, x, y, z}; }
  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

// Unit quaternion on the canonical sheet: w > 0, or w == 0 and the first
// nonzero of (x, y, z) positive.
class UnitQuaternion {
 public:
  // Normalizes and moves to the canonical sheet. Throws ZeroQuaternion.
  explicit UnitQuaternion(const Quaternion& q);

  const Quaternion& value() const { return q_; }
  double w() const { return q_.w; }
  double x() const { return q_.x; }
  double y() const { return q_.y; }
  double z() const { return q_.z; }

 private:
  Quaternion q_;
};

// Moves q or -q onto the canonical sheet without normalizing.
Quaternion canonical_sheet(const Quaternion& q);

struct AxisAngle {
  double angle = 0.0;  // in (-pi, pi]
  Vec3 axis{0.0, 0.0, 1.0};
};

inline constexpr double kGapRelativeEpsilon = 1e-8;

// F = Rp * Q * diag(sigma) * Q^T with sigma descending, Q and Rp proper
// rotations and U = Q diag(sigma) Q^T the right stretch.
struct Decomposition {
  Mat3 F;
  Vec3 sigma;
  Mat3 Q;
  Mat3 Rp;
  Mat3 U;
  std::array<double, 2> gaps{};            // sigma1 - sigma2, sigma2 - sigma3
  std::array<bool, 2> degenerate{};        // gap below kGapRelativeEpsilon * sigma1

  double s(int i, int j) const { return sigma[i - 1] + sigma[j - 1]; }
  double d(int i, int j) const { return sigma[i - 1] - sigma[j - 1]; }
  // Eigenvector of U for the smallest singular value.
  Vec3 q3() const { return Q.col(2); }
  Mat3 D() const { return Mat3::diag(sigma); }
};

// Symmetric 3x3 eigen-decomposition by cyclic Jacobi rotations. Eigenvalues
// are returned in descending order, eigenvectors as the matching columns of a
// proper rotation.
struct SymmetricEigen {
  Vec3 values;
  Mat3 vectors;
};
SymmetricEigen symmetric_eigen(const Mat3& symmetric);

Decomposition svd_ordered(const Mat3& F);
Mat3 polar_factor(const Mat3& F);

// Covering map evaluated with the quadratic polynomial entries verbatim, so
// the result is a rotation only for |q| = 1.
Mat3 quat_to_rotation(const Quaternion& q);
UnitQuaternion rotation_to_quat(const Mat3& R);

AxisAngle axis_angle(const Mat3& R);
Mat3 rotation_from_axis_angle(double angle, const Vec3& axis);

// Geodesic distance on SO(3): the angle of R1^T R2 in [0, pi].
double geodesic_angle(const Mat3& R1, const Mat3& R2);

// Diagonal sign matrices 1, diag(1,-1,-1), diag(-1,1,-1), diag(-1,-1,1).
const std::array<Mat3, 4>& klein_four();
std::array<Mat3, 4> symmetry_orbit(const Mat3& Rhat);

// Rhat = Q^T R^T Rp Q and its inverse R = Rp Q Rhat^T Q^T.
Mat3 relative_rotation(const Mat3& R, const Decomposition& dec);
Mat3 recover_absolute(const Mat3& Rhat, const Decomposition& dec);

void require_rotation(const Mat3& R, const char* what);

}  // namespace rpolar
