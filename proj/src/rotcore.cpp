#include "rpolar/rotcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rpolar/error.hpp"

namespace rpolar {

namespace {

constexpr int kMaxJacobiSweeps = 30;
constexpr double kJacobiRelativeThreshold = 1e-14;

bool all_finite(const Mat3& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](double v) { return std::isfinite(v); });
}

// One Jacobi rotation zeroing A(p, q); accumulates into V.
void jacobi_rotate(Mat3& A, Mat3& V, std::size_t p, std::size_t q) {
  const double apq = A(p, q);
  if (apq == 0.0) return;
  const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // A <- J^T A J with J the Givens rotation in the (p, q) plane.
  for (std::size_t k = 0; k < 3; ++k) {
    const double akp = A(k, p), akq = A(k, q);
    A(k, p) = c * akp - s * akq;
    A(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const double apk = A(p, k), aqk = A(q, k);
    A(p, k) = c * apk - s * aqk;
    A(q, k) = s * apk + c * aqk;
  }
  A(p, q) = 0.0;
  A(q, p) = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double vkp = V(k, p), vkq = V(k, q);
    V(k, p) = c * vkp - s * vkq;
    V(k, q) = s * vkp + c * vkq;
  }
}

double off_diagonal_norm(const Mat3& A) {
  return std::sqrt(2.0 * (A(0, 1) * A(0, 1) + A(0, 2) * A(0, 2) + A(1, 2) * A(1, 2)));
}

void check_decomposable(const Mat3& F) {
  if (!all_finite(F)) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite coefficients");
  const double det = F.det();
  if (std::abs(det) <= kDetEpsilon) throw Error(ErrorCode::NonInvertible, "det(F) = " + std::to_string(det));
  if (det < 0.0) throw Error(ErrorCode::NegativeDeterminant, "det(F) = " + std::to_string(det));
}

}  // namespace

SymmetricEigen symmetric_eigen(const Mat3& symmetric) {
  Mat3 A = symmetric.sym();
  Mat3 V = Mat3::identity();
  const double threshold = kJacobiRelativeThreshold * A.frobenius();
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(A) <= threshold) break;
    jacobi_rotate(A, V, 0, 1);
    jacobi_rotate(A, V, 0, 2);
    jacobi_rotate(A, V, 1, 2);
  }

  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return A(i, i) > A(j, j); });

  SymmetricEigen out;
  for (std::size_t k = 0; k < 3; ++k) {
    out.values[k] = A(order[k], order[k]);
    out.vectors.set_col(k, V.col(order[k]));
  }
  if (out.vectors.det() < 0.0) out.vectors.set_col(2, -out.vectors.col(2));
  return out;
}

Decomposition svd_ordered(const Mat3& F) {
  check_decomposable(F);

  const SymmetricEigen eig = symmetric_eigen(transpose_times(F, F));
  const Mat3& V = eig.vectors;

  // Left singular vectors from F V; the third is completed by orientation so
  // that the left frame is proper whenever det(F) > 0.
  const Vec3 b1 = F * V.col(0);
  const Vec3 b2 = F * V.col(1);
  const Vec3 b3 = F * V.col(2);
  const double s1 = norm(b1);
  const Vec3 u1 = (1.0 / s1) * b1;
  const Vec3 b2perp = b2 - dot(u1, b2) * u1;
  const double s2 = norm(b2);
  const Vec3 u2 = (1.0 / norm(b2perp)) * b2perp;
  const Vec3 u3 = cross(u1, u2);
  const double s3 = dot(u3, b3);

  Decomposition dec;
  dec.F = F;
  dec.sigma = {s1, s2, s3};
  // Singular values from column norms can tie-break differently from the
  // eigenvalues by an ulp when degenerate; keep the ordering exact.
  if (dec.sigma[1] > dec.sigma[0]) dec.sigma[1] = dec.sigma[0];
  if (dec.sigma[2] > dec.sigma[1]) dec.sigma[2] = dec.sigma[1];
  dec.Q = V;
  const Mat3 Uleft = Mat3::from_columns(u1, u2, u3);
  dec.Rp = Uleft * V.transpose();
  dec.U = V * Mat3::diag(dec.sigma) * V.transpose();
  dec.gaps = {dec.sigma[0] - dec.sigma[1], dec.sigma[1] - dec.sigma[2]};
  const double gap_eps = kGapRelativeEpsilon * dec.sigma[0];
  dec.degenerate = {dec.gaps[0] < gap_eps, dec.gaps[1] < gap_eps};
  return dec;
}

Mat3 polar_factor(const Mat3& F) { return svd_ordered(F).Rp; }

UnitQuaternion::UnitQuaternion(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::ZeroQuaternion, "cannot normalize");
  q_ = canonical_sheet({q.w / n, q.x / n, q.y / n, q.z / n});
}

Quaternion canonical_sheet(const Quaternion& q) {
  bool flip = false;
  if (q.w != 0.0) {
    flip = q.w < 0.0;
  } else if (q.x != 0.0) {
    flip = q.x < 0.0;
  } else if (q.y != 0.0) {
    flip = q.y < 0.0;
  } else {
    flip = q.z < 0.0;
  }
  Quaternion r = flip ? -q : q;
  // Normalize signed zeros so that serialized output is stable.
  r.w += 0.0;
  r.x += 0.0;
  r.y += 0.0;
  r.z += 0.0;
  return r;
}

Mat3 quat_to_rotation(const Quaternion& q) {
  if (!(q.norm_squared() > 0.0)) throw Error(ErrorCode::ZeroQuaternion, "covering map needs q != 0");
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  return Mat3::from_rows({1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
                          2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
                          2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)});
}

void require_rotation(const Mat3& R, const char* what) {
  if (!all_finite(R) || !is_rotation(R)) throw Error(ErrorCode::NotARotation, std::string(what) + " is not in SO(3)");
}

UnitQuaternion rotation_to_quat(const Mat3& R) {
  require_rotation(R, "R");
  // Shepperd's method: pivot on the largest of the four diagonal combinations.
  const double tr = R.trace();
  Quaternion q;
  if (tr >= R(0, 0) && tr >= R(1, 1) && tr >= R(2, 2)) {
    const double r = std::sqrt(1.0 + tr);
    const double s = 0.5 / r;
    q = {0.5 * r, (R(2, 1) - R(1, 2)) * s, (R(0, 2) - R(2, 0)) * s, (R(1, 0) - R(0, 1)) * s};
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    const double r = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2));
    const double s = 0.5 / r;
    q = {(R(2, 1) - R(1, 2)) * s, 0.5 * r, (R(0, 1) + R(1, 0)) * s, (R(0, 2) + R(2, 0)) * s};
  } else if (R(1, 1) >= R(2, 2)) {
    const double r = std::sqrt(1.0 - R(0, 0) + R(1, 1) - R(2, 2));
    const double s = 0.5 / r;
    q = {(R(0, 2) - R(2, 0)) * s, (R(0, 1) + R(1, 0)) * s, 0.5 * r, (R(1, 2) + R(2, 1)) * s};
  } else {
    const double r = std::sqrt(1.0 - R(0, 0) - R(1, 1) + R(2, 2));
    const double s = 0.5 / r;
    q = {(R(1, 0) - R(0, 1)) * s, (R(0, 2) + R(2, 0)) * s, (R(1, 2) + R(2, 1)) * s, 0.5 * r};
  }
  return UnitQuaternion(q);
}

AxisAngle axis_angle(const Mat3& R) {
  const Quaternion q = rotation_to_quat(R).value();
  const double s = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  AxisAngle out;
  if (s == 0.0) return out;
  out.angle = 2.0 * std::atan2(s, q.w);
  out.axis = {q.x / s, q.y / s, q.z / s};
  // Axis is reported with its first nonzero component positive; the sign of
  // the rotation moves into the angle. At angle pi the canonical quaternion
  // already satisfies this.
  const double lead = out.axis[0] != 0.0 ? out.axis[0] : (out.axis[1] != 0.0 ? out.axis[1] : out.axis[2]);
  if (lead < 0.0) {
    out.axis = -out.axis;
    out.angle = -out.angle;
  }
  for (auto& c : out.axis.v) c += 0.0;
  return out;
}

Mat3 rotation_from_axis_angle(double angle, const Vec3& axis) {
  const double n = norm(axis);
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "rotation axis must be nonzero");
  const Vec3 k = (1.0 / n) * axis;
  const double half = 0.5 * angle;
  const double sh = std::sin(half);
  return quat_to_rotation({std::cos(half), sh * k[0], sh * k[1], sh * k[2]});
}

double geodesic_angle(const Mat3& R1, const Mat3& R2) {
  const Mat3 rel = transpose_times(R1, R2);
  const double c = 0.5 * (rel.trace() - 1.0);
  const Vec3 axial{rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1)};
  const double s = 0.5 * norm(axial);
  return std::atan2(s, c);
}

const std::array<Mat3, 4>& klein_four() {
  static const std::array<Mat3, 4> group{Mat3::identity(), Mat3::diag(1, -1, -1), Mat3::diag(-1, 1, -1),
                                         Mat3::diag(-1, -1, 1)};
  return group;
}

std::array<Mat3, 4> symmetry_orbit(const Mat3& Rhat) {
  require_rotation(Rhat, "Rhat");
  std::array<Mat3, 4> orbit;
  const auto& group = klein_four();
  for (std::size_t i = 0; i < 4; ++i) orbit[i] = transpose_times(group[i], Rhat) * group[i];
  return orbit;
}

Mat3 relative_rotation(const Mat3& R, const Decomposition& dec) {
  require_rotation(R, "R");
  return transpose_times(dec.Q, transpose_times(R, dec.Rp) * dec.Q);
}

Mat3 recover_absolute(const Mat3& Rhat, const Decomposition& dec) {
  require_rotation(Rhat, "Rhat");
  return dec.Rp * dec.Q * Rhat.transpose() * dec.Q.transpose();
}

}  // namespace rpolar
