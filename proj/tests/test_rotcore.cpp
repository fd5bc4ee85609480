#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rpolar/error.hpp"
#include "rpolar/rotcore.hpp"
#include "rpolar/sampling.hpp"

using namespace rpolar;

namespace {

void check_reconstruction(const Mat3& F, const Decomposition& d, double tol) {
  const Mat3 back = d.Rp * d.Q * d.D() * d.Q.transpose();
  CHECK(oracle::max_abs_diff(back, F) < tol);
  CHECK(is_rotation(d.Q));
  CHECK(is_rotation(d.Rp));
  CHECK(d.sigma[0] >= d.sigma[1]);
  CHECK(d.sigma[1] >= d.sigma[2]);
}

}  // namespace

TEST_CASE("svd of the identity") {
  const Decomposition d = svd_ordered(Mat3::identity());
  CHECK(d.sigma[0] == doctest::Approx(1.0));
  CHECK(d.sigma[2] == doctest::Approx(1.0));
  CHECK(oracle::max_abs_diff(d.Q, Mat3::identity()) < 1e-14);
  CHECK(oracle::max_abs_diff(d.Rp, Mat3::identity()) < 1e-14);
}

TEST_CASE("svd reorders diagonal entries with a proper permutation") {
  const Mat3 F = Mat3::diag(2, 0.5, 1);
  const Decomposition d = svd_ordered(F);
  CHECK(d.sigma[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.sigma[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.sigma[2] == doctest::Approx(0.5).epsilon(1e-14));
  check_reconstruction(F, d, 1e-13);
  // Columns of Q are signed unit axes 1, 3, 2.
  CHECK(std::abs(d.Q(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.Q(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(d.Q(1, 2)) == doctest::Approx(1.0));
}

TEST_CASE("svd of the worked diagonal example") {
  const Decomposition d = svd_ordered(Mat3::diag(4, 2, 0.5));
  CHECK(oracle::max_abs_diff(d.Q, Mat3::identity()) < 1e-14);
  CHECK(oracle::max_abs_diff(d.Rp, Mat3::identity()) < 1e-14);
  CHECK(d.s(1, 2) == doctest::Approx(6.0));
  CHECK(d.d(1, 2) == doctest::Approx(2.0));
}

TEST_CASE("svd reconstructs random matrices") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 2000; ++i) {
    const Mat3 F = oracle::random_F(gen);
    const Decomposition d = svd_ordered(F);
    check_reconstruction(F, d, 1e-12 * F.frobenius());
    CHECK(oracle::max_abs_diff(d.U, d.U.transpose()) < 1e-13);
  }
}

TEST_CASE("svd handles repeated singular values") {
  std::mt19937_64 gen(8);
  const Mat3 R = oracle::random_rotation(gen);
  const Mat3 V = oracle::random_rotation(gen);
  const Mat3 F = R * Mat3::diag(2, 2, 0.5) * V.transpose();
  const Decomposition d = svd_ordered(F);
  check_reconstruction(F, d, 1e-12);
  CHECK(d.degenerate[0]);
  CHECK_FALSE(d.degenerate[1]);
}

TEST_CASE("svd input errors") {
  auto code_of = [](const Mat3& F) {
    try {
      svd_ordered(F);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of(Mat3::diag(1, 1, 0)) == ErrorCode::NonInvertible);
  CHECK(code_of(Mat3::diag(1, 1, -1)) == ErrorCode::NegativeDeterminant);
  CHECK_THROWS_AS(svd_ordered(Mat3::diag(NAN, 1, 1)), Error);
}

TEST_CASE("polar factor") {
  CHECK(oracle::max_abs_diff(polar_factor(Mat3::diag(2, 1, 0.5)), Mat3::identity()) < 1e-14);
  const Mat3 Rz = oracle::expmap({0, 0, 0.3});
  CHECK(oracle::max_abs_diff(polar_factor(Rz * Mat3::diag(2, 1, 0.5)), Rz) < 1e-14);

  // polar(1 + A) = exp(A) + O(|A|^3) for skew A.
  const Vec3 w{0.6e-4, -0.48e-4, 0.64e-4};  // |A|_F = sqrt(2) * 1e-4
  const Mat3 A = oracle::skew_of(w);
  const Mat3 P = polar_factor(Mat3::identity() + A);
  CHECK(oracle::max_abs_diff(P, oracle::expmap(w)) < 1e-11);
}

TEST_CASE("covering map examples") {
  CHECK(oracle::max_abs_diff(quat_to_rotation({1, 0, 0, 0}), Mat3::identity()) == 0.0);
  CHECK(oracle::max_abs_diff(quat_to_rotation({0, 0, 0, 1}), Mat3::diag(-1, -1, 1)) == 0.0);
  const double h = std::sqrt(2.0) / 2;
  const Mat3 R = quat_to_rotation({h, 0, 0, h});
  CHECK(oracle::max_abs_diff(R, oracle::expmap({0, 0, oracle::kPi / 2})) < 1e-15);
  // Antipodal quaternions give the same rotation.
  const Quaternion q{0.3, -0.5, 0.1, 0.8};
  CHECK(oracle::max_abs_diff(quat_to_rotation(q), quat_to_rotation(-q)) == 0.0);
}

TEST_CASE("covering map agrees with Rodrigues") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    Vec3 axis{n(gen), n(gen), n(gen)};
    axis = (1.0 / norm(axis)) * axis;
    const double angle = std::uniform_real_distribution<double>(-3.1, 3.1)(gen);
    const Quaternion q{std::cos(angle / 2), std::sin(angle / 2) * axis[0], std::sin(angle / 2) * axis[1],
                       std::sin(angle / 2) * axis[2]};
    CHECK(oracle::max_abs_diff(quat_to_rotation(q), oracle::expmap(angle * axis)) < 1e-14);
  }
}

TEST_CASE("rotation to quaternion") {
  CHECK(rotation_to_quat(Mat3::identity()).value() == Quaternion{1, 0, 0, 0});
  const UnitQuaternion q = rotation_to_quat(Mat3::diag(-1, -1, 1));
  CHECK(q.w() == doctest::Approx(0.0));
  CHECK(q.z() == doctest::Approx(1.0));
  CHECK_THROWS_AS(rotation_to_quat(Mat3::diag(2, 1, 1)), Error);

  Rng rng(123);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Mat3 R = sample_rotation(rng);
    const Mat3 back = quat_to_rotation(rotation_to_quat(R).value());
    worst = std::max(worst, oracle::max_abs_diff(R, back));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("unit quaternion canonical sheet") {
  const UnitQuaternion a(Quaternion{-2, 0, 0, 0});
  CHECK(a.w() == 1.0);
  const UnitQuaternion b(Quaternion{0, 0, -3, 4});
  CHECK(b.y() == doctest::Approx(0.6));
  CHECK(b.z() == doctest::Approx(-0.8));
  CHECK_THROWS_AS(UnitQuaternion(Quaternion{0, 0, 0, 0}), Error);
}

TEST_CASE("axis angle") {
  const AxisAngle id = axis_angle(Mat3::identity());
  CHECK(id.angle == 0.0);
  CHECK(id.axis[2] == 1.0);

  const AxisAngle half = axis_angle(Mat3::diag(-1, -1, 1));
  CHECK(half.angle == doctest::Approx(oracle::kPi));
  CHECK(half.axis[2] == doctest::Approx(1.0));

  const AxisAngle neg = axis_angle(oracle::expmap({0, 0, -0.7}));
  CHECK(neg.angle == doctest::Approx(-0.7).epsilon(1e-14));
  CHECK(neg.axis[2] == doctest::Approx(1.0));

  std::mt19937_64 gen(3);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 R = oracle::random_rotation(gen);
    const AxisAngle aa = axis_angle(R);
    CHECK(oracle::max_abs_diff(rotation_from_axis_angle(aa.angle, aa.axis), R) < 1e-12);
  }
}

TEST_CASE("geodesic angle") {
  CHECK(geodesic_angle(Mat3::identity(), Mat3::identity()) == 0.0);
  CHECK(geodesic_angle(Mat3::identity(), oracle::expmap({0.2, 0, 0})) == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(geodesic_angle(Mat3::identity(), Mat3::diag(-1, 1, -1)) == doctest::Approx(oracle::kPi));
}

TEST_CASE("symmetry orbit") {
  for (const Mat3& R : symmetry_orbit(Mat3::identity())) CHECK(oracle::max_abs_diff(R, Mat3::identity()) == 0.0);

  const double beta = std::acos(1.0 / 3.0);
  const auto orbit = symmetry_orbit(oracle::expmap({0, 0, beta}));
  const double expected[] = {beta, -beta, -beta, beta};
  for (int i = 0; i < 4; ++i) {
    CHECK(oracle::max_abs_diff(orbit[i], oracle::expmap({0, 0, expected[i]})) < 1e-15);
  }

  std::mt19937_64 gen(5);
  const Mat3 R = oracle::random_rotation(gen);
  for (const Mat3& C : symmetry_orbit(R)) CHECK(C.trace() == doctest::Approx(R.trace()).epsilon(1e-14));
}

TEST_CASE("relative and absolute rotations") {
  const Decomposition d0 = svd_ordered(Mat3::diag(3, 2, 1));
  CHECK(oracle::max_abs_diff(recover_absolute(Mat3::identity(), d0), d0.Rp) == 0.0);

  const double beta = std::acos(1.0 / 3.0);
  const Decomposition d = svd_ordered(Mat3::diag(4, 2, 0.5));
  const Mat3 R = recover_absolute(oracle::expmap({0, 0, beta}), d);
  CHECK(oracle::max_abs_diff(R, oracle::expmap({0, 0, -beta})) < 1e-15);

  std::mt19937_64 gen(9);
  for (int i = 0; i < 1000; ++i) {
    const Decomposition dec = svd_ordered(oracle::random_F(gen));
    const Mat3 Rabs = oracle::random_rotation(gen);
    CHECK(oracle::max_abs_diff(recover_absolute(relative_rotation(Rabs, dec), dec), Rabs) < 1e-12);
  }
}

TEST_CASE("eigen decomposition agrees with characteristic polynomial") {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 200; ++i) {
    const Mat3 F = oracle::random_F(gen);
    const Mat3 S = F.transpose() * F;
    const SymmetricEigen e = symmetric_eigen(S);
    for (int k = 0; k < 3; ++k) {
      const Mat3 M = S - e.values[k] * Mat3::identity();
      CHECK(std::abs(M.det()) < 1e-9 * std::pow(S.frobenius(), 3));
    }
  }
}
