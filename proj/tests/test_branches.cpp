#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "rpolar/branches.hpp"
#include "rpolar/energy.hpp"
#include "rpolar/error.hpp"

using namespace rpolar;

namespace {

const CriticalBranch& find(const std::vector<CriticalBranch>& all, const std::string& id) {
  for (const auto& b : all)
    if (b.id() == id) return b;
  FAIL("missing branch " << id);
  return all.front();
}

Vec3 random_sigma(std::mt19937_64& gen, double lo = 0.1, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec3 s{u(gen), u(gen), u(gen)};
  std::sort(s.v.begin(), s.v.end(), std::greater<>());
  return s;
}

// Rotation of a unit quaternion by axis-angle, independent of the covering
// map's polynomial form.
Mat3 rotation_of(const std::array<double, 4>& q) {
  const Vec3 v{q[1], q[2], q[3]};
  const double n = norm(v);
  if (n == 0.0) return Mat3::identity();
  return oracle::expmap((2.0 * std::atan2(n, q[0]) / n) * v);
}

double limit_energy(const std::array<double, 4>& q, const Vec3& s) {
  return oracle::direct_energy(rotation_of(q), Mat3::diag(s), 1.0, 0.0);
}

// Second derivatives of the energy along great circles through q, in an
// orthonormal basis of the tangent space.
Mat3 tangent_hessian_fd(const Quaternion& q0, const Vec3& s) {
  std::array<double, 4> q = q0.coeffs();
  const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& c : q) c /= n;
  // Gram-Schmidt of the unit axes against q.
  std::vector<std::array<double, 4>> basis;
  for (int k = 0; k < 4 && basis.size() < 3; ++k) {
    std::array<double, 4> v{};
    v[k] = 1.0;
    auto project = [&](const std::array<double, 4>& u) {
      double d = 0;
      for (int i = 0; i < 4; ++i) d += v[i] * u[i];
      for (int i = 0; i < 4; ++i) v[i] -= d * u[i];
    };
    project(q);
    for (const auto& b : basis) project(b);
    double vn = 0;
    for (double c : v) vn += c * c;
    vn = std::sqrt(vn);
    if (vn < 0.5) continue;
    for (double& c : v) c /= vn;
    basis.push_back(v);
  }
  auto along = [&](const std::array<double, 4>& dir) {
    return [&, dir](double t) {
      std::array<double, 4> p;
      for (int i = 0; i < 4; ++i) p[i] = std::cos(t) * q[i] + std::sin(t) * dir[i];
      return limit_energy(p, s);
    };
  };
  const double h = 1e-4;
  Mat3 H;
  for (int i = 0; i < 3; ++i) H(i, i) = oracle::second_difference(along(basis[i]), h);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      std::array<double, 4> d;
      for (int k = 0; k < 4; ++k) d[k] = (basis[i][k] + basis[j][k]) / std::sqrt(2.0);
      const double dd = oracle::second_difference(along(d), h);
      H(i, j) = H(j, i) = dd - 0.5 * (H(i, i) + H(j, j));
    }
  return H;
}

}  // namespace

TEST_CASE("coefficients") {
  CHECK(coeff_a(2.0) == 1.0);
  CHECK(coeff_b(2.0) == 0.0);
  CHECK(std::isnan(coeff_b(1.9)));
  CHECK(coeff_a(6.0) * coeff_a(6.0) + coeff_b(6.0) * coeff_b(6.0) == doctest::Approx(1.0));
}

TEST_CASE("catalog size and identifiers") {
  const auto all = enumerate_branches({4, 2, 0.5});
  REQUIRE(all.size() == 16);
  CHECK(all.front().id() == "I.1");
  CHECK(all.back().id() == "III.3-");
  CHECK(find(all, "II.2-").domain_condition == "s23 >= 2");
}

TEST_CASE("domain predicates") {
  const Vec3 s{1.2, 1.0, 0.8};
  CHECK(branch_defined_at(Family::II, 1, s));
  CHECK_FALSE(branch_defined_at(Family::II, 2, s));
  for (int k = 1; k <= 3; ++k) CHECK_FALSE(branch_defined_at(Family::III, k, s));
  CHECK(branch_defined_at(Family::III, 1, {5, 2.5, 0.1}));
  for (int k = 1; k <= 4; ++k) CHECK(branch_defined_at(Family::I, k, s));

  const auto all = enumerate_branches(s);
  const auto& undefined = find(all, "II.2+");
  CHECK_FALSE(undefined.defined);
  CHECK(std::isnan(undefined.closed_form_energy));
  CHECK_THROWS_AS(branch_energy(undefined, s), Error);
}

TEST_CASE("worked energies and multipliers") {
  const Vec3 s{4, 2, 0.5};
  const auto all = enumerate_branches(s);
  CHECK(find(all, "I.1").closed_form_energy == 10.25);
  CHECK(find(all, "II.1+").closed_form_energy == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(find(all, "II.1-").closed_form_energy == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(find(all, "III.1+").closed_form_energy == doctest::Approx(20.25).epsilon(1e-15));
  CHECK(find(all, "II.1+").multiplier == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(find(all, "I.1").multiplier == 0.0);
  CHECK(find(all, "I.4").multiplier == doctest::Approx(104.0));
}

TEST_CASE("closed forms agree with direct evaluation") {
  std::mt19937_64 gen(10);
  const MaterialParams lim(1, 0);
  for (int i = 0; i < 300; ++i) {
    const Vec3 s = random_sigma(gen);
    for (const auto& b : enumerate_branches(s)) {
      if (!b.defined) continue;
      CHECK(verify_branch(b, s) < 1e-9);
      CHECK(b.closed_form_energy == doctest::Approx(limit_energy(b.quaternion.coeffs(), s)).epsilon(1e-12));
      CHECK(b.quaternion.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("residual examples") {
  const Vec3 s{4, 2, 0.5};
  const auto all = enumerate_branches(s);
  CHECK(verify_branch(find(all, "I.1"), s) == 0.0);
  CHECK(verify_branch(find(all, "II.1+"), s) < 1e-12);
  CriticalBranch wrong = find(all, "II.1+");
  double worst = 0.0;
  for (double r : el_residual_quat(wrong.quaternion, wrong.multiplier + 1, s)) worst = std::max(worst, std::abs(r));
  CHECK(worst >= 0.4);
}

TEST_CASE("gradient and Hessian of the lifted quartic") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-1, 1);
  const MaterialParams lim(1, 0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 s = random_sigma(gen);
    const Quaternion q{u(gen), u(gen), u(gen), u(gen)};
    const Vec4 g = lifted_gradient(q, s);
    const auto el = el_residual_quat(q, 0.0, s);
    const Mat4 H = lifted_hessian(q, s);
    const double h = 1e-5;
    for (int k = 0; k < 4; ++k) {
      CHECK(g[k] == doctest::Approx(4 * el[k]).epsilon(1e-12).scale(1.0));
      auto c = q.coeffs();
      c[k] += h;
      const Vec4 gp = lifted_gradient({c[0], c[1], c[2], c[3]}, s);
      const double ep = lifted_energy({c[0], c[1], c[2], c[3]}, s, lim);
      c[k] -= 2 * h;
      const Vec4 gm = lifted_gradient({c[0], c[1], c[2], c[3]}, s);
      const double em = lifted_energy({c[0], c[1], c[2], c[3]}, s, lim);
      CHECK(g[k] == doctest::Approx((ep - em) / (2 * h)).epsilon(1e-6).scale(1.0));
      for (int j = 0; j < 4; ++j) CHECK(H[j][k] == doctest::Approx((gp[j] - gm[j]) / (2 * h)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("projected Hessian matches great-circle differences") {
  std::mt19937_64 gen(13);
  for (int i = 0; i < 40; ++i) {
    const Vec3 s = random_sigma(gen);
    for (const auto& b : enumerate_branches(s)) {
      if (!b.defined) continue;
      const Vec3 ev = projected_hessian_eigenvalues(b.quaternion, b.multiplier, s);
      const Vec3 ref = symmetric_eigen(tangent_hessian_fd(b.quaternion, s)).values;
      const double scale = std::max(1.0, std::abs(ev[0]));
      for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - ref[k]) < 1e-4 * scale);
    }
  }
}

TEST_CASE("classification examples") {
  {
    const Vec3 s{0.5, 0.4, 0.3};
    CHECK(classify_branch(find(enumerate_branches(s), "I.1"), s) == Stationarity::LocalMin);
  }
  const Vec3 s{4, 2, 0.5};
  const auto all = enumerate_branches(s);
  CHECK(classify_branch(find(all, "I.1"), s) != Stationarity::LocalMin);
  CHECK(classify_branch(find(all, "II.1+"), s) == Stationarity::LocalMin);
  CHECK(classify_branch(find(all, "II.1-"), s) == Stationarity::LocalMin);
}

TEST_CASE("minimal branch selection") {
  {
    const MinimalSelection m = minimal_branch({0.9, 0.8, 0.7});
    REQUIRE(m.branches.size() == 1);
    CHECK(m.branches[0].id() == "I.1");
    CHECK(m.energy == doctest::Approx(0.14));
  }
  {
    const MinimalSelection m = minimal_branch({4, 2, 0.5});
    REQUIRE(m.branches.size() == 2);
    CHECK(m.branches[0].id() == "II.1+");
    CHECK(m.branches[1].id() == "II.1-");
    CHECK(m.energy == doctest::Approx(2.25));
  }
  {
    const MinimalSelection m = minimal_branch({1.25, 0.75, 0.5});
    for (const auto& b : m.branches) {
      CHECK(std::abs(b.quaternion.w - 1.0) < 1e-12);
      CHECK(std::abs(b.quaternion.z) < 1e-12);
    }
  }
}

TEST_CASE("ordering and distinctness errors") {
  auto code_of = [](const Vec3& s) {
    try {
      enumerate_branches(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ExhaustedAttempts;
  };
  CHECK(code_of({1, 2, 3}) == ErrorCode::InvalidArgument);
  CHECK(code_of({2, 2, 1}) == ErrorCode::NonDistinctSigma);
  CHECK(code_of({2, 1, -1}) == ErrorCode::NonPositiveSigma);
  CHECK(enumerate_branches({2, 2, 1}, true).size() == 16);
}

TEST_CASE("local minima found by search are catalog points") {
  std::mt19937_64 gen(14);
  for (int i = 0; i < 20; ++i) {
    const Vec3 s = random_sigma(gen);
    const auto all = enumerate_branches(s);
    const auto f = [&](const Mat3& R) { return oracle::direct_energy(R, Mat3::diag(s), 1.0, 0.0); };
    for (int start = 0; start < 10; ++start) {
      const double local = oracle::minimize_on_so3(f, 1, 1000 * i + start);
      bool matched = false;
      for (const auto& b : all)
        if (b.defined && std::abs(b.closed_form_energy - local) < 1e-6 * std::max(1.0, local)) matched = true;
      CHECK_MESSAGE(matched, "unmatched stationary energy " << local);
    }
    const double global = oracle::minimize_on_so3(f, 5000, 77 + i);
    CHECK(minimal_branch(s).energy == doctest::Approx(global).epsilon(1e-9));
  }
}
