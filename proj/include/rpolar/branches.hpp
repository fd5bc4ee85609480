#pragma once

// Catalog of the 16 critical points (modulo q ~ -q) of the Lagrange function
//   L(q, lambda; D) = |sym(pi(q) D - 1)|^2 - lambda (|q|^2 - 1)
// for the limit weights (mu, muc) = (1, 0), with closed-form multipliers and
// energies, real-valuedness domains and second-order classification.
//
// Family I:   exactly one quaternion coefficient nonzero (sigma independent).
// Family II:  w and one of x, y, z nonzero; depends on pairwise sums s_ij.
// Family III: w == 0 and two of x, y, z nonzero; depends on differences d_ij.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "rpolar/mat3.hpp"
#include "rpolar/rotcore.hpp"

namespace rpolar {

enum class Family { I, II, III };
enum class BranchSign { None, Plus, Minus };
enum class Stationarity { LocalMin, LocalMax, Saddle, Degenerate };

std::string_view to_string(Family family);
std::string_view to_string(Stationarity kind);

// c_A(t) = sqrt(1/2 + 1/t) and c_B(t) = sqrt(1/2 - 1/t); c_B is real only
// for t >= 2.
double coeff_a(double t);
double coeff_b(double t);

struct CriticalBranch {
  Family family = Family::I;
  int index = 1;  // I: 1..4, II and III: 1..3
  BranchSign sign = BranchSign::None;
  bool defined = false;
  // Quaternion, multiplier and energy at the sigma the branch was built for;
  // NaN when the branch is not real-valued there.
  Quaternion quaternion;
  double multiplier = 0.0;
  double closed_form_energy = 0.0;
  std::string domain_condition;

  // Stable identifiers "I.1" .. "I.4", "II.1+" .. "III.3-".
  std::string id() const;
};

inline constexpr double kHessianEpsilon = 1e-6;

// Throws NonDistinctSigma unless sigma is strictly descending with gaps of at
// least kGapRelativeEpsilon * sigma1, unless allow_degenerate is set.
std::vector<CriticalBranch> enumerate_branches(const Vec3& sigma, bool allow_degenerate = false);

bool branch_defined_at(Family family, int index, const Vec3& sigma);
double branch_energy(const CriticalBranch& b, const Vec3& sigma);
double branch_multiplier(const CriticalBranch& b, const Vec3& sigma);
Quaternion branch_quaternion(const CriticalBranch& b, const Vec3& sigma);

// Max-norm of the Euler-Lagrange residual at the branch's (q, lambda).
double verify_branch(const CriticalBranch& b, const Vec3& sigma);

// Exact gradient and Hessian of the quartic |sym(pi(q) D - 1)|^2 on R^4,
// coordinates ordered (w, x, y, z).
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;
Vec4 lifted_gradient(const Quaternion& q, const Vec3& sigma);
Mat4 lifted_hessian(const Quaternion& q, const Vec3& sigma);

// Eigenvalues (descending) of the Hessian of the Lagrange function restricted
// to the tangent space of the unit sphere at q.
Vec3 projected_hessian_eigenvalues(const Quaternion& q, double lambda, const Vec3& sigma);

Stationarity classify_branch(const CriticalBranch& b, const Vec3& sigma);

struct MinimalSelection {
  std::vector<CriticalBranch> branches;
  double energy = 0.0;
};

// I.1 for s12 <= 2, II.1+- for s12 >= 2 (all three at s12 == 2, where they
// coincide). Cross-checked against every defined branch of the catalog.
MinimalSelection minimal_branch(const Vec3& sigma);

}  // namespace rpolar
