#include "rpolar/branches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rpolar/energy.hpp"
#include "rpolar/error.hpp"

namespace rpolar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sq(double v) { return v * v; }

void require_ordered(const Vec3& sigma, bool allow_degenerate) {
  require_positive_sigma(sigma);
  if (sigma[0] < sigma[1] || sigma[1] < sigma[2])
    throw Error(ErrorCode::InvalidArgument, "singular values must be sorted in descending order");
  if (allow_degenerate) return;
  const double eps = kGapRelativeEpsilon * sigma[0];
  if (sigma[0] - sigma[1] < eps || sigma[1] - sigma[2] < eps)
    throw Error(ErrorCode::NonDistinctSigma, "critical catalog requires distinct singular values");
}

// Argument t of c_A/c_B for the Type II and III branches.
double branch_argument(Family family, int index, const Vec3& s) {
  if (family == Family::II) {
    switch (index) {
      case 1: return s[0] + s[1];
      case 2: return s[1] + s[2];
      case 3: return s[2] + s[0];
    }
  } else if (family == Family::III) {
    switch (index) {
      case 1: return s[0] - s[1];
      case 2: return s[1] - s[2];
      case 3: return s[0] - s[2];  // -d31
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no branch argument for this family/index");
}

void require_valid_identity(const CriticalBranch& b) {
  const int max_index = b.family == Family::I ? 4 : 3;
  if (b.index < 1 || b.index > max_index) throw Error(ErrorCode::InvalidArgument, "branch index out of range");
  if ((b.family == Family::I) != (b.sign == BranchSign::None))
    throw Error(ErrorCode::InvalidArgument, "only family I branches are unsigned");
}

void require_defined(const CriticalBranch& b, const Vec3& sigma) {
  require_valid_identity(b);
  require_positive_sigma(sigma);
  if (!branch_defined_at(b.family, b.index, sigma))
    throw Error(ErrorCode::UndefinedBranch, b.id() + " is not real-valued at this sigma");
}

std::string domain_condition(Family family, int index) {
  if (family == Family::I) return "always";
  static constexpr const char* sums[] = {"s12 >= 2", "s23 >= 2", "s31 >= 2"};
  static constexpr const char* diffs[] = {"d12 >= 2", "d23 >= 2", "d13 >= 2"};
  return family == Family::II ? sums[index - 1] : diffs[index - 1];
}

// Coefficients q^T B q of the covering map entries without the identity part,
// pi_ij(q) = delta_ij + q^T B_ij q.
using QuadForms = std::array<Mat4, 9>;

const QuadForms& covering_quadratic_forms() {
  static const QuadForms forms = [] {
    QuadForms f{};
    enum { W = 0, X = 1, Y = 2, Z = 3 };
    auto set = [](Mat4& m, int a, int b, double v) {
      if (a == b) {
        m[a][a] += v;
      } else {
        m[a][b] += 0.5 * v;
        m[b][a] += 0.5 * v;
      }
    };
    // row 0: 1-2(y^2+z^2), 2(xy - wz), 2(xz + wy)
    set(f[0], Y, Y, -2), set(f[0], Z, Z, -2);
    set(f[1], X, Y, 2), set(f[1], W, Z, -2);
    set(f[2], X, Z, 2), set(f[2], W, Y, 2);
    // row 1: 2(xy + wz), 1-2(x^2+z^2), 2(yz - wx)
    set(f[3], X, Y, 2), set(f[3], W, Z, 2);
    set(f[4], X, X, -2), set(f[4], Z, Z, -2);
    set(f[5], Y, Z, 2), set(f[5], W, X, -2);
    // row 2: 2(xz - wy), 2(yz + wx), 1-2(x^2+y^2)
    set(f[6], X, Z, 2), set(f[6], W, Y, -2);
    set(f[7], Y, Z, 2), set(f[7], W, X, 2);
    set(f[8], X, X, -2), set(f[8], Y, Y, -2);
    return f;
  }();
  return forms;
}

// sym(pi(q) D)_ij = delta_ij sigma_i + q^T A_ij q for the six independent
// entries i <= j, each weighted by its multiplicity in the Frobenius norm.
struct SymEntryForms {
  std::array<Mat4, 6> A{};
  std::array<double, 6> offset{};
  std::array<double, 6> weight{};
};

SymEntryForms sym_entry_forms(const Vec3& sigma) {
  const QuadForms& B = covering_quadratic_forms();
  SymEntryForms out;
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j, ++k) {
      const Mat4& bij = B[3 * i + j];
      const Mat4& bji = B[3 * j + i];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out.A[k][a][b] = 0.5 * (sigma[j] * bij[a][b] + sigma[i] * bji[a][b]);
      out.offset[k] = i == j ? sigma[i] - 1.0 : 0.0;
      out.weight[k] = i == j ? 1.0 : 2.0;
    }
  }
  return out;
}

Vec4 apply(const Mat4& m, const Vec4& v) {
  Vec4 r{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r[a] += m[a][b] * v[b];
  return r;
}

double quad(const Mat4& m, const Vec4& v) {
  const Vec4 mv = apply(m, v);
  return mv[0] * v[0] + mv[1] * v[1] + mv[2] * v[2] + mv[3] * v[3];
}

double quad_pair(const Mat4& m, const Vec4& u, const Vec4& v) {
  const Vec4 mv = apply(m, v);
  return u[0] * mv[0] + u[1] * mv[1] + u[2] * mv[2] + u[3] * mv[3];
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::I: return "I";
    case Family::II: return "II";
    case Family::III: return "III";
  }
  return "?";
}

std::string_view to_string(Stationarity kind) {
  switch (kind) {
    case Stationarity::LocalMin: return "LocalMin";
    case Stationarity::LocalMax: return "LocalMax";
    case Stationarity::Saddle: return "Saddle";
    case Stationarity::Degenerate: return "Degenerate";
  }
  return "?";
}

double coeff_a(double t) { return std::sqrt(0.5 + 1.0 / t); }

double coeff_b(double t) {
  if (t < 2.0) return kNaN;
  // At t == 2 rounding may push the radicand below zero.
  return std::sqrt(std::max(0.0, 0.5 - 1.0 / t));
}

std::string CriticalBranch::id() const {
  std::string out(to_string(family));
  out += '.';
  out += std::to_string(index);
  if (sign == BranchSign::Plus) out += '+';
  if (sign == BranchSign::Minus) out += '-';
  return out;
}

bool branch_defined_at(Family family, int index, const Vec3& sigma) {
  if (family == Family::I) return true;
  return branch_argument(family, index, sigma) >= 2.0;
}

Quaternion branch_quaternion(const CriticalBranch& b, const Vec3& sigma) {
  require_defined(b, sigma);
  if (b.family == Family::I) {
    Quaternion q{0, 0, 0, 0};
    switch (b.index) {
      case 1: q.w = 1; break;
      case 2: q.x = 1; break;
      case 3: q.y = 1; break;
      case 4: q.z = 1; break;
    }
    return q;
  }
  const double t = branch_argument(b.family, b.index, sigma);
  const double a = coeff_a(t);
  // + 0.0 drops the sign of a zero c_B at the domain boundary.
  const double c = (b.sign == BranchSign::Minus ? -1.0 : 1.0) * coeff_b(t) + 0.0;
  if (b.family == Family::II) {
    switch (b.index) {
      case 1: return {a, 0, 0, c};
      case 2: return {a, c, 0, 0};
      default: return {a, 0, c, 0};
    }
  }
  switch (b.index) {
    case 1: return {0, a, c, 0};
    case 2: return {0, 0, a, c};
    default: return {0, a, 0, c};
  }
}

double branch_energy(const CriticalBranch& b, const Vec3& sigma) {
  require_defined(b, sigma);
  const double s1 = sigma[0], s2 = sigma[1], s3 = sigma[2];
  switch (b.family) {
    case Family::I:
      // Energy of the half-turn diag(+-1, +-1, +-1) represented by the
      // branch's unit coordinate quaternion.
      switch (b.index) {
        case 1: return sq(s1 - 1) + sq(s2 - 1) + sq(s3 - 1);
        case 2: return sq(s1 - 1) + sq(s2 + 1) + sq(s3 + 1);
        case 3: return sq(s1 + 1) + sq(s2 - 1) + sq(s3 + 1);
        default: return sq(s1 + 1) + sq(s2 + 1) + sq(s3 - 1);
      }
    case Family::II:
      switch (b.index) {
        case 1: return 0.5 * sq(s1 - s2) + sq(s3 - 1);
        case 2: return 0.5 * sq(s2 - s3) + sq(s1 - 1);
        default: return 0.5 * sq(s3 - s1) + sq(s2 - 1);
      }
    case Family::III:
      switch (b.index) {
        case 1: return 0.5 * sq(s1 + s2) + sq(s3 + 1);
        case 2: return 0.5 * sq(s2 + s3) + sq(s1 + 1);
        default: return 0.5 * sq(s3 + s1) + sq(s2 + 1);
      }
  }
  return kNaN;
}

double branch_multiplier(const CriticalBranch& b, const Vec3& sigma) {
  require_defined(b, sigma);
  const double s1 = sigma[0], s2 = sigma[1], s3 = sigma[2];
  const double s12 = s1 + s2, s23 = s2 + s3, s31 = s3 + s1;
  switch (b.family) {
    case Family::I:
      switch (b.index) {
        case 1: return 0.0;
        case 2: return 4.0 * (s2 * s2 + s3 * s3 + s23);
        case 3: return 4.0 * (s3 * s3 + s1 * s1 + s31);
        default: return 4.0 * (s1 * s1 + s2 * s2 + s12);
      }
    case Family::II:
      switch (b.index) {
        case 1: return sq(s1 - s2) * (s12 - 2.0) / s12;
        case 2: return sq(s2 - s3) * (s23 - 2.0) / s23;
        default: return sq(s3 - s1) * (s31 - 2.0) / s31;
      }
    case Family::III:
      // 4 sigma_m (1 + sigma_m) + (s_ij - 2) s_ij with (i, j) the rotation
      // plane of the branch and m the remaining index.
      switch (b.index) {
        case 1: return 4.0 * s3 * (1.0 + s3) + (s12 - 2.0) * s12;
        case 2: return 4.0 * s1 * (1.0 + s1) + (s23 - 2.0) * s23;
        default: return 4.0 * s2 * (1.0 + s2) + (s31 - 2.0) * s31;
      }
  }
  return kNaN;
}

std::vector<CriticalBranch> enumerate_branches(const Vec3& sigma, bool allow_degenerate) {
  require_ordered(sigma, allow_degenerate);
  std::vector<CriticalBranch> out;
  out.reserve(16);
  auto add = [&](Family family, int index, BranchSign sign) {
    CriticalBranch b;
    b.family = family;
    b.index = index;
    b.sign = sign;
    b.domain_condition = domain_condition(family, index);
    b.defined = branch_defined_at(family, index, sigma);
    if (b.defined) {
      b.quaternion = branch_quaternion(b, sigma);
      b.multiplier = branch_multiplier(b, sigma);
      b.closed_form_energy = branch_energy(b, sigma);
    } else {
      b.quaternion = {kNaN, kNaN, kNaN, kNaN};
      b.multiplier = kNaN;
      b.closed_form_energy = kNaN;
    }
    out.push_back(std::move(b));
  };
  for (int k = 1; k <= 4; ++k) add(Family::I, k, BranchSign::None);
  for (Family family : {Family::II, Family::III})
    for (int k = 1; k <= 3; ++k) {
      add(family, k, BranchSign::Plus);
      add(family, k, BranchSign::Minus);
    }
  return out;
}

double verify_branch(const CriticalBranch& b, const Vec3& sigma) {
  const Quaternion q = branch_quaternion(b, sigma);
  const auto r = el_residual_quat(q, branch_multiplier(b, sigma), sigma);
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

Vec4 lifted_gradient(const Quaternion& q, const Vec3& sigma) {
  const SymEntryForms forms = sym_entry_forms(sigma);
  const Vec4 v = q.coeffs();
  Vec4 g{};
  for (int k = 0; k < 6; ++k) {
    const Vec4 Av = apply(forms.A[k], v);
    const double m = forms.offset[k] + quad(forms.A[k], v);
    for (int a = 0; a < 4; ++a) g[a] += forms.weight[k] * 4.0 * m * Av[a];
  }
  return g;
}

Mat4 lifted_hessian(const Quaternion& q, const Vec3& sigma) {
  const SymEntryForms forms = sym_entry_forms(sigma);
  const Vec4 v = q.coeffs();
  Mat4 H{};
  for (int k = 0; k < 6; ++k) {
    const Vec4 Av = apply(forms.A[k], v);
    const double m = forms.offset[k] + quad(forms.A[k], v);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        H[a][b] += forms.weight[k] * (8.0 * Av[a] * Av[b] + 4.0 * m * forms.A[k][a][b]);
  }
  return H;
}

Vec3 projected_hessian_eigenvalues(const Quaternion& q, double lambda, const Vec3& sigma) {
  const Vec4 v = q.coeffs();
  const double n2 = q.norm_squared();
  if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroQuaternion, "projected Hessian needs q != 0");

  // Orthonormal basis of the tangent space q^perp by Gram-Schmidt on the
  // coordinate axes, skipping the one most aligned with q.
  int skip = 0;
  for (int a = 1; a < 4; ++a)
    if (std::abs(v[a]) > std::abs(v[skip])) skip = a;
  std::array<Vec4, 3> basis{};
  int count = 0;
  for (int a = 0; a < 4; ++a) {
    if (a == skip) continue;
    Vec4 e{};
    e[a] = 1.0;
    const double along = v[a] / n2;
    for (int c = 0; c < 4; ++c) e[c] -= along * v[c];
    for (int j = 0; j < count; ++j) {
      double p = 0.0;
      for (int c = 0; c < 4; ++c) p += e[c] * basis[j][c];
      for (int c = 0; c < 4; ++c) e[c] -= p * basis[j][c];
    }
    double len = 0.0;
    for (double c : e) len += c * c;
    len = std::sqrt(len);
    for (double& c : e) c /= len;
    basis[count++] = e;
  }

  Mat4 H = lifted_hessian(q, sigma);
  for (int a = 0; a < 4; ++a) H[a][a] -= 2.0 * lambda;

  Mat3 T;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) T(i, j) = quad_pair(H, basis[i], basis[j]);
  return symmetric_eigen(T).values;
}

Stationarity classify_branch(const CriticalBranch& b, const Vec3& sigma) {
  const Quaternion q = branch_quaternion(b, sigma);
  const Vec3 eig = projected_hessian_eigenvalues(q, branch_multiplier(b, sigma), sigma);
  bool positive = true, negative = true;
  for (double e : eig.v) {
    if (std::abs(e) <= kHessianEpsilon) return Stationarity::Degenerate;
    positive = positive && e > 0.0;
    negative = negative && e < 0.0;
  }
  if (positive) return Stationarity::LocalMin;
  if (negative) return Stationarity::LocalMax;
  return Stationarity::Saddle;
}

MinimalSelection minimal_branch(const Vec3& sigma) {
  std::vector<CriticalBranch> all = enumerate_branches(sigma);
  const double s12 = sigma[0] + sigma[1];

  MinimalSelection sel;
  for (const CriticalBranch& b : all) {
    const bool identity = b.family == Family::I && b.index == 1;
    const bool planar = b.family == Family::II && b.index == 1;
    if ((identity && s12 <= 2.0) || (planar && s12 >= 2.0)) sel.branches.push_back(b);
  }
  sel.energy = sel.branches.front().closed_form_energy;

  const double slack = 1e-12 * std::max(1.0, std::abs(sel.energy));
  for (const CriticalBranch& b : all) {
    if (b.defined && b.closed_form_energy < sel.energy - slack)
      throw std::logic_error("branch " + b.id() + " undercuts the selected minimal energy");
  }
  return sel;
}

}  // namespace rpolar
