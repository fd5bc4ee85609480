#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace rpolar {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Dense 3x3 matrix, row-major storage.
struct Mat3 {
  std::array<double, 9> a{};

  static constexpr Mat3 zero() { return Mat3{}; }
  static constexpr Mat3 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr Mat3 diag(double d0, double d1, double d2) {
    Mat3 m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    return m;
  }
  static constexpr Mat3 diag(const Vec3& d) { return diag(d[0], d[1], d[2]); }
  static constexpr Mat3 from_rows(const std::array<double, 9>& values) { return Mat3{values}; }
  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i) {
      m(i, 0) = c0[i];
      m(i, 1) = c1[i];
      m(i, 2) = c2[i];
    }
    return m;
  }

  constexpr double& operator()(std::size_t r, std::size_t c) { return a[3 * r + c]; }
  constexpr double operator()(std::size_t r, std::size_t c) const { return a[3 * r + c]; }

  constexpr Vec3 col(std::size_t c) const { return {a[c], a[3 + c], a[6 + c]}; }
  constexpr Vec3 row(std::size_t r) const { return {a[3 * r], a[3 * r + 1], a[3 * r + 2]}; }
  constexpr void set_col(std::size_t c, const Vec3& v) {
    a[c] = v[0];
    a[3 + c] = v[1];
    a[6 + c] = v[2];
  }

  constexpr Mat3 transpose() const {
    Mat3 t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  constexpr double trace() const { return a[0] + a[4] + a[8]; }

  constexpr double det() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }

  constexpr double frobenius_squared() const {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
  }
  double frobenius() const { return std::sqrt(frobenius_squared()); }

  constexpr Mat3 sym() const {
    Mat3 s;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
  }
  constexpr Mat3 skew() const {
    Mat3 s;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) s(i, j) = 0.5 * ((*this)(i, j) - (*this)(j, i));
    return s;
  }

  friend constexpr Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  friend constexpr Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
  }
  friend constexpr Mat3 operator-(const Mat3& x) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = -x.a[i];
    return r;
  }
  friend constexpr Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
    return r;
  }
  friend constexpr Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
    return r;
  }
  friend constexpr Vec3 operator*(const Mat3& x, const Vec3& v) {
    return {x(0, 0) * v[0] + x(0, 1) * v[1] + x(0, 2) * v[2],
            x(1, 0) * v[0] + x(1, 1) * v[1] + x(1, 2) * v[2],
            x(2, 0) * v[0] + x(2, 1) * v[1] + x(2, 2) * v[2]};
  }
  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

// Product x^T * y without forming the transpose.
constexpr Mat3 transpose_times(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = x(0, i) * y(0, j) + x(1, i) * y(1, j) + x(2, i) * y(2, j);
  return r;
}

inline double frobenius_distance(const Mat3& x, const Mat3& y) { return (x - y).frobenius(); }

// Tolerances shared by the matrix predicates.
inline constexpr double kDetEpsilon = 1e-12;
inline constexpr double kOrthoEpsilon = 1e-9;

inline bool is_invertible(const Mat3& m, double eps = kDetEpsilon) { return std::abs(m.det()) > eps; }
inline bool is_proper(const Mat3& m) { return m.det() > 0.0; }
inline bool is_orthogonal(const Mat3& m, double eps = kOrthoEpsilon) {
  return (transpose_times(m, m) - Mat3::identity()).frobenius() < eps;
}
inline bool is_rotation(const Mat3& m, double eps = kOrthoEpsilon) { return is_orthogonal(m, eps) && m.det() > 0.0; }
inline bool is_symmetric(const Mat3& m, double eps = 1e-12) {
  return m.skew().frobenius() <= eps * std::max(1.0, m.frobenius());
}
inline bool is_skew(const Mat3& m, double eps = 1e-12) {
  return m.sym().frobenius() <= eps * std::max(1.0, m.frobenius());
}

// Rotation by `angle` about a coordinate axis.
inline Mat3 rotation_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Mat3::from_rows({1, 0, 0, 0, c, -s, 0, s, c});
}
inline Mat3 rotation_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Mat3::from_rows({c, 0, s, 0, 1, 0, -s, 0, c});
}
inline Mat3 rotation_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Mat3::from_rows({c, -s, 0, s, c, 0, 0, 0, 1});
}

}  // namespace rpolar
