#include "qpd/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qpd {

namespace {

void require_in_range(const char* name, double value, double lo, double hi) {
  if (!std::isfinite(value)) {
    throw std::domain_error(std::string(name) + " must be finite");
  }
  if (value < lo || value > hi) {
    throw std::domain_error(std::string(name) + " out of range [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]: got " + std::to_string(value));
  }
}

}  // namespace

double Vector4::squared_norm() const {
  double n = 0.0;
  for (const Complex& c : e) n += std::norm(c);
  return n;
}

Matrix2 Matrix2::identity() {
  Matrix2 m;
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  return m;
}

Matrix4 Matrix4::identity() {
  Matrix4 m;
  for (int i = 0; i < 4; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r.at(i, j) += a.at(i, k) * b.at(k, j);
  return r;
}

Matrix4 operator*(const Matrix4& a, const Matrix4& b) {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r.at(i, j) += a.at(i, k) * b.at(k, j);
  return r;
}

Vector4 operator*(const Matrix4& m, const Vector4& v) {
  Vector4 r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r[i] += m.at(i, k) * v[k];
  return r;
}

Matrix2 operator*(const Complex& s, const Matrix2& m) {
  Matrix2 r = m;
  for (Complex& c : r.e) c *= s;
  return r;
}

Matrix4 operator*(const Complex& s, const Matrix4& m) {
  Matrix4 r = m;
  for (Complex& c : r.e) c *= s;
  return r;
}

Vector4 operator*(const Complex& s, const Vector4& v) {
  Vector4 r = v;
  for (Complex& c : r.e) c *= s;
  return r;
}

Matrix2 conjugate_transpose(const Matrix2& m) {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = std::conj(m.at(j, i));
  return r;
}

Matrix4 conjugate_transpose(const Matrix4& m) {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.at(i, j) = std::conj(m.at(j, i));
  return r;
}

double max_abs_diff(const Matrix2& a, const Matrix2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.e.size(); ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
  return d;
}

double max_abs_diff(const Matrix4& a, const Matrix4& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.e.size(); ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
  return d;
}

double max_abs_diff(const Vector4& a, const Vector4& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.e.size(); ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
  return d;
}

Matrix2 omega(double theta, double phi) {
  require_in_range("theta", theta, 0.0, std::numbers::pi);
  require_in_range("phi", phi, 0.0, std::numbers::pi / 2.0);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix2 m;
  m.at(0, 0) = std::polar(c, phi);
  m.at(0, 1) = Complex(0.0, s);
  m.at(1, 0) = Complex(0.0, s);
  m.at(1, 1) = std::polar(c, -phi);
  return m;
}

Matrix4 j_operator(double gamma) {
  require_in_range("gamma", gamma, 0.0, std::numbers::pi / 2.0);
  const double c = std::cos(gamma / 2.0);
  const Complex is(0.0, std::sin(gamma / 2.0));
  Matrix4 m;
  for (int i = 0; i < 4; ++i) {
    m.at(i, i) = c;
    m.at(i, 3 - i) = is;
  }
  return m;
}

Matrix4 tensor2x2(const Matrix2& a, const Matrix2& b) {
  Matrix4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          r.at(i * 2 + k, j * 2 + l) = a.at(i, j) * b.at(k, l);
  return r;
}

std::pair<Vector4, Vector4> tensor_outer_columns(const Matrix2& a, const Matrix2& b) {
  Vector4 left, right;
  left[0] = a.at(0, 0) * b.at(0, 0);
  left[1] = a.at(0, 0) * b.at(1, 0);
  left[2] = a.at(1, 0) * b.at(0, 0);
  left[3] = a.at(1, 0) * b.at(1, 0);
  right[0] = a.at(0, 1) * b.at(0, 1);
  right[1] = a.at(0, 1) * b.at(1, 1);
  right[2] = a.at(1, 1) * b.at(0, 1);
  right[3] = a.at(1, 1) * b.at(1, 1);
  return {left, right};
}

bool is_unitary(const Matrix2& m, double tol) {
  return max_abs_diff(m * conjugate_transpose(m), Matrix2::identity()) <= tol;
}

bool is_unitary(const Matrix4& m, double tol) {
  return max_abs_diff(m * conjugate_transpose(m), Matrix4::identity()) <= tol;
}

}  // namespace qpd
