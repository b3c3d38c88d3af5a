#pragma once

#include <array>
#include <complex>
#include <utility>

// Complex 2x2 / 4x4 matrices and 4-vectors over the two-coin basis
// [|CC>, |CD>, |DC>, |DD>].  Agent 1 owns the left tensor slot.
// Values are immutable after construction; every function here is pure.

namespace qpd {

using Complex = std::complex<double>;

inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kStructuralTol = 1e-12;

struct Vector4 {
  std::array<Complex, 4> e{};

  Complex& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
  const Complex& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  double squared_norm() const;
};

struct Matrix2 {
  // row-major
  std::array<Complex, 4> e{};

  Complex& at(int r, int c) { return e[static_cast<std::size_t>(r * 2 + c)]; }
  const Complex& at(int r, int c) const { return e[static_cast<std::size_t>(r * 2 + c)]; }

  static Matrix2 identity();
};

struct Matrix4 {
  // row-major
  std::array<Complex, 16> e{};

  Complex& at(int r, int c) { return e[static_cast<std::size_t>(r * 4 + c)]; }
  const Complex& at(int r, int c) const { return e[static_cast<std::size_t>(r * 4 + c)]; }

  static Matrix4 identity();
};

Matrix2 operator*(const Matrix2& a, const Matrix2& b);
Matrix4 operator*(const Matrix4& a, const Matrix4& b);
Vector4 operator*(const Matrix4& m, const Vector4& v);
Matrix2 operator*(const Complex& s, const Matrix2& m);
Matrix4 operator*(const Complex& s, const Matrix4& m);
Vector4 operator*(const Complex& s, const Vector4& v);

Matrix2 conjugate_transpose(const Matrix2& m);
Matrix4 conjugate_transpose(const Matrix4& m);

double max_abs_diff(const Matrix2& a, const Matrix2& b);
double max_abs_diff(const Matrix4& a, const Matrix4& b);
double max_abs_diff(const Vector4& a, const Vector4& b);

/// Two-parameter local operation
///   [[e^{i phi} cos(theta/2),  i sin(theta/2)       ],
///    [i sin(theta/2),          e^{-i phi} cos(theta/2)]]
/// with theta in [0, pi] and phi in [0, pi/2].  Always unitary.
/// Throws std::domain_error naming the offending parameter.
Matrix2 omega(double theta, double phi);

/// Entangling operator J(gamma) = cos(gamma/2) I(x)I + i sin(gamma/2) sx(x)sx,
/// gamma in [0, pi/2].  J(0) is exactly the 4x4 identity.
Matrix4 j_operator(double gamma);

/// Kronecker product consistent with the basis order above.
Matrix4 tensor2x2(const Matrix2& a, const Matrix2& b);

/// Columns 1 and 4 of tensor2x2(a, b) without forming the full matrix.
std::pair<Vector4, Vector4> tensor_outer_columns(const Matrix2& a, const Matrix2& b);

/// True iff ||M M+ - I||_max <= tol.
bool is_unitary(const Matrix2& m, double tol);
bool is_unitary(const Matrix4& m, double tol);

}  // namespace qpd
