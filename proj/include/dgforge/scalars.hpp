#pragma once

// Exact scalars over Q or F_p, dense matrices and sparse vectors.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgforge {

class FieldSpec {
 public:
  FieldSpec() = default;

  static FieldSpec rationals() { return FieldSpec(); }
  // Throws Error(InvalidField) unless p is a prime below 2^31.
  static FieldSpec prime(std::uint64_t p);

  bool is_rationals() const { return p_ == 0; }
  std::uint32_t characteristic() const { return p_; }
  std::string to_string() const;

  friend bool operator==(FieldSpec a, FieldSpec b) { return a.p_ == b.p_; }

 private:
  friend class Scalar;
  explicit FieldSpec(std::uint32_t p) : p_(p) {}
  std::uint32_t p_ = 0;
};

bool is_prime(std::uint64_t n);

// A field element. Rationals are kept as reduced fractions; F_p elements as
// their residue in [0, p). A default-constructed scalar is the rational zero
// and acts as zero in any field.
class Scalar {
 public:
  Scalar() = default;
  Scalar(FieldSpec field, long value);
  Scalar(FieldSpec field, const mpq_class& value);

  // Accepts "n", "-n" and "n/d".
  static Scalar parse(FieldSpec field, std::string_view text);

  FieldSpec field() const;
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  const mpq_class& value() const { return value_; }

  Scalar inverse() const;
  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.value_ == b.value_;
  }

 private:
  void adopt_field(const Scalar& other);
  void normalize();

  mpq_class value_;
  std::uint32_t p_ = 0;
};

// Sign (-1)^n as a scalar.
Scalar sign_scalar(FieldSpec field, long n);
inline int parity_sign(long n) { return (n % 2 == 0) ? 1 : -1; }

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpec field, std::size_t rows, std::size_t cols);

  static Matrix identity(FieldSpec field, std::size_t n);
  // Unit vectors e_i for the listed indices, as columns of an ambient-dim matrix.
  static Matrix unit_columns(FieldSpec field, std::size_t ambient,
                             std::span<const std::size_t> indices);

  FieldSpec field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  bool is_zero() const;
  Matrix transpose() const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix column(std::size_t c) const;

  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);

  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix scaled(const Scalar& s) const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

// Some x with a*x = b, or nullopt when the system is inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

// Columns form a basis of ker(a).
Matrix kernel_basis(const Matrix& a);

// Columns form a basis of the column space of m (a subset of m's columns).
Matrix column_space_basis(const Matrix& m);

// Unit vectors spanning a complement of span(subspace columns) in k^ambient.
// The chosen unit vectors are the non-pivot coordinates of the RREF of the
// subspace, so the result is deterministic in the basis order.
Matrix complement_basis(const Matrix& subspace, std::size_t ambient_dim);
std::vector<std::size_t> complement_coordinates(const Matrix& subspace,
                                                std::size_t ambient_dim);

// Sparse vectors: sorted by index, no explicit zeros.
struct Term {
  int index;
  Scalar coef;
  friend bool operator==(const Term& a, const Term& b) {
    return a.index == b.index && a.coef == b.coef;
  }
};
using SparseVec = std::vector<Term>;

// y += a * x
void axpy(SparseVec& y, const Scalar& a, const SparseVec& x);
SparseVec scaled(const SparseVec& x, const Scalar& a);
SparseVec unit_vec(FieldSpec field, int index);
Scalar coefficient(const SparseVec& x, int index);

// Builds a sparse vector from unordered (index, coef) contributions.
class SparseBuilder {
 public:
  void add(int index, const Scalar& coef);
  void add(const SparseVec& v, const Scalar& coef);
  SparseVec take();

 private:
  std::vector<Term> terms_;
};

}  // namespace dgforge
