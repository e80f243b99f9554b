#include "dgforge/scalars.hpp"

#include <algorithm>
#include <sstream>

#include "dgforge/error.hpp"

namespace dgforge {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::InvalidField: return "invalid-field";
    case ErrorKind::InvalidAlgebra: return "invalid-algebra";
    case ErrorKind::InvalidModule: return "invalid-module";
    case ErrorKind::InvalidTwisted: return "invalid-twisted";
    case ErrorKind::ClassPRequired: return "classP-required";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Schema: return "schema-violation";
    case ErrorKind::FileNotFound: return "file-not-found";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 31) || !is_prime(p)) {
    throw Error(ErrorKind::InvalidField,
                "characteristic " + std::to_string(p) + " is not a prime below 2^31");
  }
  return FieldSpec(static_cast<std::uint32_t>(p));
}

std::string FieldSpec::to_string() const {
  return is_rationals() ? "Q" : "F_" + std::to_string(p_);
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(FieldSpec field, long value) : value_(value), p_(field.characteristic()) {
  normalize();
}

Scalar::Scalar(FieldSpec field, const mpq_class& value)
    : value_(value), p_(field.characteristic()) {
  normalize();
}

Scalar Scalar::parse(FieldSpec field, std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorKind::Schema, "empty coefficient");
  auto valid_int = [](std::string_view part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorKind::Schema, "malformed coefficient '" + s + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw Error(ErrorKind::Schema, "zero denominator in '" + s + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return Scalar(field, q);
}

FieldSpec Scalar::field() const {
  return FieldSpec(p_);
}

void Scalar::normalize() {
  if (p_ == 0) return;
  mpz_class p(p_);
  mpz_class num = value_.get_num() % p;
  if (num < 0) num += p;
  if (value_.get_den() != 1) {
    mpz_class den = value_.get_den() % p;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0) {
      throw Error(ErrorKind::InvalidField,
                  "denominator not invertible in F_" + std::to_string(p_));
    }
    num = (num * inv) % p;
  }
  value_ = mpq_class(num);
}

void Scalar::adopt_field(const Scalar& other) {
  if (p_ == other.p_ || other.p_ == 0) return;
  if (p_ != 0) {
    throw Error(ErrorKind::InvalidField, "mixing scalars of different fields");
  }
  p_ = other.p_;
  normalize();
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::Precondition, "inverse of zero");
  Scalar r = *this;
  r.value_ = 1 / value_;
  r.normalize();
  return r;
}

std::string Scalar::to_string() const { return value_.get_str(); }

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.value_ = -value_;
  r.normalize();
  return r;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  adopt_field(other);
  value_ += other.value_;
  if (p_ != 0) {
    if (other.p_ != p_) {
      normalize();
    } else if (value_ >= p_) {
      value_ -= p_;
    }
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  adopt_field(other);
  value_ -= other.value_;
  if (p_ != 0) {
    if (other.p_ != p_) {
      normalize();
    } else if (value_ < 0) {
      value_ += p_;
    }
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  adopt_field(other);
  value_ *= other.value_;
  normalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) {
  adopt_field(other);
  return *this *= other.inverse();
}

Scalar sign_scalar(FieldSpec field, long n) { return Scalar(field, parity_sign(n)); }

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(FieldSpec field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(field, 1);
  return m;
}

Matrix Matrix::unit_columns(FieldSpec field, std::size_t ambient,
                            std::span<const std::size_t> indices) {
  Matrix m(field, ambient, indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) m(indices[c], c) = Scalar(field, 1);
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix m(field_, rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(rows[i], c);
  return m;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix m(field_, rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) m(r, j) = (*this)(r, cols[j]);
  return m;
}

Matrix Matrix::column(std::size_t c) const {
  std::size_t idx[] = {c};
  return select_columns(idx);
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) {
    throw Error(ErrorKind::DimensionMismatch, "hstack: row counts differ");
  }
  Matrix m(a.field_, a.rows_, a.cols_ + b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols_; ++c) m(r, a.cols_ + c) = b(r, c);
  }
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "vstack: column counts differ");
  }
  Matrix m(a.field_, a.rows_ + b.rows_, a.cols_);
  for (std::size_t c = 0; c < a.cols_; ++c) {
    for (std::size_t r = 0; r < a.rows_; ++r) m(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows_; ++r) m(a.rows_ + r, c) = b(r, c);
  }
  return m;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  Matrix m(field_, rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) {
        const Scalar& b = other(k, c);
        if (!b.is_zero()) m(r, c) += a * b;
      }
    }
  }
  return m;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix sum: shapes differ");
  }
  Matrix m = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] += other.data_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix difference: shapes differ");
  }
  Matrix m = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] -= other.data_[i];
  return m;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix m = *this;
  for (auto& x : m.data_) x *= s;
  return m;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ---------------------------------------------------------------------------
// Elimination

RrefResult rref(const Matrix& m) {
  RrefResult out{m, {}};
  Matrix& a = out.reduced;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t r = pivot_row;
    while (r < rows && a(r, c).is_zero()) ++r;
    if (r == rows) continue;
    if (r != pivot_row) {
      for (std::size_t k = c; k < cols; ++k) std::swap(a(r, k), a(pivot_row, k));
    }
    Scalar inv = a(pivot_row, c).inverse();
    for (std::size_t k = c; k < cols; ++k) a(pivot_row, k) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pivot_row || a(i, c).is_zero()) continue;
      Scalar factor = a(i, c);
      for (std::size_t k = c; k < cols; ++k) {
        if (!a(pivot_row, k).is_zero()) a(i, k) -= factor * a(pivot_row, k);
      }
    }
    out.pivots.push_back(c);
    ++pivot_row;
  }
  return out;
}

std::size_t rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  // Eliminate along the smaller side.
  return m.rows() < m.cols() ? rref(m.transpose()).rank() : rref(m).rank();
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "solve: a.rows != b.rows");
  }
  const FieldSpec f = a.field();
  Matrix x(f, a.cols(), b.cols());
  if (b.cols() == 0) return x;
  RrefResult red = rref(Matrix::hstack(a, b));
  for (std::size_t i = 0; i < red.pivots.size(); ++i) {
    std::size_t pc = red.pivots[i];
    if (pc >= a.cols()) return std::nullopt;  // pivot in the augmented part
    for (std::size_t j = 0; j < b.cols(); ++j) x(pc, j) = red.reduced(i, a.cols() + j);
  }
  return x;
}

Matrix kernel_basis(const Matrix& a) {
  const FieldSpec f = a.field();
  RrefResult red = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : red.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix k(f, a.cols(), free.size());
  for (std::size_t j = 0; j < free.size(); ++j) {
    k(free[j], j) = Scalar(f, 1);
    for (std::size_t i = 0; i < red.pivots.size(); ++i) {
      k(red.pivots[i], j) = -red.reduced(i, free[j]);
    }
  }
  return k;
}

Matrix column_space_basis(const Matrix& m) {
  RrefResult red = rref(m);
  return m.select_columns(red.pivots);
}

std::vector<std::size_t> complement_coordinates(const Matrix& subspace,
                                                std::size_t ambient_dim) {
  if (subspace.cols() > 0 && subspace.rows() != ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "complement: ambient dimension mismatch");
  }
  std::vector<bool> is_pivot(ambient_dim, false);
  if (subspace.cols() > 0) {
    RrefResult red = rref(subspace.transpose());
    for (auto p : red.pivots) is_pivot[p] = true;
  }
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < ambient_dim; ++i)
    if (!is_pivot[i]) coords.push_back(i);
  return coords;
}

Matrix complement_basis(const Matrix& subspace, std::size_t ambient_dim) {
  auto coords = complement_coordinates(subspace, ambient_dim);
  return Matrix::unit_columns(subspace.field(), ambient_dim, coords);
}

// ---------------------------------------------------------------------------
// Sparse vectors

void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].index < x[j].index)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].index < y[i].index) {
      out.push_back({x[j].index, a * x[j].coef});
      ++j;
    } else {
      Scalar c = y[i].coef + a * x[j].coef;
      if (!c.is_zero()) out.push_back({y[i].index, std::move(c)});
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

SparseVec scaled(const SparseVec& x, const Scalar& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  out.reserve(x.size());
  for (const auto& t : x) out.push_back({t.index, t.coef * a});
  return out;
}

SparseVec unit_vec(FieldSpec field, int index) { return {{index, Scalar(field, 1)}}; }

Scalar coefficient(const SparseVec& x, int index) {
  auto it = std::lower_bound(x.begin(), x.end(), index,
                             [](const Term& t, int i) { return t.index < i; });
  if (it != x.end() && it->index == index) return it->coef;
  return Scalar();
}

void SparseBuilder::add(int index, const Scalar& coef) {
  if (!coef.is_zero()) terms_.push_back({index, coef});
}

void SparseBuilder::add(const SparseVec& v, const Scalar& coef) {
  if (coef.is_zero()) return;
  for (const auto& t : v) terms_.push_back({t.index, t.coef * coef});
}

SparseVec SparseBuilder::take() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return a.index < b.index; });
  SparseVec out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().index == t.index) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
  terms_.clear();
  return out;
}

}  // namespace dgforge
