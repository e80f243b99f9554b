#include "dgforge/complex.hpp"

#include <set>

#include "dgforge/error.hpp"

namespace dgforge {

void GradedComplex::set_dim(int degree, std::size_t dim) {
  if (dim == 0) {
    dims_.erase(degree);
  } else {
    dims_[degree] = dim;
  }
}

void GradedComplex::set_differential(int degree, Matrix d) {
  if (d.rows() != dim(degree + 1) || d.cols() != dim(degree)) {
    throw Error(ErrorKind::DimensionMismatch, "differential block has the wrong shape");
  }
  if (d.rows() == 0 || d.cols() == 0) {
    diffs_.erase(degree);
    return;
  }
  diffs_[degree] = std::move(d);
}

std::size_t GradedComplex::dim(int degree) const {
  auto it = dims_.find(degree);
  return it == dims_.end() ? 0 : it->second;
}

Matrix GradedComplex::differential(int degree) const {
  auto it = diffs_.find(degree);
  if (it != diffs_.end()) return it->second;
  return Matrix(field_, dim(degree + 1), dim(degree));
}

std::vector<int> GradedComplex::support() const {
  std::vector<int> out;
  for (const auto& [p, d] : dims_) out.push_back(p);
  return out;
}

std::size_t GradedComplex::total_dim() const {
  std::size_t n = 0;
  for (const auto& [p, d] : dims_) n += d;
  return n;
}

bool GradedComplex::squares_to_zero() const {
  for (const auto& [p, d] : diffs_) {
    auto next = diffs_.find(p + 1);
    if (next == diffs_.end()) continue;
    if (!(next->second * d).is_zero()) return false;
  }
  return true;
}

Matrix GradedComplex::cycles(int degree) const {
  const std::size_t n = dim(degree);
  if (dim(degree + 1) == 0) return Matrix::identity(field_, n);
  return kernel_basis(differential(degree));
}

Matrix GradedComplex::boundaries(int degree) const {
  if (dim(degree - 1) == 0) return Matrix(field_, dim(degree), 0);
  return column_space_basis(differential(degree - 1));
}

std::size_t GradedComplex::homology_dim(int degree) const {
  const std::size_t n = dim(degree);
  if (n == 0) return 0;
  std::size_t z = n - (dim(degree + 1) == 0 ? 0 : rank(differential(degree)));
  std::size_t b = dim(degree - 1) == 0 ? 0 : rank(differential(degree - 1));
  return z - b;
}

Matrix GradedComplex::homology_representatives(int degree) const {
  // Reduce [B | Z]; the pivots that land in Z pick representatives.
  Matrix b = boundaries(degree);
  Matrix z = cycles(degree);
  RrefResult red = rref(Matrix::hstack(b, z));
  std::vector<std::size_t> picked;
  for (auto p : red.pivots)
    if (p >= b.cols()) picked.push_back(p - b.cols());
  return z.select_columns(picked);
}

std::map<int, std::size_t> GradedComplex::homology_dims() const {
  std::map<int, std::size_t> out;
  for (const auto& [p, d] : dims_) {
    std::size_t h = homology_dim(p);
    if (h > 0) out[p] = h;
  }
  return out;
}

Matrix GradedMap::block(const GradedComplex& source, const GradedComplex& target,
                        int p) const {
  auto it = blocks.find(p);
  if (it != blocks.end()) return it->second;
  return Matrix(source.field(), target.dim(p + degree), source.dim(p));
}

bool is_chain_map(const GradedComplex& source, const GradedComplex& target,
                  const GradedMap& f) {
  // d f = (-1)^deg f d
  const Scalar sign = sign_scalar(source.field(), f.degree);
  for (int p : source.support()) {
    Matrix lhs = target.differential(p + f.degree) * f.block(source, target, p);
    Matrix rhs = f.block(source, target, p + 1) * source.differential(p);
    if (!(lhs - rhs.scaled(sign)).is_zero()) return false;
  }
  // Also catch blocks leaving degrees where the source is zero.
  for (int q : target.support()) {
    int p = q - f.degree - 1;
    if (source.dim(p) != 0) continue;
    Matrix rhs = f.block(source, target, p + 1) * source.differential(p);
    if (!rhs.is_zero()) return false;
  }
  return true;
}

GradedMap compose(const GradedComplex& a, const GradedComplex& b, const GradedComplex& c,
                  const GradedMap& g, const GradedMap& f) {
  GradedMap out;
  out.degree = f.degree + g.degree;
  for (int p : a.support()) {
    Matrix m = g.block(b, c, p + f.degree) * f.block(a, b, p);
    if (!m.is_zero()) out.blocks[p] = std::move(m);
  }
  return out;
}

std::size_t induced_rank(const GradedComplex& source, const GradedComplex& target,
                         const GradedMap& f, int p) {
  if (source.dim(p) == 0 || target.dim(p + f.degree) == 0) return 0;
  Matrix z = source.cycles(p);
  Matrix image = f.block(source, target, p) * z;
  Matrix b = target.boundaries(p + f.degree);
  return rank(Matrix::hstack(b, image)) - b.cols();
}

bool induces_iso(const GradedComplex& source, const GradedComplex& target,
                 const GradedMap& f, int p) {
  std::size_t hs = source.homology_dim(p);
  std::size_t ht = target.homology_dim(p + f.degree);
  if (hs != ht) return false;
  if (hs == 0) return true;
  return induced_rank(source, target, f, p) == hs;
}

ExactnessCheck check_exact_at(const GradedComplex& u, const GradedComplex& v,
                              const GradedComplex& w, const GradedMap& a,
                              const GradedMap& b, int p) {
  ExactnessCheck out;
  out.degree = p;
  out.dim_middle = v.homology_dim(p);
  out.rank_in = induced_rank(u, v, a, p - a.degree);
  out.rank_out = induced_rank(v, w, b, p);
  GradedMap ba = compose(u, v, w, b, a);
  out.composite_zero = induced_rank(u, w, ba, p - a.degree) == 0;
  return out;
}

}  // namespace dgforge
