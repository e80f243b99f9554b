#pragma once

// Finite cochain complexes of vector spaces and maps between them. Module
// homology, Hom complexes and the long exact sequence checks all reduce to
// these.

#include <cstddef>
#include <map>
#include <vector>

#include "dgforge/scalars.hpp"

namespace dgforge {

class GradedComplex {
 public:
  explicit GradedComplex(FieldSpec field = FieldSpec::rationals()) : field_(field) {}

  FieldSpec field() const { return field_; }

  void set_dim(int degree, std::size_t dim);
  // d: C^degree -> C^{degree+1}; shape must be dim(degree+1) x dim(degree).
  void set_differential(int degree, Matrix d);

  std::size_t dim(int degree) const;
  Matrix differential(int degree) const;
  // Degrees with a nonzero space, ascending.
  std::vector<int> support() const;
  std::size_t total_dim() const;

  bool squares_to_zero() const;

  Matrix cycles(int degree) const;
  Matrix boundaries(int degree) const;
  std::size_t homology_dim(int degree) const;
  // Cycles whose classes form a basis of H^degree.
  Matrix homology_representatives(int degree) const;
  // Nonzero homology dimensions only.
  std::map<int, std::size_t> homology_dims() const;

 private:
  FieldSpec field_;
  std::map<int, std::size_t> dims_;
  std::map<int, Matrix> diffs_;
};

// A map of complexes of some degree; block(p) sends C^p to D^{p+degree}.
struct GradedMap {
  int degree = 0;
  std::map<int, Matrix> blocks;

  // Zero block of the right shape when absent.
  Matrix block(const GradedComplex& source, const GradedComplex& target, int p) const;
};

bool is_chain_map(const GradedComplex& source, const GradedComplex& target,
                  const GradedMap& f);

GradedMap compose(const GradedComplex& a, const GradedComplex& b, const GradedComplex& c,
                  const GradedMap& g, const GradedMap& f);  // g after f

// Rank of H^p(source) -> H^{p+deg}(target).
std::size_t induced_rank(const GradedComplex& source, const GradedComplex& target,
                         const GradedMap& f, int p);

bool induces_iso(const GradedComplex& source, const GradedComplex& target,
                 const GradedMap& f, int p);

// Exactness of H(u) -> H(v) -> H(w) at H^p(v), given a: u -> v, b: v -> w.
struct ExactnessCheck {
  int degree = 0;
  std::size_t dim_middle = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  bool composite_zero = false;
  bool exact() const { return composite_zero && rank_in + rank_out == dim_middle; }
};

ExactnessCheck check_exact_at(const GradedComplex& u, const GradedComplex& v,
                              const GradedComplex& w, const GradedMap& a,
                              const GradedMap& b, int p);

}  // namespace dgforge
