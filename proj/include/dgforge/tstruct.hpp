#pragma once

// The bounded t-structure on perfect objects of a class P algebra. On a
// minimal twisted complex every delta entry has positive degree, so cells only
// map to cells of equal or larger shift; the aisle t<=n is spanned by the cells
// of shift >= -n.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dgforge/module.hpp"
#include "dgforge/twisted.hpp"

namespace dgforge {

struct TTruncation {
  int level = 0;
  MinimalizeResult minimal;          // of the input
  std::vector<int> le_cells;         // shift >= -level, in minimal numbering
  std::vector<int> gt_cells;         // the rest
  TwistedComplex x_le;               // sub twisted complex
  TwistedComplex x_gt;               // quotient
  CellMatrix connecting;             // Sigma^{-1} x_gt -> x_le
  bool closed = false;               // le_cells closed under delta
  bool strict_triangle = false;      // cone(connecting) is the minimal form, cells reordered
  bool orthogonal = false;           // H^0 Hom(x_le, x_gt) = 0
  bool all() const { return closed && strict_triangle && orthogonal; }
};

TTruncation t_truncate(const TwistedComplex& x, int n);

enum class TMembership { Le, Ge, Both, Neither };  // t<=n, t>=n+1
std::string to_string(TMembership m);
TMembership t_membership(const TwistedComplex& x, int n = 0);
// Always true for twisted complexes; the witness is the range of minimal shifts.
struct Boundedness {
  bool bounded = true;
  std::optional<int> min_shift, max_shift;
};
Boundedness is_bounded(const TwistedComplex& x);

struct HeartObject {
  TwistedComplex object;
  std::vector<std::size_t> factors;  // composition multiplicity per idempotent
  int length() const;
};

// Shift-0 cells of the minimal form with the induced delta.
HeartObject h0_t(const TwistedComplex& x);
// h0_t(Sigma^n x).
HeartObject ht_n(const TwistedComplex& x, int n);

struct JordanHolder {
  std::vector<std::size_t> factors;
  std::vector<std::size_t> factors_other_order;
  bool stable = false;  // both elimination orders agree
};
// Error(Precondition) unless x lies in the heart.
JordanHolder jordan_holder(const TwistedComplex& x);

// F(x) = Hom(x, S_A) per simple summand: dims[p][j] = dim H^p Hom(x, e_j S_A).
struct FiberFunctorTable {
  HomologyTable dims;
  bool matches_cells = false;   // equals the cell count of the minimal form
  bool aisle_consistent = false;  // x in t<=0 iff F(x) sits in degrees >= 0
};
FiberFunctorTable koszul_fiber_functor(const TwistedComplex& x);

// Long exact sequence of F = Hom(-, e_j S_A) on the triangle x -> y -> cone -> Sigma x.
struct LesReport {
  TwCone triangle;
  // Heart multiplicities of h0_t(Sigma^n -) for x, y and the cone, by n.
  std::map<int, std::vector<std::size_t>> ht_x, ht_y, ht_cone;
  std::vector<ExactnessCheck> checks;
  bool exact() const;
};
LesReport les_check(const TwistedComplex& x, const TwistedComplex& y, const CellMatrix& f);

// The algebra H^0 End(x): dimension, radical via the trace form, locality.
struct EndomorphismReport {
  std::size_t dim = 0;
  std::size_t radical_dim = 0;
  bool radical_nilpotent = false;
  bool local = false;  // radical nilpotent of codimension one
};
EndomorphismReport endomorphism_report(const TwistedComplex& x);

enum class GenerationVerdict { Certified, Inconclusive };
std::string to_string(GenerationVerdict v);

struct SimpleMindedReport {
  // hom0[i][j] = dim H^0 Hom(S_i, S_j).
  std::vector<std::vector<std::size_t>> hom0;
  bool condition_a = false;
  // (i, j, t) with t < 0 and Hom(S_i, Sigma^t S_j) != 0.
  std::vector<std::tuple<int, int, int>> negative_extensions;
  bool condition_b = false;
  GenerationVerdict condition_c = GenerationVerdict::Inconclusive;
  std::vector<int> generated;  // idempotents whose summand was reached
  int objects_explored = 0;
};

// Conditions a) and b) are exact. For c) cones of H^0 basis maps between
// explored objects (family members shifted by t0..t1 to start with) are
// minimalized until every summand e_i A appears as a single cell or `budget`
// objects have been explored. Error(Precondition) on an empty family.
SimpleMindedReport check_simple_minded(const std::vector<TwistedComplex>& family, int t0, int t1,
                                       int budget);

}  // namespace dgforge
