#pragma once

// One-sided twisted complexes over the summands e_i A: the model of perfect
// objects. A cell (i, n) stands for Sigma^n e_i A; delta(t, s) is an element of
// e_{i_t} A e_{i_s} of degree 1 - n_s + n_t.
//
// Realization: the basis element sigma^{n_s} b (b in e_{i_s} A) has degree
// |b| - n_s, and
//   d(sigma^{n_s} b) = (-1)^{n_s} sigma^{n_s} db + sum_t sigma^{n_t} delta(t, s) b.
// d^2 = 0 becomes the Maurer-Cartan equation
//   (-1)^{n_t} d(delta(t, s)) + sum_u delta(t, u) delta(u, s) = 0.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dgforge/algebra.hpp"
#include "dgforge/complex.hpp"
#include "dgforge/module.hpp"

namespace dgforge {

struct Cell {
  int idempotent = 0;
  int shift = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Matrix of algebra elements; entry (t, s) goes from cell s to cell t.
class CellMatrix {
 public:
  CellMatrix() = default;
  CellMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const SparseVec& at(int t, int s) const { return data_[std::size_t(t) * cols_ + s]; }
  SparseVec& at(int t, int s) { return data_[std::size_t(t) * cols_ + s]; }
  void add(int t, int s, const SparseVec& v, const Scalar& c) { axpy(at(t, s), c, v); }
  bool is_zero() const;
  CellMatrix scaled(const Scalar& c) const;
  CellMatrix operator+(const CellMatrix& other) const;
  CellMatrix operator-(const CellMatrix& other) const;
  friend bool operator==(const CellMatrix&, const CellMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<SparseVec> data_;
};

// a after b: (a b)(u, s) = sum_t a(u, t) b(t, s).
CellMatrix multiply(const DgAlgebra& algebra, const CellMatrix& a, const CellMatrix& b);

class TwistedComplex {
 public:
  TwistedComplex(AlgebraPtr algebra, std::vector<Cell> cells, CellMatrix delta);

  static TwistedComplex empty(AlgebraPtr algebra);
  static TwistedComplex cell(AlgebraPtr algebra, int idempotent, int shift = 0);

  const AlgebraPtr& algebra() const { return algebra_; }
  FieldSpec field() const { return algebra_->field(); }
  int size() const { return static_cast<int>(cells_.size()); }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(int s) const { return cells_[s]; }
  const CellMatrix& delta() const { return delta_; }

  const std::vector<std::string>& violations() const { return violations_; }
  bool is_valid() const { return violations_.empty(); }
  void require_valid() const;

  // Expected degree of a delta entry or of a Hom^p entry (t, s).
  int entry_degree(int t, int s) const { return 1 - cells_[s].shift + cells_[t].shift; }
  // Cells in an order making delta strictly lower triangular (sources first).
  std::vector<int> topological_order() const;

  friend bool operator==(const TwistedComplex& a, const TwistedComplex& b) {
    return a.cells_ == b.cells_ && a.delta_ == b.delta_;
  }

 private:
  void validate();

  AlgebraPtr algebra_;
  std::vector<Cell> cells_;
  CellMatrix delta_;
  std::vector<std::string> violations_;
};

// Identity of a twisted complex as a cell matrix.
CellMatrix identity_map(const TwistedComplex& x);

DgModule realize(const TwistedComplex& x);
// Realized basis index of sigma^{n_s} b for cell s and algebra basis element b.
int realized_index(const TwistedComplex& x, int s, int b);
// (cell, algebra basis element) for every realized basis index.
std::vector<std::pair<int, int>> realized_layout(const TwistedComplex& x);
// A degree-p map of twisted complexes as a module map between realizations.
ModuleMap realize_map(const CellMatrix& f, int degree, const TwistedComplex& x,
                      const TwistedComplex& y, const ModulePtr& rx, const ModulePtr& ry);

// D(f)(t, s) = (-1)^{n_t} d f(t, s) + (delta_Y f)(t, s) - (-1)^p (f delta_X)(t, s).
CellMatrix tw_differential(const TwistedComplex& x, const TwistedComplex& y,
                           const CellMatrix& f, int p);

struct HomEntry {
  int target;   // cell of y
  int source;   // cell of x
  int element;  // algebra basis element
};

// The Hom complex Hom(x, y); its H^p is Hom(x, Sigma^p y) in the derived category.
class TwHom {
 public:
  TwHom(const TwistedComplex& x, const TwistedComplex& y);

  const GradedComplex& complex() const { return complex_; }
  std::size_t homology_dim(int p) const { return complex_.homology_dim(p); }
  const std::vector<HomEntry>& basis(int p) const;
  CellMatrix to_cells(int p, const Matrix& column, std::size_t col = 0) const;
  Matrix from_cells(int p, const CellMatrix& f) const;
  // Cycles representing a basis of H^p.
  std::vector<CellMatrix> homology_basis(int p) const;

 private:
  TwistedComplex x_, y_;
  std::map<int, std::vector<HomEntry>> basis_;
  std::map<int, std::map<std::tuple<int, int, int>, std::size_t>> position_;
  GradedComplex complex_;
};

// Hom(x, m) for a dg module m; an element of degree p assigns to each cell s
// an element m_s of (m e_{i_s}) of degree p - n_s, with
// D(m)_s = d m_s - (-1)^p sum_t m_t delta(t, s).
using ModuleCochain = std::vector<SparseVec>;

class ModuleHom {
 public:
  ModuleHom(const TwistedComplex& x, ModulePtr m);

  const GradedComplex& complex() const { return complex_; }
  std::size_t homology_dim(int p) const { return complex_.homology_dim(p); }
  // (cell, module basis element) pairs spanning Hom^p.
  const std::vector<std::pair<int, int>>& basis(int p) const;
  ModuleCochain to_cochain(int p, const Matrix& column, std::size_t col = 0) const;
  Matrix from_cochain(int p, const ModuleCochain& c) const;
  std::vector<ModuleCochain> homology_basis(int p) const;

 private:
  TwistedComplex x_;
  ModulePtr m_;
  std::map<int, std::vector<std::pair<int, int>>> basis_;
  std::map<int, std::map<std::pair<int, int>, std::size_t>> position_;
  GradedComplex complex_;
};

ModuleCochain module_differential(const TwistedComplex& x, const DgModule& m,
                                  const ModuleCochain& c, int p);
// The module map realize(x) -> m of a degree-p cochain.
ModuleMap realize_cochain(const TwistedComplex& x, const ModuleCochain& c, int p,
                          const ModulePtr& rx, const ModulePtr& m);
// c after g, for a degree-0 map g: x' -> x.
ModuleCochain pullback(const DgModule& m, const ModuleCochain& c, const CellMatrix& g);

// Sigma^n: shifts +n, delta scaled by (-1)^n.
TwistedComplex shift(const TwistedComplex& x, int n);
TwistedComplex direct_sum(const TwistedComplex& x, const TwistedComplex& y);

// Cone of a degree-0 cycle f: x -> y. Cells of x shifted by one, then cells of
// y; delta = [[-delta_x, 0], [f, delta_y]].
struct TwCone {
  TwistedComplex cone;
  CellMatrix inclusion;   // y -> cone
  CellMatrix projection;  // cone -> Sigma x
};
TwCone tw_cone(const TwistedComplex& x, const TwistedComplex& y, const CellMatrix& f);

// The full sub twisted complex on the listed cells (order kept).
TwistedComplex restrict_cells(const TwistedComplex& x, const std::vector<int>& cells);
// True when no delta entry leaves the set.
bool is_closed_subset(const TwistedComplex& x, const std::vector<int>& cells);

enum class EliminationOrder { First, Last };

struct MinimalizeCertificates {
  bool to_minimal_closed = false;    // D(F) = 0
  bool from_minimal_closed = false;  // D(G) = 0
  bool retraction = false;           // F G = id
  bool homotopy = false;             // id - G F = D(H)
  bool quasi_iso = false;            // realized F and G are quasi-isomorphisms
  bool all() const {
    return to_minimal_closed && from_minimal_closed && retraction && homotopy && quasi_iso;
  }
};

struct MinimalizeResult {
  TwistedComplex minimal;
  CellMatrix to_minimal;    // F: x -> minimal
  CellMatrix from_minimal;  // G: minimal -> x
  CellMatrix homotopy;      // H on x, degree -1
  std::vector<std::pair<int, int>> eliminated;  // (source, target) in input numbering
  MinimalizeCertificates certificates;
};

// Eliminates delta entries that are invertible multiples of an idempotent and
// are the only path between their two cells (other entries would close a cycle).
MinimalizeResult minimalize(const TwistedComplex& x,
                            EliminationOrder order = EliminationOrder::First,
                            bool certify = true);

bool is_minimal(const TwistedComplex& x);

struct ResolveResult {
  TwistedComplex resolution;
  ModuleCochain map;  // degree-0 cycle in Hom(resolution, m)
  bool complete = false;  // the fiber is acyclic
  HomologyTable cone_homology;
  // The map is an isomorphism on H^j for j < iso_below (absent when complete).
  std::optional<int> iso_below;
  // Homology window of the fiber (absent when acyclic).
  std::optional<std::pair<int, int>> fiber_window;
  int steps = 0;
};

// Attaches cells against the lowest surviving homology of the cone of the
// current map until the cone is acyclic or the cell budget is used up.
ResolveResult resolve(const ModulePtr& m, int cell_budget);

}  // namespace dgforge
