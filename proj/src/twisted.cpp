#include "dgforge/twisted.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

SparseVec idempotent_vec(const DgAlgebra& alg, int i) {
  return unit_vec(alg.field(), alg.idempotents()[i]);
}

// Offsets of the cells inside the realization.
struct Layout {
  std::vector<int> offset;
  // position of an algebra basis element inside right_ideal_basis(target)
  std::vector<int> position;
  std::vector<std::pair<int, int>> decode;  // realized index -> (cell, element)

  explicit Layout(const TwistedComplex& x) {
    const auto& alg = *x.algebra();
    position.assign(alg.dim(), -1);
    for (int i = 0; i < alg.num_idempotents(); ++i) {
      const auto& ids = alg.right_ideal_basis(i);
      for (std::size_t k = 0; k < ids.size(); ++k) position[ids[k]] = static_cast<int>(k);
    }
    int n = 0;
    for (int s = 0; s < x.size(); ++s) {
      offset.push_back(n);
      for (int b : alg.right_ideal_basis(x.cell(s).idempotent)) decode.push_back({s, b});
      n += static_cast<int>(alg.right_ideal_basis(x.cell(s).idempotent).size());
    }
  }

  int index(int s, int b) const { return offset[s] + position[b]; }
};

void check_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a.get() != b.get() && (a->name() != b->name() || a->dim() != b->dim() ||
                             !(a->field() == b->field()))) {
    throw Error(ErrorKind::Precondition, "objects live over different algebras");
  }
}

}  // namespace

bool CellMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const SparseVec& v) { return v.empty(); });
}

CellMatrix CellMatrix::scaled(const Scalar& c) const {
  CellMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = dgforge::scaled(data_[k], c);
  return out;
}

CellMatrix CellMatrix::operator+(const CellMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "cell matrices of different shapes");
  }
  CellMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (other.data_[k].empty()) continue;
    axpy(out.data_[k], Scalar(FieldSpec::rationals(), 1), other.data_[k]);
  }
  return out;
}

CellMatrix CellMatrix::operator-(const CellMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "cell matrices of different shapes");
  }
  CellMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (other.data_[k].empty()) continue;
    axpy(out.data_[k], Scalar(FieldSpec::rationals(), -1), other.data_[k]);
  }
  return out;
}

CellMatrix multiply(const DgAlgebra& algebra, const CellMatrix& a, const CellMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "cell matrices not composable");
  CellMatrix out(a.rows(), b.cols());
  for (int u = 0; u < a.rows(); ++u)
    for (int t = 0; t < a.cols(); ++t) {
      const SparseVec& x = a.at(u, t);
      if (x.empty()) continue;
      for (int s = 0; s < b.cols(); ++s) {
        const SparseVec& y = b.at(t, s);
        if (y.empty()) continue;
        axpy(out.at(u, s), Scalar(algebra.field(), 1), algebra.multiply(x, y));
      }
    }
  return out;
}

TwistedComplex::TwistedComplex(AlgebraPtr algebra, std::vector<Cell> cells, CellMatrix delta)
    : algebra_(std::move(algebra)), cells_(std::move(cells)), delta_(std::move(delta)) {
  if (!algebra_) throw Error(ErrorKind::InvalidTwisted, "twisted complex without algebra");
  const int n = size();
  if (delta_.rows() == 0 && delta_.cols() == 0) delta_ = CellMatrix(n, n);
  if (delta_.rows() != n || delta_.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "delta must be a square matrix over the cells");
  }
  for (const auto& c : cells_) {
    if (c.idempotent < 0 || c.idempotent >= algebra_->num_idempotents()) {
      throw Error(ErrorKind::InvalidTwisted, "cell idempotent out of range");
    }
  }
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s)
      for (const auto& term : delta_.at(t, s))
        if (term.index < 0 || term.index >= algebra_->dim()) {
          throw Error(ErrorKind::InvalidTwisted, "delta refers to an unknown algebra element");
        }
  validate();
}

TwistedComplex TwistedComplex::empty(AlgebraPtr algebra) {
  return TwistedComplex(std::move(algebra), {}, CellMatrix());
}

TwistedComplex TwistedComplex::cell(AlgebraPtr algebra, int idempotent, int shift) {
  return TwistedComplex(std::move(algebra), {{idempotent, shift}}, CellMatrix(1, 1));
}

void TwistedComplex::require_valid() const {
  if (!is_valid()) {
    throw Error(ErrorKind::InvalidTwisted, "not a valid twisted complex: " + violations_.front());
  }
}

std::vector<int> TwistedComplex::topological_order() const {
  const int n = size();
  std::vector<int> indegree(n, 0);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s)
      if (!delta_.at(t, s).empty()) ++indegree[t];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int s = 0; s < n; ++s)
    if (indegree[s] == 0) ready.push(s);
  std::vector<int> order;
  while (!ready.empty()) {
    int s = ready.top();
    ready.pop();
    order.push_back(s);
    for (int t = 0; t < n; ++t)
      if (!delta_.at(t, s).empty() && --indegree[t] == 0) ready.push(t);
  }
  return order;
}

void TwistedComplex::validate() {
  const auto& alg = *algebra_;
  const int n = size();
  auto label = [](int s) { return "cell " + std::to_string(s); };
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) {
      for (const auto& term : delta_.at(t, s)) {
        const auto& b = alg.element(term.index);
        if (b.target != cells_[t].idempotent || b.source != cells_[s].idempotent ||
            b.degree != entry_degree(t, s)) {
          violations_.push_back("delta(" + label(t) + ", " + label(s) + ") must lie in e_" +
                                std::to_string(cells_[t].idempotent) + " A e_" +
                                std::to_string(cells_[s].idempotent) + " in degree " +
                                std::to_string(entry_degree(t, s)));
          break;
        }
      }
    }
  if (static_cast<int>(topological_order().size()) != n) {
    violations_.push_back("delta is not strictly triangular (its support has a cycle)");
  }
  if (!violations_.empty()) return;
  CellMatrix sq = multiply(alg, delta_, delta_);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) {
      SparseVec v = sq.at(t, s);
      axpy(v, sign_scalar(alg.field(), cells_[t].shift), alg.apply_differential(delta_.at(t, s)));
      if (!v.empty()) {
        violations_.push_back("Maurer-Cartan equation fails at (" + label(t) + ", " + label(s) + ")");
      }
    }
}

CellMatrix identity_map(const TwistedComplex& x) {
  CellMatrix id(x.size(), x.size());
  for (int s = 0; s < x.size(); ++s) id.at(s, s) = idempotent_vec(*x.algebra(), x.cell(s).idempotent);
  return id;
}

DgModule realize(const TwistedComplex& x) {
  x.require_valid();
  const auto& alg = *x.algebra();
  const FieldSpec k = alg.field();
  Layout layout(x);
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  for (std::size_t idx = 0; idx < layout.decode.size(); ++idx) {
    const auto [s, b] = layout.decode[idx];
    const auto& e = alg.element(b);
    basis.push_back({"c" + std::to_string(s) + ":" + e.name, e.degree - x.cell(s).shift, e.source});
    SparseBuilder d;
    const Scalar sign = sign_scalar(k, x.cell(s).shift);
    for (const auto& t : alg.differential(b)) d.add(layout.index(s, t.index), sign * t.coef);
    for (int t = 0; t < x.size(); ++t) {
      const SparseVec& entry = x.delta().at(t, s);
      if (entry.empty()) continue;
      for (const auto& term : alg.multiply(entry, unit_vec(k, b))) {
        d.add(layout.index(t, term.index), term.coef);
      }
    }
    diff.push_back(d.take());
    for (int a = 0; a < alg.dim(); ++a) {
      const SparseVec& p = alg.product(b, a);
      if (p.empty()) continue;
      SparseVec v;
      for (const auto& term : p) v.push_back({layout.index(s, term.index), term.coef});
      std::sort(v.begin(), v.end(), [](const Term& l, const Term& r) { return l.index < r.index; });
      action.push_back({static_cast<int>(idx), a, std::move(v)});
    }
  }
  DgModule out(x.algebra(), std::move(basis), std::move(diff), action);
  if (!out.is_valid()) {
    throw Error(ErrorKind::Internal, "realization is not a dg module: " + out.violations().front());
  }
  return out;
}

int realized_index(const TwistedComplex& x, int s, int b) { return Layout(x).index(s, b); }

std::vector<std::pair<int, int>> realized_layout(const TwistedComplex& x) { return Layout(x).decode; }

ModuleMap realize_map(const CellMatrix& f, int degree, const TwistedComplex& x,
                      const TwistedComplex& y, const ModulePtr& rx, const ModulePtr& ry) {
  const auto& alg = *x.algebra();
  Layout lx(x), ly(y);
  Matrix m(alg.field(), ry->dim(), rx->dim());
  for (std::size_t idx = 0; idx < lx.decode.size(); ++idx) {
    const auto [s, b] = lx.decode[idx];
    for (int t = 0; t < y.size(); ++t) {
      const SparseVec& entry = f.at(t, s);
      if (entry.empty()) continue;
      for (const auto& term : alg.multiply(entry, unit_vec(alg.field(), b))) {
        m(ly.index(t, term.index), idx) += term.coef;
      }
    }
  }
  return {rx, ry, degree, std::move(m)};
}

CellMatrix tw_differential(const TwistedComplex& x, const TwistedComplex& y,
                           const CellMatrix& f, int p) {
  const auto& alg = *x.algebra();
  const FieldSpec k = alg.field();
  CellMatrix out = multiply(alg, y.delta(), f);
  CellMatrix right = multiply(alg, f, x.delta());
  const Scalar minus_sign = -sign_scalar(k, p);
  for (int t = 0; t < y.size(); ++t) {
    const Scalar st = sign_scalar(k, y.cell(t).shift);
    for (int s = 0; s < x.size(); ++s) {
      axpy(out.at(t, s), st, alg.apply_differential(f.at(t, s)));
      axpy(out.at(t, s), minus_sign, right.at(t, s));
    }
  }
  return out;
}

TwHom::TwHom(const TwistedComplex& x, const TwistedComplex& y)
    : x_(x), y_(y), complex_(x.field()) {
  check_same_algebra(x.algebra(), y.algebra());
  const auto& alg = *x.algebra();
  const FieldSpec k = alg.field();
  for (int t = 0; t < y.size(); ++t)
    for (int s = 0; s < x.size(); ++s)
      for (int c = 0; c < alg.dim(); ++c) {
        const auto& e = alg.element(c);
        if (e.target != y.cell(t).idempotent || e.source != x.cell(s).idempotent) continue;
        const int p = e.degree + x.cell(s).shift - y.cell(t).shift;
        position_[p][{t, s, c}] = basis_[p].size();
        basis_[p].push_back({t, s, c});
      }
  for (const auto& [p, b] : basis_) complex_.set_dim(p, b.size());
  for (const auto& [p, b] : basis_) {
    auto next = basis_.find(p + 1);
    if (next == basis_.end()) continue;
    Matrix d(k, next->second.size(), b.size());
    const Scalar minus_sign = -sign_scalar(k, p);
    const auto& pos = position_.at(p + 1);
    for (std::size_t col = 0; col < b.size(); ++col) {
      const auto [t, s, c] = b[col];
      const SparseVec unit = unit_vec(k, c);
      auto put = [&](int tt, int ss, const SparseVec& v, const Scalar& coef) {
        for (const auto& term : v) d(pos.at({tt, ss, term.index}), col) += coef * term.coef;
      };
      put(t, s, alg.differential(c), sign_scalar(k, y.cell(t).shift));
      for (int u = 0; u < y.size(); ++u) {
        const SparseVec& dy = y.delta().at(u, t);
        if (!dy.empty()) put(u, s, alg.multiply(dy, unit), Scalar(k, 1));
      }
      for (int v = 0; v < x.size(); ++v) {
        const SparseVec& dx = x.delta().at(s, v);
        if (!dx.empty()) put(t, v, alg.multiply(unit, dx), minus_sign);
      }
    }
    complex_.set_differential(p, std::move(d));
  }
}

const std::vector<HomEntry>& TwHom::basis(int p) const {
  static const std::vector<HomEntry> none;
  auto it = basis_.find(p);
  return it == basis_.end() ? none : it->second;
}

CellMatrix TwHom::to_cells(int p, const Matrix& column, std::size_t col) const {
  CellMatrix f(y_.size(), x_.size());
  const auto& b = basis(p);
  for (std::size_t r = 0; r < b.size(); ++r) {
    if (column(r, col).is_zero()) continue;
    f.add(b[r].target, b[r].source, unit_vec(x_.field(), b[r].element), column(r, col));
  }
  return f;
}

Matrix TwHom::from_cells(int p, const CellMatrix& f) const {
  const auto& b = basis(p);
  Matrix v(x_.field(), b.size(), 1);
  auto it = position_.find(p);
  for (int t = 0; t < f.rows(); ++t)
    for (int s = 0; s < f.cols(); ++s)
      for (const auto& term : f.at(t, s)) {
        if (it == position_.end() || !it->second.count({t, s, term.index})) {
          throw Error(ErrorKind::Precondition, "map entry outside Hom^" + std::to_string(p));
        }
        v(it->second.at({t, s, term.index}), 0) = term.coef;
      }
  return v;
}

std::vector<CellMatrix> TwHom::homology_basis(int p) const {
  std::vector<CellMatrix> out;
  if (complex_.dim(p) == 0) return out;
  Matrix reps = complex_.homology_representatives(p);
  for (std::size_t c = 0; c < reps.cols(); ++c) out.push_back(to_cells(p, reps, c));
  return out;
}

ModuleHom::ModuleHom(const TwistedComplex& x, ModulePtr m)
    : x_(x), m_(std::move(m)), complex_(x.field()) {
  check_same_algebra(x.algebra(), m_->algebra());
  const FieldSpec k = x.field();
  for (int s = 0; s < x.size(); ++s)
    for (int e = 0; e < m_->dim(); ++e) {
      if (m_->element(e).idempotent != x.cell(s).idempotent) continue;
      const int p = m_->element(e).degree + x.cell(s).shift;
      position_[p][{s, e}] = basis_[p].size();
      basis_[p].push_back({s, e});
    }
  for (const auto& [p, b] : basis_) complex_.set_dim(p, b.size());
  for (const auto& [p, b] : basis_) {
    if (!basis_.count(p + 1)) continue;
    Matrix d(k, basis_.at(p + 1).size(), b.size());
    for (std::size_t col = 0; col < b.size(); ++col) {
      ModuleCochain c(x.size());
      c[b[col].first] = unit_vec(k, b[col].second);
      ModuleCochain dc = module_differential(x, *m_, c, p);
      Matrix v = from_cochain(p + 1, dc);
      for (std::size_t r = 0; r < v.rows(); ++r) d(r, col) = v(r, 0);
    }
    complex_.set_differential(p, std::move(d));
  }
}

const std::vector<std::pair<int, int>>& ModuleHom::basis(int p) const {
  static const std::vector<std::pair<int, int>> none;
  auto it = basis_.find(p);
  return it == basis_.end() ? none : it->second;
}

ModuleCochain ModuleHom::to_cochain(int p, const Matrix& column, std::size_t col) const {
  ModuleCochain c(x_.size());
  const auto& b = basis(p);
  for (std::size_t r = 0; r < b.size(); ++r) {
    if (column(r, col).is_zero()) continue;
    axpy(c[b[r].first], column(r, col), unit_vec(x_.field(), b[r].second));
  }
  return c;
}

Matrix ModuleHom::from_cochain(int p, const ModuleCochain& c) const {
  const auto& b = basis(p);
  Matrix v(x_.field(), b.size(), 1);
  auto it = position_.find(p);
  for (int s = 0; s < static_cast<int>(c.size()); ++s)
    for (const auto& term : c[s]) {
      if (it == position_.end() || !it->second.count({s, term.index})) {
        throw Error(ErrorKind::Precondition, "cochain entry outside Hom^" + std::to_string(p));
      }
      v(it->second.at({s, term.index}), 0) = term.coef;
    }
  return v;
}

std::vector<ModuleCochain> ModuleHom::homology_basis(int p) const {
  std::vector<ModuleCochain> out;
  if (complex_.dim(p) == 0) return out;
  Matrix reps = complex_.homology_representatives(p);
  for (std::size_t c = 0; c < reps.cols(); ++c) out.push_back(to_cochain(p, reps, c));
  return out;
}

ModuleCochain module_differential(const TwistedComplex& x, const DgModule& m,
                                  const ModuleCochain& c, int p) {
  const FieldSpec k = x.field();
  ModuleCochain out(x.size());
  const Scalar minus_sign = -sign_scalar(k, p);
  for (int s = 0; s < x.size(); ++s) {
    out[s] = m.apply_differential(c[s]);
    for (int t = 0; t < x.size(); ++t) {
      const SparseVec& entry = x.delta().at(t, s);
      if (entry.empty() || c[t].empty()) continue;
      axpy(out[s], minus_sign, m.act(c[t], entry));
    }
  }
  return out;
}

ModuleMap realize_cochain(const TwistedComplex& x, const ModuleCochain& c, int p,
                          const ModulePtr& rx, const ModulePtr& m) {
  Layout lx(x);
  const FieldSpec k = x.field();
  Matrix out(k, m->dim(), rx->dim());
  for (std::size_t idx = 0; idx < lx.decode.size(); ++idx) {
    const auto [s, b] = lx.decode[idx];
    for (const auto& term : m->act(c[s], unit_vec(k, b))) out(term.index, idx) = term.coef;
  }
  return {rx, m, p, std::move(out)};
}

ModuleCochain pullback(const DgModule& m, const ModuleCochain& c, const CellMatrix& g) {
  ModuleCochain out(g.cols());
  const FieldSpec k = m.field();
  for (int s2 = 0; s2 < g.cols(); ++s2)
    for (int s = 0; s < g.rows(); ++s) {
      if (g.at(s, s2).empty() || c[s].empty()) continue;
      axpy(out[s2], Scalar(k, 1), m.act(c[s], g.at(s, s2)));
    }
  return out;
}

TwistedComplex shift(const TwistedComplex& x, int n) {
  std::vector<Cell> cells = x.cells();
  for (auto& c : cells) c.shift += n;
  return TwistedComplex(x.algebra(), std::move(cells), x.delta().scaled(sign_scalar(x.field(), n)));
}

TwistedComplex direct_sum(const TwistedComplex& x, const TwistedComplex& y) {
  check_same_algebra(x.algebra(), y.algebra());
  std::vector<Cell> cells = x.cells();
  cells.insert(cells.end(), y.cells().begin(), y.cells().end());
  const int a = x.size();
  CellMatrix delta(a + y.size(), a + y.size());
  for (int t = 0; t < a; ++t)
    for (int s = 0; s < a; ++s) delta.at(t, s) = x.delta().at(t, s);
  for (int t = 0; t < y.size(); ++t)
    for (int s = 0; s < y.size(); ++s) delta.at(a + t, a + s) = y.delta().at(t, s);
  return TwistedComplex(x.algebra(), std::move(cells), std::move(delta));
}

TwCone tw_cone(const TwistedComplex& x, const TwistedComplex& y, const CellMatrix& f) {
  check_same_algebra(x.algebra(), y.algebra());
  if (f.rows() != y.size() || f.cols() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "cone map has the wrong shape");
  }
  TwHom hom(x, y);
  hom.from_cells(0, f);  // degree check
  if (!tw_differential(x, y, f, 0).is_zero()) {
    throw Error(ErrorKind::Precondition, "cone map is not a cycle");
  }
  const auto& alg = *x.algebra();
  const int a = x.size();
  std::vector<Cell> cells;
  for (auto c : x.cells()) cells.push_back({c.idempotent, c.shift + 1});
  cells.insert(cells.end(), y.cells().begin(), y.cells().end());
  const int n = static_cast<int>(cells.size());
  CellMatrix delta(n, n);
  const Scalar minus_one(alg.field(), -1);
  for (int t = 0; t < a; ++t)
    for (int s = 0; s < a; ++s) delta.at(t, s) = scaled(x.delta().at(t, s), minus_one);
  for (int t = 0; t < y.size(); ++t) {
    for (int s = 0; s < a; ++s) delta.at(a + t, s) = f.at(t, s);
    for (int s = 0; s < y.size(); ++s) delta.at(a + t, a + s) = y.delta().at(t, s);
  }
  TwistedComplex cone(x.algebra(), std::move(cells), std::move(delta));
  if (!cone.is_valid()) throw Error(ErrorKind::Internal, "cone is not a twisted complex");
  CellMatrix incl(n, y.size());
  for (int t = 0; t < y.size(); ++t) incl.at(a + t, t) = idempotent_vec(alg, y.cell(t).idempotent);
  CellMatrix proj(a, n);
  for (int s = 0; s < a; ++s) proj.at(s, s) = idempotent_vec(alg, x.cell(s).idempotent);
  return {std::move(cone), std::move(incl), std::move(proj)};
}

TwistedComplex restrict_cells(const TwistedComplex& x, const std::vector<int>& cells) {
  std::vector<Cell> out_cells;
  const int n = static_cast<int>(cells.size());
  CellMatrix delta(n, n);
  for (int a = 0; a < n; ++a) {
    out_cells.push_back(x.cell(cells[a]));
    for (int b = 0; b < n; ++b) delta.at(a, b) = x.delta().at(cells[a], cells[b]);
  }
  return TwistedComplex(x.algebra(), std::move(out_cells), std::move(delta));
}

bool is_closed_subset(const TwistedComplex& x, const std::vector<int>& cells) {
  std::set<int> in(cells.begin(), cells.end());
  for (int s : cells)
    for (int t = 0; t < x.size(); ++t)
      if (!in.count(t) && !x.delta().at(t, s).empty()) return false;
  return true;
}

namespace {

// A delta entry that is an invertible multiple of an idempotent.
std::optional<Scalar> scalar_entry(const TwistedComplex& x, int t, int s) {
  const SparseVec& v = x.delta().at(t, s);
  if (v.size() != 1) return std::nullopt;
  const auto& alg = *x.algebra();
  if (v.front().index != alg.idempotents()[x.cell(s).idempotent]) return std::nullopt;
  return v.front().coef;
}

// A path s -> w -> ... -> t of length at least two. Eliminating (s, t) would
// then create an entry closing a cycle.
bool has_detour(const TwistedComplex& x, int s, int t) {
  const int n = x.size();
  std::vector<bool> seen(n, false);
  std::vector<int> stack;
  for (int w = 0; w < n; ++w)
    if (w != t && !x.delta().at(w, s).empty()) {
      seen[w] = true;
      stack.push_back(w);
    }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (x.delta().at(v, u).empty() || seen[v]) continue;
      if (v == t) return true;
      seen[v] = true;
      stack.push_back(v);
    }
  }
  return false;
}

// Over class P algebras a detour always contains a scalar entry of its own, so
// some scalar entry is free of detours whenever one exists.
std::optional<std::pair<int, int>> pick_entry(const TwistedComplex& x, EliminationOrder order,
                                              bool safe_only) {
  const int n = x.size();
  for (int k = 0; k < n; ++k) {
    const int s = order == EliminationOrder::First ? k : n - 1 - k;
    for (int j = 0; j < n; ++j) {
      const int t = order == EliminationOrder::First ? j : n - 1 - j;
      if (scalar_entry(x, t, s) && !(safe_only && has_detour(x, s, t))) return std::make_pair(s, t);
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_minimal(const TwistedComplex& x) { return !pick_entry(x, EliminationOrder::First, false); }

MinimalizeResult minimalize(const TwistedComplex& x, EliminationOrder order, bool certify) {
  x.require_valid();
  const auto& alg = *x.algebra();
  TwistedComplex cur = x;
  CellMatrix f = identity_map(x);  // x -> cur
  CellMatrix g = identity_map(x);  // cur -> x
  CellMatrix h(x.size(), x.size());
  std::vector<int> original(x.size());
  for (int s = 0; s < x.size(); ++s) original[s] = s;
  std::vector<std::pair<int, int>> eliminated;

  while (auto entry = pick_entry(cur, order, true)) {
    const auto [s, t] = *entry;
    const Scalar inv = scalar_entry(cur, t, s)->inverse();
    const Scalar minus_inv = -inv;
    eliminated.push_back({original[s], original[t]});
    std::vector<int> rest;
    for (int u = 0; u < cur.size(); ++u)
      if (u != s && u != t) rest.push_back(u);
    const int r = static_cast<int>(rest.size());
    const CellMatrix& d = cur.delta();

    std::vector<Cell> cells;
    CellMatrix delta(r, r);
    for (int a = 0; a < r; ++a) {
      cells.push_back(cur.cell(rest[a]));
      for (int b = 0; b < r; ++b) {
        SparseVec v = d.at(rest[a], rest[b]);
        const SparseVec& left = d.at(rest[a], s);
        const SparseVec& right = d.at(t, rest[b]);
        if (!left.empty() && !right.empty()) axpy(v, minus_inv, alg.multiply(left, right));
        delta.at(a, b) = std::move(v);
      }
    }
    TwistedComplex next(x.algebra(), std::move(cells), std::move(delta));
    if (!next.is_valid()) {
      throw Error(ErrorKind::Internal, "elimination broke the twisted complex: " + next.violations().front());
    }
    CellMatrix f1(r, cur.size());
    CellMatrix g1(cur.size(), r);
    for (int a = 0; a < r; ++a) {
      const SparseVec e = idempotent_vec(alg, cur.cell(rest[a]).idempotent);
      f1.at(a, rest[a]) = e;
      g1.at(rest[a], a) = e;
      f1.at(a, t) = scaled(d.at(rest[a], s), minus_inv);
      g1.at(s, a) = scaled(d.at(t, rest[a]), minus_inv);
    }
    CellMatrix h1(cur.size(), cur.size());
    h1.at(s, t) = scaled(idempotent_vec(alg, cur.cell(s).idempotent), inv);
    h = h + multiply(alg, multiply(alg, g, h1), f);
    f = multiply(alg, f1, f);
    g = multiply(alg, g, g1);
    std::vector<int> next_original;
    for (int u : rest) next_original.push_back(original[u]);
    original = std::move(next_original);
    cur = std::move(next);
  }

  MinimalizeResult out{cur, f, g, h, std::move(eliminated), {}};
  if (certify) {
    auto& c = out.certificates;
    c.to_minimal_closed = tw_differential(x, cur, f, 0).is_zero();
    c.from_minimal_closed = tw_differential(cur, x, g, 0).is_zero();
    c.retraction = multiply(alg, f, g) == identity_map(cur);
    CellMatrix lhs = identity_map(x) - multiply(alg, g, f);
    c.homotopy = (lhs - tw_differential(x, x, h, -1)).is_zero();
    ModulePtr rx = share(realize(x));
    ModulePtr rm = share(realize(cur));
    c.quasi_iso = is_quasi_iso(realize_map(f, 0, x, cur, rx, rm)) &&
                  is_quasi_iso(realize_map(g, 0, cur, x, rm, rx));
  }
  return out;
}

ResolveResult resolve(const ModulePtr& m, int cell_budget) {
  const auto& alg = *m->algebra();
  alg.require_class_p("resolve");
  m->require_valid();
  if (cell_budget < 1) throw Error(ErrorKind::Precondition, "cell budget must be at least 1");
  TwistedComplex p = TwistedComplex::empty(m->algebra());
  ModuleCochain pi;
  ResolveResult out{p, pi, false, {}, std::nullopt, std::nullopt, 0};
  while (true) {
    ModulePtr rp = share(realize(p));
    ModuleMap map = realize_cochain(p, pi, 0, rp, m);
    ConeResult c = cone(map);
    HomologyTable h = homology(*c.cone);
    out.resolution = p;
    out.map = pi;
    out.cone_homology = h;
    if (h.empty()) {
      out.complete = true;
      break;
    }
    const int q = *h.bottom();
    out.iso_below = q;
    out.fiber_window = std::make_pair(q + 1, *h.top() + 1);
    if (p.size() >= cell_budget) break;

    Layout layout(p);
    const int offset = rp->dim();
    std::vector<Cell> cells = p.cells();
    std::vector<std::pair<int, SparseVec>> new_columns;  // (idempotent, realized cocycle)
    for (int i = 0; i < alg.num_idempotents(); ++i) {
      if (h.at(q, i) == 0) continue;
      auto block = c.cone->indices_in_block(q, i);
      Matrix reps = c.cone->complex(i).homology_representatives(q);
      for (std::size_t col = 0; col < reps.cols(); ++col) {
        SparseVec z;
        for (std::size_t r = 0; r < block.size(); ++r)
          if (!reps(r, col).is_zero()) z.push_back({static_cast<int>(block[r]), reps(r, col)});
        new_columns.push_back({i, std::move(z)});
      }
    }
    const int room = cell_budget - p.size();
    if (static_cast<int>(new_columns.size()) > room) new_columns.resize(room);
    const int old = p.size();
    const int n = old + static_cast<int>(new_columns.size());
    CellMatrix delta(n, n);
    for (int t = 0; t < old; ++t)
      for (int s = 0; s < old; ++s) delta.at(t, s) = p.delta().at(t, s);
    ModuleCochain next_pi = pi;
    for (std::size_t j = 0; j < new_columns.size(); ++j) {
      const auto& [i, z] = new_columns[j];
      const int s = old + static_cast<int>(j);
      cells.push_back({i, -q});
      SparseVec y;
      for (const auto& term : z) {
        if (term.index < offset) {
          const auto [t, b] = layout.decode[term.index];
          delta.at(t, s).push_back({b, term.coef});
        } else {
          y.push_back({term.index - offset, -term.coef});
        }
      }
      for (int t = 0; t < old; ++t) {
        auto& v = delta.at(t, s);
        std::sort(v.begin(), v.end(), [](const Term& l, const Term& r) { return l.index < r.index; });
      }
      next_pi.push_back(std::move(y));
    }
    p = TwistedComplex(m->algebra(), std::move(cells), std::move(delta));
    if (!p.is_valid()) throw Error(ErrorKind::Internal, "attached cells break Maurer-Cartan");
    pi = std::move(next_pi);
    ++out.steps;
  }
  if (out.complete) {
    out.iso_below.reset();
    out.fiber_window.reset();
  }
  return out;
}

}  // namespace dgforge
