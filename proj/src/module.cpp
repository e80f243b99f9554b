#include "dgforge/module.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

void uniquify(std::vector<ModuleBasisElement>& basis) {
  std::set<std::string> seen;
  for (auto& b : basis) {
    if (seen.insert(b.name).second) continue;
    for (int k = 2;; ++k) {
      std::string candidate = b.name + "#" + std::to_string(k);
      if (seen.insert(candidate).second) {
        b.name = candidate;
        break;
      }
    }
  }
}

SparseVec column_sparse(const Matrix& m, std::size_t c) {
  SparseVec out;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m(r, c).is_zero()) out.push_back({static_cast<int>(r), m(r, c)});
  return out;
}

SparseVec apply_matrix(const Matrix& m, const SparseVec& x) {
  SparseBuilder out;
  for (const auto& t : x) out.add(column_sparse(m, t.index), t.coef);
  return out.take();
}

using BlockKey = std::pair<int, int>;  // (degree, idempotent)

std::optional<BlockKey> block_of(const DgModule& x, const SparseVec& v) {
  if (v.empty()) return std::nullopt;
  const auto& e = x.element(v.front().index);
  for (const auto& t : v) {
    const auto& f = x.element(t.index);
    if (f.degree != e.degree || f.idempotent != e.idempotent) return std::nullopt;
  }
  return BlockKey{e.degree, e.idempotent};
}

// Splits x = span(V) (+) span(unit vectors at complement coordinates), block
// by block, and decomposes vectors accordingly.
class Splitting {
 public:
  Splitting(const DgModule& x, const Matrix& span) : field_(x.field()) {
    std::map<BlockKey, std::vector<std::size_t>> cols_by_block;
    for (std::size_t c = 0; c < span.cols(); ++c) {
      SparseVec v = column_sparse(span, c);
      auto key = block_of(x, v);
      if (!key) {
        throw Error(ErrorKind::Precondition,
                    "spanning vectors must be nonzero and homogeneous in degree and idempotent");
      }
      cols_by_block[*key].push_back(c);
      sub_vectors_.push_back(std::move(v));
    }
    for (int p : x.degrees()) {
      for (int i = 0; i < x.algebra()->num_idempotents(); ++i) {
        auto idx = x.indices_in_block(p, i);
        if (idx.empty()) continue;
        Block b;
        b.ambient = idx;
        for (std::size_t k = 0; k < idx.size(); ++k) local_[idx[k]] = {BlockKey{p, i}, k};
        Matrix v(field_, idx.size(), 0);
        auto it = cols_by_block.find({p, i});
        if (it != cols_by_block.end()) {
          b.sub_ids.assign(it->second.begin(), it->second.end());
          v = span.select_rows(idx).select_columns(it->second);
          if (rank(v) != it->second.size()) {
            throw Error(ErrorKind::Precondition, "spanning vectors are linearly dependent");
          }
        }
        auto comp = complement_coordinates(v, idx.size());
        for (auto c : comp) {
          b.comp_ids.push_back(complement_.size());
          complement_.push_back(idx[c]);
        }
        Matrix full = Matrix::hstack(v, Matrix::unit_columns(field_, idx.size(), comp));
        b.inverse = *solve(full, Matrix::identity(field_, idx.size()));
        blocks_[{p, i}] = std::move(b);
      }
    }
    for (auto& [key, cols] : cols_by_block) {
      if (!blocks_.count(key)) throw Error(ErrorKind::Internal, "block without basis");
    }
  }

  // Coordinates of w in (sub basis, complement basis).
  std::pair<SparseVec, SparseVec> decompose(const SparseVec& w) const {
    std::map<BlockKey, std::vector<std::pair<std::size_t, Scalar>>> by_block;
    for (const auto& t : w) {
      const auto& [key, k] = local_.at(t.index);
      by_block[key].push_back({k, t.coef});
    }
    SparseBuilder sub, comp;
    for (const auto& [key, entries] : by_block) {
      const Block& b = blocks_.at(key);
      const std::size_t n = b.ambient.size();
      for (std::size_t r = 0; r < n; ++r) {
        Scalar acc;
        for (const auto& [k, c] : entries) acc += b.inverse(r, k) * c;
        if (acc.is_zero()) continue;
        if (r < b.sub_ids.size()) {
          sub.add(static_cast<int>(b.sub_ids[r]), acc);
        } else {
          comp.add(static_cast<int>(b.comp_ids[r - b.sub_ids.size()]), acc);
        }
      }
    }
    return {sub.take(), comp.take()};
  }

  const std::vector<SparseVec>& sub_vectors() const { return sub_vectors_; }
  const std::vector<std::size_t>& complement() const { return complement_; }

 private:
  struct Block {
    std::vector<std::size_t> ambient;
    std::vector<std::size_t> sub_ids;
    std::vector<std::size_t> comp_ids;
    Matrix inverse;
  };
  FieldSpec field_;
  std::map<BlockKey, Block> blocks_;
  std::map<int, std::pair<BlockKey, std::size_t>> local_;
  std::vector<SparseVec> sub_vectors_;
  std::vector<std::size_t> complement_;
};

Matrix block_matrix(const FieldSpec& field, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols,
                    const std::vector<SparseVec>& columns) {
  Matrix out(field, rows.size(), cols.size());
  std::map<int, std::size_t> row_pos;
  for (std::size_t r = 0; r < rows.size(); ++r) row_pos[static_cast<int>(rows[r])] = r;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& t : columns[cols[c]]) {
      auto it = row_pos.find(t.index);
      if (it != row_pos.end()) out(it->second, c) = t.coef;
    }
  }
  return out;
}

}  // namespace

DgModule::DgModule(AlgebraPtr algebra, std::vector<ModuleBasisElement> basis,
                   std::vector<SparseVec> differential, const std::vector<ActionRule>& action)
    : algebra_(std::move(algebra)), basis_(std::move(basis)), diff_(std::move(differential)) {
  if (!algebra_) throw Error(ErrorKind::InvalidModule, "module without algebra");
  const int n = dim();
  const int na = algebra_->dim();
  const int r = algebra_->num_idempotents();
  if (diff_.empty()) diff_.assign(n, {});
  if (static_cast<int>(diff_.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "differential has the wrong number of columns");
  }
  for (const auto& b : basis_) {
    if (b.idempotent < 0 || b.idempotent >= r) {
      throw Error(ErrorKind::InvalidModule, "element '" + b.name + "' has an idempotent out of range");
    }
  }
  {
    std::set<std::string> names;
    for (const auto& b : basis_)
      if (!names.insert(b.name).second)
        throw Error(ErrorKind::InvalidModule, "duplicate basis name '" + b.name + "'");
  }
  auto check_vec = [n](const SparseVec& v) {
    for (const auto& t : v)
      if (t.index < 0 || t.index >= n)
        throw Error(ErrorKind::InvalidModule, "linear combination refers to an unknown basis element");
  };
  for (const auto& v : diff_) check_vec(v);

  action_.assign(static_cast<std::size_t>(n) * na, {});
  std::vector<bool> listed(action_.size(), false);
  for (const auto& rule : action) {
    if (rule.element < 0 || rule.element >= n || rule.algebra < 0 || rule.algebra >= na) {
      throw Error(ErrorKind::InvalidModule, "action refers to an unknown basis element");
    }
    check_vec(rule.value);
    std::size_t k = static_cast<std::size_t>(rule.element) * na + rule.algebra;
    if (listed[k]) {
      violations_.push_back("action " + basis_[rule.element].name + "*" +
                            algebra_->element(rule.algebra).name + " listed twice");
    }
    listed[k] = true;
    action_[k] = rule.value;
  }
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < r; ++i) {
      const int e = algebra_->idempotents()[i];
      std::size_t k = static_cast<std::size_t>(m) * na + e;
      SparseVec forced = basis_[m].idempotent == i ? unit_vec(field(), m) : SparseVec{};
      if (listed[k] && action_[k] != forced) {
        violations_.push_back("action " + basis_[m].name + "*" + algebra_->element(e).name +
                              " contradicts the idempotent data");
      }
      action_[k] = std::move(forced);
    }
  }
  validate();
}

DgModule DgModule::zero(AlgebraPtr algebra) { return DgModule(std::move(algebra), {}, {}, {}); }

int DgModule::index_of(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].name == name) return i;
  return -1;
}

SparseVec DgModule::act(const SparseVec& x, const SparseVec& a) const {
  SparseBuilder out;
  for (const auto& m : x)
    for (const auto& b : a) {
      const SparseVec& v = act(m.index, b.index);
      if (!v.empty()) out.add(v, m.coef * b.coef);
    }
  return out.take();
}

SparseVec DgModule::apply_differential(const SparseVec& x) const {
  SparseBuilder out;
  for (const auto& t : x) out.add(diff_[t.index], t.coef);
  return out.take();
}

void DgModule::require_valid() const {
  if (!is_valid()) {
    throw Error(ErrorKind::InvalidModule, "not a valid dg module: " + violations_.front());
  }
}

std::vector<std::size_t> DgModule::indices_in_degree(int p) const {
  std::vector<std::size_t> out;
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].degree == p) out.push_back(i);
  return out;
}

std::vector<std::size_t> DgModule::indices_in_block(int p, int idempotent) const {
  std::vector<std::size_t> out;
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].degree == p && basis_[i].idempotent == idempotent) out.push_back(i);
  return out;
}

std::vector<int> DgModule::degrees() const {
  std::set<int> s;
  for (const auto& b : basis_) s.insert(b.degree);
  return {s.begin(), s.end()};
}

std::optional<int> DgModule::min_degree() const {
  auto d = degrees();
  if (d.empty()) return std::nullopt;
  return d.front();
}

std::optional<int> DgModule::max_degree() const {
  auto d = degrees();
  if (d.empty()) return std::nullopt;
  return d.back();
}

GradedComplex DgModule::complex() const {
  GradedComplex c(field());
  for (int p : degrees()) c.set_dim(p, indices_in_degree(p).size());
  for (int p : degrees()) {
    if (c.dim(p + 1) == 0) continue;
    c.set_differential(p, differential_block(p));
  }
  return c;
}

GradedComplex DgModule::complex(int idempotent) const {
  GradedComplex c(field());
  for (int p : degrees()) c.set_dim(p, indices_in_block(p, idempotent).size());
  for (int p : degrees()) {
    auto cols = indices_in_block(p, idempotent);
    auto rows = indices_in_block(p + 1, idempotent);
    if (cols.empty() || rows.empty()) continue;
    c.set_differential(p, block_matrix(field(), rows, cols, diff_));
  }
  return c;
}

Matrix DgModule::differential_block(int p) const {
  return block_matrix(field(), indices_in_degree(p + 1), indices_in_degree(p), diff_);
}

std::vector<ActionRule> DgModule::listed_action() const {
  std::set<int> idem(algebra_->idempotents().begin(), algebra_->idempotents().end());
  std::vector<ActionRule> out;
  for (int m = 0; m < dim(); ++m)
    for (int a = 0; a < algebra_->dim(); ++a) {
      if (idem.count(a)) continue;
      if (!act(m, a).empty()) out.push_back({m, a, act(m, a)});
    }
  return out;
}

void DgModule::validate() {
  auto& v = violations_;
  const auto& alg = *algebra_;
  const int n = dim();
  const int na = alg.dim();
  for (int m = 0; m < n; ++m) {
    for (const auto& t : diff_[m]) {
      const auto& c = basis_[t.index];
      if (c.degree != basis_[m].degree + 1 || c.idempotent != basis_[m].idempotent) {
        v.push_back("d(" + basis_[m].name + ") is not of degree +1 at the same idempotent");
        break;
      }
    }
    if (!apply_differential(diff_[m]).empty()) v.push_back("d(d(" + basis_[m].name + ")) != 0");
  }
  for (int m = 0; m < n; ++m) {
    for (int a = 0; a < na; ++a) {
      const SparseVec& p = act(m, a);
      if (p.empty()) continue;
      const auto& ea = alg.element(a);
      if (basis_[m].idempotent != ea.target) {
        v.push_back("action " + basis_[m].name + "*" + ea.name + " must vanish");
        continue;
      }
      for (const auto& t : p) {
        const auto& c = basis_[t.index];
        if (c.degree != basis_[m].degree + ea.degree || c.idempotent != ea.source) {
          v.push_back("action " + basis_[m].name + "*" + ea.name + " is not homogeneous");
          break;
        }
      }
    }
  }
  if (!v.empty()) return;
  const FieldSpec k = field();
  for (int m = 0; m < n; ++m) {
    for (int a = 0; a < na; ++a) {
      if (alg.element(a).target != basis_[m].idempotent) continue;
      for (int b = 0; b < na; ++b) {
        if (alg.element(b).target != alg.element(a).source) continue;
        SparseVec lhs = act(act(m, a), unit_vec(k, b));
        SparseVec rhs = act(unit_vec(k, m), alg.product(a, b));
        if (lhs != rhs) {
          v.push_back("associativity fails on (" + basis_[m].name + ", " + alg.element(a).name +
                      ", " + alg.element(b).name + ")");
        }
      }
      // d(m a) = d(m) a + (-1)^{|m|} m d(a)
      SparseVec lhs = apply_differential(act(m, a));
      SparseVec rhs = act(diff_[m], unit_vec(k, a));
      axpy(rhs, sign_scalar(k, basis_[m].degree), act(unit_vec(k, m), alg.differential(a)));
      if (lhs != rhs) {
        v.push_back("Leibniz rule fails on (" + basis_[m].name + ", " + alg.element(a).name + ")");
      }
    }
  }
}

std::size_t HomologyTable::at(int degree, int idempotent) const {
  auto it = dims.find(degree);
  if (it == dims.end() || idempotent >= static_cast<int>(it->second.size())) return 0;
  return it->second[idempotent];
}

std::size_t HomologyTable::total(int degree) const {
  auto it = dims.find(degree);
  if (it == dims.end()) return 0;
  std::size_t n = 0;
  for (auto d : it->second) n += d;
  return n;
}

std::size_t HomologyTable::total() const {
  std::size_t n = 0;
  for (const auto& [p, v] : dims) n += total(p);
  return n;
}

std::optional<int> HomologyTable::bottom() const {
  if (dims.empty()) return std::nullopt;
  return dims.begin()->first;
}

std::optional<int> HomologyTable::top() const {
  if (dims.empty()) return std::nullopt;
  return dims.rbegin()->first;
}

HomologyTable homology(const DgModule& x) {
  HomologyTable out;
  const int r = x.algebra()->num_idempotents();
  std::vector<GradedComplex> blocks;
  for (int i = 0; i < r; ++i) blocks.push_back(x.complex(i));
  for (int p : x.degrees()) {
    std::vector<std::size_t> row(r, 0);
    bool any = false;
    for (int i = 0; i < r; ++i) {
      row[i] = blocks[i].homology_dim(p);
      any = any || row[i] > 0;
    }
    if (any) out.dims[p] = std::move(row);
  }
  return out;
}

ModuleMap ModuleMap::zero(ModulePtr source, ModulePtr target, int degree) {
  Matrix m(source->field(), target->dim(), source->dim());
  return {std::move(source), std::move(target), degree, std::move(m)};
}

ModuleMap ModuleMap::identity(ModulePtr module) {
  Matrix m = Matrix::identity(module->field(), module->dim());
  return {module, module, 0, std::move(m)};
}

bool ModuleMap::is_homogeneous() const {
  for (std::size_t t = 0; t < matrix.rows(); ++t)
    for (std::size_t s = 0; s < matrix.cols(); ++s) {
      if (matrix(t, s).is_zero()) continue;
      const auto& a = source->element(static_cast<int>(s));
      const auto& b = target->element(static_cast<int>(t));
      if (b.degree != a.degree + degree || b.idempotent != a.idempotent) return false;
    }
  return true;
}

bool ModuleMap::is_a_linear() const {
  const auto& alg = *source->algebra();
  for (int s = 0; s < source->dim(); ++s) {
    SparseVec fs = column_sparse(matrix, s);
    for (int a = 0; a < alg.dim(); ++a) {
      if (alg.element(a).target != source->element(s).idempotent) continue;
      SparseVec lhs = apply_matrix(matrix, source->act(s, a));
      SparseVec rhs = target->act(fs, unit_vec(source->field(), a));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

bool ModuleMap::is_chain_map() const {
  const Scalar sign = sign_scalar(source->field(), degree);
  for (int s = 0; s < source->dim(); ++s) {
    SparseVec lhs = target->apply_differential(column_sparse(matrix, s));
    SparseVec rhs = apply_matrix(matrix, source->differential(s));
    axpy(lhs, -sign, rhs);
    if (!lhs.empty()) return false;
  }
  return true;
}

GradedMap ModuleMap::graded() const {
  GradedMap out;
  out.degree = degree;
  for (int p : source->degrees()) {
    auto cols = source->indices_in_degree(p);
    auto rows = target->indices_in_degree(p + degree);
    if (rows.empty()) continue;
    Matrix b = matrix.select_rows(rows).select_columns(cols);
    if (!b.is_zero()) out.blocks[p] = std::move(b);
  }
  return out;
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (f.target->dim() != g.source->dim()) {
    throw Error(ErrorKind::DimensionMismatch, "maps are not composable");
  }
  return {f.source, g.target, f.degree + g.degree, g.matrix * f.matrix};
}

std::map<int, std::size_t> induced_ranks(const ModuleMap& f) {
  GradedComplex s = f.source->complex();
  GradedComplex t = f.target->complex();
  GradedMap g = f.graded();
  std::map<int, std::size_t> out;
  for (int p : s.support()) out[p] = induced_rank(s, t, g, p);
  return out;
}

bool is_quasi_iso(const ModuleMap& f) {
  if (!f.is_homogeneous() || !f.is_chain_map()) return false;
  GradedComplex s = f.source->complex();
  GradedComplex t = f.target->complex();
  GradedMap g = f.graded();
  std::set<int> degrees;
  for (int p : s.support()) degrees.insert(p);
  for (int q : t.support()) degrees.insert(q - f.degree);
  for (int p : degrees)
    if (!induces_iso(s, t, g, p)) return false;
  return true;
}

DgModule regular_module(const AlgebraPtr& algebra) {
  const auto& alg = *algebra;
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  for (int b = 0; b < alg.dim(); ++b) {
    basis.push_back({alg.element(b).name, alg.element(b).degree, alg.element(b).source});
    diff.push_back(alg.differential(b));
    for (int a = 0; a < alg.dim(); ++a)
      if (!alg.product(b, a).empty()) action.push_back({b, a, alg.product(b, a)});
  }
  return DgModule(algebra, std::move(basis), std::move(diff), action);
}

DgModule free_summand(const AlgebraPtr& algebra, int idempotent) {
  const auto& alg = *algebra;
  if (idempotent < 0 || idempotent >= alg.num_idempotents()) {
    throw Error(ErrorKind::Precondition, "idempotent index out of range");
  }
  const auto& ids = alg.right_ideal_basis(idempotent);
  std::map<int, int> pos;
  for (std::size_t k = 0; k < ids.size(); ++k) pos[ids[k]] = static_cast<int>(k);
  auto remap = [&](const SparseVec& v) {
    SparseVec out;
    for (const auto& t : v) out.push_back({pos.at(t.index), t.coef});
    return out;
  };
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const int b = ids[k];
    basis.push_back({alg.element(b).name, alg.element(b).degree, alg.element(b).source});
    diff.push_back(remap(alg.differential(b)));
    for (int a = 0; a < alg.dim(); ++a)
      if (!alg.product(b, a).empty())
        action.push_back({static_cast<int>(k), a, remap(alg.product(b, a))});
  }
  return DgModule(algebra, std::move(basis), std::move(diff), action);
}

DgModule shift(const DgModule& x, int p) {
  std::vector<ModuleBasisElement> basis = x.basis();
  for (auto& b : basis) b.degree -= p;
  std::vector<SparseVec> diff;
  const Scalar sign = sign_scalar(x.field(), p);
  for (int m = 0; m < x.dim(); ++m) diff.push_back(scaled(x.differential(m), sign));
  return DgModule(x.algebra(), std::move(basis), std::move(diff), x.listed_action());
}

DgModule direct_sum(const DgModule& x, const DgModule& y) {
  return direct_sum(std::vector<DgModule>{x, y}, x.algebra());
}

DgModule direct_sum(const std::vector<DgModule>& parts, const AlgebraPtr& algebra) {
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  int offset = 0;
  auto moved = [&offset](const SparseVec& v) {
    SparseVec out = v;
    for (auto& t : out) t.index += offset;
    return out;
  };
  for (const auto& part : parts) {
    if (part.algebra().get() != algebra.get() && part.algebra()->name() != algebra->name()) {
      throw Error(ErrorKind::Precondition, "direct sum of modules over different algebras");
    }
    for (int m = 0; m < part.dim(); ++m) {
      basis.push_back(part.element(m));
      diff.push_back(moved(part.differential(m)));
    }
    for (const auto& rule : part.listed_action())
      action.push_back({rule.element + offset, rule.algebra, moved(rule.value)});
    offset += part.dim();
  }
  uniquify(basis);
  return DgModule(algebra, std::move(basis), std::move(diff), action);
}

SubmoduleResult submodule(const ModulePtr& x, const Matrix& span) {
  Splitting split(*x, span);
  const auto& vecs = split.sub_vectors();
  const auto& alg = *x->algebra();
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  auto coords = [&](const SparseVec& w) {
    auto [sub, comp] = split.decompose(w);
    if (!comp.empty()) throw Error(ErrorKind::Precondition, "span is not closed under d and the action");
    return sub;
  };
  for (std::size_t j = 0; j < vecs.size(); ++j) {
    const auto& v = vecs[j];
    const auto& lead = x->element(v.front().index);
    std::string name = (v.size() == 1 && v.front().coef.is_one()) ? lead.name
                                                                  : "v" + std::to_string(j);
    basis.push_back({name, lead.degree, lead.idempotent});
    diff.push_back(coords(x->apply_differential(v)));
    for (int a = 0; a < alg.dim(); ++a) {
      if (alg.element(a).target != lead.idempotent) continue;
      SparseVec va = coords(x->act(v, unit_vec(x->field(), a)));
      if (!va.empty()) action.push_back({static_cast<int>(j), a, std::move(va)});
    }
  }
  uniquify(basis);
  ModulePtr sub = share(DgModule(x->algebra(), std::move(basis), std::move(diff), action));
  return {sub, ModuleMap{sub, x, 0, span}};
}

QuotientResult quotient(const ModulePtr& x, const Matrix& span) {
  // Closure of the span is checked by building it.
  submodule(x, span);
  Splitting split(*x, span);
  const auto& comp = split.complement();
  const auto& alg = *x->algebra();
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  auto coords = [&](const SparseVec& w) { return split.decompose(w).second; };
  for (std::size_t j = 0; j < comp.size(); ++j) {
    const int m = static_cast<int>(comp[j]);
    basis.push_back(x->element(m));
    diff.push_back(coords(x->differential(m)));
    for (int a = 0; a < alg.dim(); ++a) {
      if (alg.element(a).target != x->element(m).idempotent) continue;
      SparseVec va = coords(x->act(m, a));
      if (!va.empty()) action.push_back({static_cast<int>(j), a, std::move(va)});
    }
  }
  ModulePtr q = share(DgModule(x->algebra(), std::move(basis), std::move(diff), action));
  Matrix proj(x->field(), q->dim(), x->dim());
  for (int m = 0; m < x->dim(); ++m)
    for (const auto& t : coords(unit_vec(x->field(), m))) proj(t.index, m) = t.coef;
  return {q, ModuleMap{x, q, 0, std::move(proj)}};
}

bool ConeResult::les_exact() const {
  return std::all_of(les.begin(), les.end(), [](const ExactnessCheck& c) { return c.exact(); });
}

ConeResult cone(const ModuleMap& f) {
  if (f.degree != 0) throw Error(ErrorKind::Precondition, "cone needs a degree-0 map");
  if (!f.is_homogeneous() || !f.is_chain_map() || !f.is_a_linear()) {
    throw Error(ErrorKind::Precondition, "cone needs an A-linear chain map");
  }
  const DgModule& m = *f.source;
  const DgModule& n = *f.target;
  const int a = m.dim();
  std::vector<ModuleBasisElement> basis;
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  const Scalar minus_one(m.field(), -1);
  for (int i = 0; i < a; ++i) {
    ModuleBasisElement e = m.element(i);
    e.name = "s" + e.name;
    e.degree -= 1;
    basis.push_back(e);
    SparseVec d = scaled(m.differential(i), minus_one);
    for (const auto& t : column_sparse(f.matrix, i)) d.push_back({t.index + a, t.coef});
    diff.push_back(std::move(d));
  }
  for (int i = 0; i < n.dim(); ++i) {
    basis.push_back(n.element(i));
    SparseVec d = n.differential(i);
    for (auto& t : d) t.index += a;
    diff.push_back(std::move(d));
  }
  for (const auto& r : m.listed_action()) action.push_back(r);
  for (auto r : n.listed_action()) {
    r.element += a;
    for (auto& t : r.value) t.index += a;
    action.push_back(std::move(r));
  }
  uniquify(basis);
  ModulePtr c = share(DgModule(m.algebra(), std::move(basis), std::move(diff), action));

  Matrix incl(m.field(), c->dim(), n.dim());
  for (int i = 0; i < n.dim(); ++i) incl(a + i, i) = Scalar(m.field(), 1);
  ModulePtr sm = share(shift(m, 1));
  ModulePtr sn = share(shift(n, 1));
  Matrix proj(m.field(), a, c->dim());
  for (int i = 0; i < a; ++i) proj(i, i) = Scalar(m.field(), 1);

  ConeResult out{c, ModuleMap{f.target, c, 0, std::move(incl)},
                 ModuleMap{c, sm, 0, std::move(proj)}, {}};
  ModuleMap sf{sm, sn, 0, f.matrix};
  GradedComplex cm = m.complex(), cn = n.complex(), cc = c->complex(), csm = sm->complex(),
                csn = sn->complex();
  GradedMap gf = f.graded(), gi = out.inclusion.graded(), gp = out.projection.graded(),
            gsf = sf.graded();
  for (int p : cn.support()) out.les.push_back(check_exact_at(cm, cn, cc, gf, gi, p));
  for (int p : cc.support()) out.les.push_back(check_exact_at(cn, cc, csm, gi, gp, p));
  for (int p : csm.support()) out.les.push_back(check_exact_at(cc, csm, csn, gp, gsf, p));
  return out;
}

std::optional<ModuleMap> null_homotopy(const ModuleMap& f) {
  const DgModule& m = *f.source;
  const DgModule& n = *f.target;
  const auto& alg = *m.algebra();
  const FieldSpec k = m.field();
  const int hdeg = f.degree - 1;
  // Unknowns H(t, s) for compatible (t, s).
  std::map<std::pair<int, int>, int> unknown;
  std::vector<std::vector<int>> targets_of(m.dim());
  for (int s = 0; s < m.dim(); ++s)
    for (int t = 0; t < n.dim(); ++t)
      if (n.element(t).degree == m.element(s).degree + hdeg &&
          n.element(t).idempotent == m.element(s).idempotent) {
        unknown[{t, s}] = static_cast<int>(unknown.size());
        targets_of[s].push_back(t);
      }
  std::map<std::tuple<int, int, int>, SparseBuilder> eqs;
  std::map<std::tuple<int, int, int>, Scalar> rhs;
  // d H - (-1)^{deg H} H d = f, keyed (t, s, -1).
  const Scalar sign = sign_scalar(k, hdeg);
  for (int s = 0; s < m.dim(); ++s) {
    for (int u : targets_of[s])
      for (const auto& t : n.differential(u)) eqs[{t.index, s, -1}].add(unknown.at({u, s}), t.coef);
    for (const auto& du : m.differential(s))
      for (int t : targets_of[du.index])
        eqs[{t, s, -1}].add(unknown.at({t, du.index}), -sign * du.coef);
    for (const auto& t : column_sparse(f.matrix, s)) rhs[{t.index, s, -1}] = t.coef;
  }
  // H(s a) = H(s) a, keyed (u, s, a).
  std::set<int> idem(alg.idempotents().begin(), alg.idempotents().end());
  for (int s = 0; s < m.dim(); ++s) {
    for (int a = 0; a < alg.dim(); ++a) {
      if (idem.count(a) || alg.element(a).target != m.element(s).idempotent) continue;
      for (const auto& sa : m.act(s, a))
        for (int t : targets_of[sa.index]) eqs[{t, s, a}].add(unknown.at({t, sa.index}), sa.coef);
      for (int t : targets_of[s])
        for (const auto& ta : n.act(t, a)) eqs[{ta.index, s, a}].add(unknown.at({t, s}), -ta.coef);
    }
  }
  std::vector<SparseVec> rows;
  std::vector<Scalar> values;
  std::set<std::tuple<int, int, int>> keys;
  for (auto& [key, b] : eqs) keys.insert(key);
  for (auto& [key, v] : rhs) keys.insert(key);
  for (const auto& key : keys) {
    SparseVec row = eqs.count(key) ? eqs[key].take() : SparseVec{};
    Scalar value = rhs.count(key) ? rhs[key] : Scalar();
    if (row.empty() && value.is_zero()) continue;
    if (row.empty()) return std::nullopt;
    rows.push_back(std::move(row));
    values.push_back(value);
  }
  Matrix h(k, n.dim(), m.dim());
  if (!unknown.empty() && !rows.empty()) {
    Matrix a(k, rows.size(), unknown.size());
    Matrix b(k, rows.size(), 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& t : rows[r]) a(r, t.index) = t.coef;
      b(r, 0) = values[r];
    }
    auto x = solve(a, b);
    if (!x) return std::nullopt;
    for (const auto& [key, idx] : unknown) h(key.first, key.second) = (*x)(idx, 0);
  }
  ModuleMap out{f.source, f.target, hdeg, std::move(h)};
  return out;
}

std::vector<SummandReport> indecomposable_summands(const AlgebraPtr& algebra) {
  algebra->require_class_p("indecomposable_summands");
  const auto& alg = *algebra;
  std::vector<SummandReport> out;
  for (int i = 0; i < alg.num_idempotents(); ++i) {
    GradedComplex c(alg.field());
    std::set<int> degs;
    for (const auto& b : alg.basis())
      if (b.source == i && b.target == i) degs.insert(b.degree);
    for (int p : degs) c.set_dim(p, alg.block_basis(i, i, p).size());
    for (int p : degs) {
      const auto& cols = alg.block_basis(i, i, p);
      const auto& rows = alg.block_basis(i, i, p + 1);
      if (rows.empty()) continue;
      Matrix d(alg.field(), rows.size(), cols.size());
      for (std::size_t c2 = 0; c2 < cols.size(); ++c2)
        for (const auto& t : alg.differential(cols[c2])) {
          auto it = std::find(rows.begin(), rows.end(), t.index);
          d(it - rows.begin(), c2) = t.coef;
        }
      c.set_differential(p, std::move(d));
    }
    SummandReport r;
    r.idempotent = i;
    r.h0_end_dim = c.homology_dim(0);
    r.indecomposable = r.h0_end_dim == 1;
    out.push_back(r);
  }
  return out;
}

DgModule change_basis(const DgModule& x, const Matrix& g) {
  const FieldSpec k = x.field();
  if (g.rows() != static_cast<std::size_t>(x.dim()) || g.cols() != g.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "basis change must be square of module size");
  }
  auto inv = solve(g, Matrix::identity(k, g.rows()));
  if (!inv || !(g * *inv == Matrix::identity(k, g.rows()))) {
    throw Error(ErrorKind::Precondition, "basis change is not invertible");
  }
  std::vector<SparseVec> cols;
  std::vector<ModuleBasisElement> basis;
  for (int j = 0; j < x.dim(); ++j) {
    cols.push_back(column_sparse(g, j));
    auto key = block_of(x, cols.back());
    if (!key) throw Error(ErrorKind::Precondition, "basis change mixes degrees or idempotents");
    basis.push_back({x.element(j).name, key->first, key->second});
  }
  const auto& alg = *x.algebra();
  std::vector<SparseVec> diff;
  std::vector<ActionRule> action;
  for (int j = 0; j < x.dim(); ++j) {
    diff.push_back(apply_matrix(*inv, x.apply_differential(cols[j])));
    for (int a = 0; a < alg.dim(); ++a) {
      if (alg.element(a).target != basis[j].idempotent) continue;
      SparseVec v = apply_matrix(*inv, x.act(cols[j], unit_vec(k, a)));
      if (!v.empty()) action.push_back({j, a, std::move(v)});
    }
  }
  return DgModule(x.algebra(), std::move(basis), std::move(diff), action);
}

}  // namespace dgforge
