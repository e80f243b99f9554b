#include "dgforge/weight.hpp"

#include <algorithm>
#include <set>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

std::vector<std::size_t> indices_with_degree_at_least(const DgModule& x, int k) {
  std::vector<std::size_t> out;
  for (int i = 0; i < x.dim(); ++i)
    if (x.element(i).degree >= k) out.push_back(i);
  return out;
}

DgModule positive_quotient(const DgModule& x) {
  auto shared = share(x);
  auto idx = indices_with_degree_at_least(x, 1);
  return *quotient(shared, Matrix::unit_columns(x.field(), x.dim(), idx)).module;
}

std::set<int> support(const HomologyTable& a, const HomologyTable& b) {
  std::set<int> out;
  for (const auto& [p, row] : a.dims) out.insert(p);
  for (const auto& [p, row] : b.dims) out.insert(p);
  return out;
}

// f induces bijections H^q(source) -> H^q(target) for every q selected.
template <class Pred>
bool iso_where(const ModuleMap& f, const HomologyTable& hs, const HomologyTable& ht, Pred pred) {
  auto ranks = induced_ranks(f);
  for (int q : support(hs, ht)) {
    if (!pred(q)) continue;
    const std::size_t r = ranks.count(q) ? ranks.at(q) : 0;
    if (r != hs.total(q) || r != ht.total(q)) return false;
  }
  return true;
}

}  // namespace

DgModule simple_sum(const AlgebraPtr& algebra) {
  algebra->require_class_p("simple module");
  return positive_quotient(regular_module(algebra));
}

DgModule simple_module(const AlgebraPtr& algebra, int idempotent) {
  algebra->require_class_p("simple module");
  if (idempotent < 0 || idempotent >= algebra->num_idempotents())
    throw Error(ErrorKind::Precondition, "idempotent index out of range");
  return positive_quotient(free_summand(algebra, idempotent));
}

std::string to_string(WMembership m) {
  switch (m) {
    case WMembership::LeP: return "w_le_p";
    case WMembership::GtP: return "w_gt_p";
    case WMembership::Both: return "both";
    case WMembership::Neither: return "neither";
  }
  return "neither";
}

WMembership w_membership(const DgModule& x, int p) {
  x.algebra()->require_class_p("weight membership");
  auto h = homology(x);
  if (h.empty()) return WMembership::Both;
  if (*h.top() <= p) return WMembership::LeP;
  if (*h.bottom() > p) return WMembership::GtP;
  return WMembership::Neither;
}

TruncationResult weight_truncate(const ModulePtr& x, int p) {
  x->algebra()->require_class_p("weight truncation");
  x->require_valid();
  const FieldSpec k = x->field();
  std::vector<std::size_t> gt = indices_with_degree_at_least(*x, p + 1);
  for (int i = 0; i < x->algebra()->num_idempotents(); ++i) {
    auto block = x->indices_in_block(p, i);
    if (block.empty()) continue;
    Matrix d = x->complex(i).differential(p);
    Matrix ker = d.rows() == 0 ? Matrix::identity(k, block.size()) : kernel_basis(d);
    for (auto c : complement_coordinates(ker, block.size())) gt.push_back(block[c]);
  }
  std::sort(gt.begin(), gt.end());
  Matrix span = Matrix::unit_columns(k, x->dim(), gt);

  TruncationResult out;
  out.level = p;
  out.source = x;
  auto sub = submodule(x, span);
  auto quo = quotient(x, span);
  out.sigma_gt = sub.module;
  out.sigma_le = quo.module;
  out.inclusion = sub.inclusion;
  out.projection = quo.projection;
  out.gt_indices = gt;
  out.le_indices.assign(out.sigma_le->dim(), 0);
  std::vector<bool> in_gt(x->dim(), false);
  for (auto g : gt) in_gt[g] = true;
  for (int idx = 0; idx < x->dim(); ++idx) {
    if (in_gt[idx]) continue;
    for (int j = 0; j < out.sigma_le->dim(); ++j)
      if (!out.projection.matrix(j, idx).is_zero()) out.le_indices[j] = idx;
  }

  out.source_homology = homology(*x);
  out.gt_homology = homology(*out.sigma_gt);
  out.le_homology = homology(*out.sigma_le);
  auto& c = out.certificates;
  c.gt_member = !out.gt_homology.bottom() || *out.gt_homology.bottom() > p;
  c.le_member = !out.le_homology.top() || *out.le_homology.top() <= p;
  c.inclusion_iso = iso_where(out.inclusion, out.gt_homology, out.source_homology,
                              [p](int q) { return q > p; });
  c.projection_iso = iso_where(out.projection, out.source_homology, out.le_homology,
                               [p](int q) { return q <= p; });
  c.maps_closed = out.inclusion.is_chain_map() && out.inclusion.is_a_linear() &&
                  out.projection.is_chain_map() && out.projection.is_a_linear();
  const Matrix composite = out.projection.matrix * out.inclusion.matrix;
  c.short_exact = composite.is_zero() &&
                  rank(out.inclusion.matrix) == static_cast<std::size_t>(out.sigma_gt->dim()) &&
                  rank(out.projection.matrix) == static_cast<std::size_t>(out.sigma_le->dim()) &&
                  out.sigma_gt->dim() + out.sigma_le->dim() == x->dim();
  if (!c.all()) throw Error(ErrorKind::Internal, "weight truncation certificate failed");
  return out;
}

bool WeightFiltration::all() const {
  if (!nested || !ends_acyclic || !layers_match_homology) return false;
  return std::all_of(layers.begin(), layers.end(),
                     [](const FiltrationLayer& l) { return l.concentrated; });
}

WeightFiltration weight_filtration(const ModulePtr& x) {
  x->algebra()->require_class_p("weight filtration");
  WeightFiltration out;
  out.source = x;
  out.homology = homology(*x);
  if (out.homology.empty()) {
    out.nested = out.ends_acyclic = out.layers_match_homology = true;
    return out;
  }
  const int bot = *out.homology.bottom(), top = *out.homology.top();
  std::vector<TruncationResult> truncs;
  for (int q = bot - 1; q <= top; ++q) {
    truncs.push_back(weight_truncate(x, q));
    out.levels.push_back(q);
    out.steps.push_back(truncs.back().gt_indices);
  }
  out.nested = true;
  for (std::size_t s = 0; s + 1 < out.steps.size(); ++s)
    out.nested = out.nested && std::includes(out.steps[s].begin(), out.steps[s].end(),
                                             out.steps[s + 1].begin(), out.steps[s + 1].end());
  out.ends_acyclic = truncs.front().le_homology.empty() && truncs.back().gt_homology.empty();
  out.layers_match_homology = true;
  const int r = x->algebra()->num_idempotents();
  for (std::size_t s = 1; s < truncs.size(); ++s) {
    const int q = out.levels[s];
    const auto& outer = out.steps[s - 1];
    const auto& inner = out.steps[s];
    std::vector<std::size_t> positions;
    for (auto g : inner)
      positions.push_back(std::lower_bound(outer.begin(), outer.end(), g) - outer.begin());
    const ModulePtr& w = truncs[s - 1].sigma_gt;
    FiltrationLayer layer;
    layer.degree = q;
    layer.layer = quotient(w, Matrix::unit_columns(x->field(), w->dim(), positions)).module;
    auto h = homology(*layer.layer);
    layer.concentrated = h.empty() || (*h.bottom() == q && *h.top() == q);
    for (int i = 0; i < r; ++i) {
      layer.multiplicities.push_back(h.at(q, i));
      if (h.at(q, i) != out.homology.at(q, i)) out.layers_match_homology = false;
    }
    out.layers.push_back(std::move(layer));
  }
  return out;
}

SimpleWitness simple_witness(const ModulePtr& x) {
  const auto& alg = x->algebra();
  alg->require_class_p("simple witness");
  auto h = homology(*x);
  if (!h.empty() && (*h.bottom() != 0 || *h.top() != 0))
    throw Error(ErrorKind::Precondition, "homology is not concentrated in degree 0");
  SimpleWitness out;
  out.truncation = weight_truncate(x, 0);
  const ModulePtr& le = out.truncation.sigma_le;
  std::vector<ModuleBasisElement> basis;
  Matrix reps_all(x->field(), le->dim(), 0);
  for (int i = 0; i < alg->num_idempotents(); ++i) {
    out.multiplicities.push_back(h.at(0, i));
    if (h.at(0, i) == 0) continue;
    auto block = le->indices_in_block(0, i);
    Matrix reps = le->complex(i).homology_representatives(0);
    Matrix full(x->field(), le->dim(), reps.cols());
    for (std::size_t col = 0; col < reps.cols(); ++col) {
      basis.push_back({"S" + std::to_string(i) + "#" + std::to_string(col), 0, i});
      for (std::size_t row = 0; row < block.size(); ++row) full(block[row], col) = reps(row, col);
    }
    reps_all = Matrix::hstack(reps_all, full);
  }
  out.simples = share(DgModule(alg, std::move(basis), {}, {}));
  out.to_truncation = ModuleMap{out.simples, le, 0, reps_all};
  out.projection_quasi_iso = is_quasi_iso(out.truncation.projection);
  out.simples_quasi_iso = out.to_truncation.is_a_linear() && is_quasi_iso(out.to_truncation);
  return out;
}

std::string to_string(HomVerdict v) {
  switch (v) {
    case HomVerdict::Complete: return "complete";
    case HomVerdict::APriori: return "a_priori";
    case HomVerdict::Fiber: return "fiber";
    case HomVerdict::Unverified: return "unverified";
  }
  return "unverified";
}

DerivedHomTable derived_hom_windowed(const ModulePtr& m, const ModulePtr& y, int n0, int n1,
                                     int budget) {
  if (n0 > n1) throw Error(ErrorKind::Precondition, "empty degree range");
  m->algebra()->require_class_p("derived Hom");
  if (m->algebra() != y->algebra() && m->algebra()->name() != y->algebra()->name())
    throw Error(ErrorKind::InvalidModule, "modules over different algebras");
  DerivedHomTable out{resolve(m, budget), std::nullopt, {}};
  const auto hm = homology(*m), hy = homology(*y);
  const bool zero = hm.empty() || hy.empty();
  if (!zero) out.vanishing_above = *hy.top() - *hm.bottom();
  ModuleHom hom(out.resolution.resolution, y);
  for (int n = n0; n <= n1; ++n) {
    DerivedHomRow row;
    row.degree = n;
    if (zero || n > *out.vanishing_above) {
      row.verdict = HomVerdict::APriori;
      out.rows.push_back(row);
      continue;
    }
    row.dim = hom.homology_dim(n);
    if (out.resolution.complete) {
      row.verdict = HomVerdict::Complete;
    } else {
      // Hom(cone, Sigma^n y) and Hom(cone, Sigma^{n+1} y) vanish once the
      // cone's homology starts above top(H y) - n.
      const int fiber_min = out.resolution.fiber_window->first;
      if (n >= *hy.top() - fiber_min + 2) row.verdict = HomVerdict::Fiber;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace dgforge
