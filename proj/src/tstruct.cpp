#include "dgforge/tstruct.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dgforge/error.hpp"
#include "dgforge/weight.hpp"

namespace dgforge {

namespace {

void require_perfect_class_p(const TwistedComplex& x, const char* what) {
  x.algebra()->require_class_p(what);
  x.require_valid();
}

std::vector<int> cells_with_shift(const TwistedComplex& x, int shift) {
  std::vector<int> out;
  for (int s = 0; s < x.size(); ++s)
    if (x.cell(s).shift == shift) out.push_back(s);
  return out;
}

std::vector<std::size_t> idempotent_counts(const TwistedComplex& x, const std::vector<int>& cells) {
  std::vector<std::size_t> out(x.algebra()->num_idempotents(), 0);
  for (int s : cells) ++out[x.cell(s).idempotent];
  return out;
}

// n -> idempotent counts of the cells of shift -n, i.e. the factors of h0_t(Sigma^n x).
std::map<int, std::vector<std::size_t>> heart_table(const TwistedComplex& minimal) {
  std::map<int, std::vector<std::size_t>> out;
  for (const auto& c : minimal.cells()) {
    auto& row = out[-c.shift];
    row.resize(minimal.algebra()->num_idempotents(), 0);
    ++row[c.idempotent];
  }
  return out;
}

Matrix unit_column(FieldSpec k, std::size_t n, std::size_t i) {
  Matrix m(k, n, 1);
  m(i, 0) = Scalar(k, 1);
  return m;
}

// Precomposition with g: source' -> source on Hom(-, s), raising degree by `degree`
// (the identification Hom^p(x, s) = Hom^{p+1}(Sigma x, s) is the identity on data).
GradedMap precompose(const ModuleHom& from, const ModuleHom& to, const DgModule& s,
                     const CellMatrix& g, int degree) {
  GradedMap out;
  out.degree = degree;
  const FieldSpec k = s.field();
  for (int p : from.complex().support()) {
    const std::size_t n = from.complex().dim(p);
    Matrix block(k, to.complex().dim(p + degree), n);
    for (std::size_t c = 0; c < n; ++c) {
      ModuleCochain pulled = pullback(s, from.to_cochain(p, unit_column(k, n, c)), g);
      Matrix col = to.from_cochain(p + degree, pulled);
      for (std::size_t r = 0; r < block.rows(); ++r) block(r, c) = col(r, 0);
    }
    out.blocks[p] = std::move(block);
  }
  return out;
}

}  // namespace

TTruncation t_truncate(const TwistedComplex& x, int n) {
  require_perfect_class_p(x, "t-truncation");
  MinimalizeResult m = minimalize(x);
  const TwistedComplex& mx = m.minimal;
  std::vector<int> le, gt;
  for (int s = 0; s < mx.size(); ++s) (mx.cell(s).shift >= -n ? le : gt).push_back(s);
  TwistedComplex x_le = restrict_cells(mx, le);
  TwistedComplex x_gt = restrict_cells(mx, gt);
  CellMatrix connecting(static_cast<int>(le.size()), static_cast<int>(gt.size()));
  for (std::size_t a = 0; a < le.size(); ++a)
    for (std::size_t b = 0; b < gt.size(); ++b) connecting.at(a, b) = mx.delta().at(le[a], gt[b]);
  TTruncation out{n, m, le, gt, x_le, x_gt, connecting};
  out.closed = is_closed_subset(mx, le);
  if (out.closed) {
    try {
      TwistedComplex cone = tw_cone(shift(x_gt, -1), x_le, connecting).cone;
      std::vector<int> order = gt;
      order.insert(order.end(), le.begin(), le.end());
      out.strict_triangle = cone == restrict_cells(mx, order);
    } catch (const Error&) {
      out.strict_triangle = false;
    }
  }
  out.orthogonal = TwHom(x_le, x_gt).homology_dim(0) == 0;
  return out;
}

std::string to_string(TMembership m) {
  switch (m) {
    case TMembership::Le: return "t_le";
    case TMembership::Ge: return "t_ge";
    case TMembership::Both: return "both";
    case TMembership::Neither: return "neither";
  }
  return "neither";
}

TMembership t_membership(const TwistedComplex& x, int n) {
  require_perfect_class_p(x, "t-membership");
  const TwistedComplex mx = minimalize(x, EliminationOrder::First, false).minimal;
  if (mx.size() == 0) return TMembership::Both;
  bool all_le = true, all_gt = true;
  for (const auto& c : mx.cells()) {
    if (c.shift >= -n) all_gt = false;
    else all_le = false;
  }
  if (all_le) return TMembership::Le;
  if (all_gt) return TMembership::Ge;
  return TMembership::Neither;
}

Boundedness is_bounded(const TwistedComplex& x) {
  require_perfect_class_p(x, "boundedness");
  const TwistedComplex mx = minimalize(x, EliminationOrder::First, false).minimal;
  Boundedness out;
  for (const auto& c : mx.cells()) {
    out.min_shift = out.min_shift ? std::min(*out.min_shift, c.shift) : c.shift;
    out.max_shift = out.max_shift ? std::max(*out.max_shift, c.shift) : c.shift;
  }
  return out;
}

int HeartObject::length() const { return object.size(); }

HeartObject ht_n(const TwistedComplex& x, int n) {
  require_perfect_class_p(x, "heart projection");
  const TwistedComplex mx = minimalize(x, EliminationOrder::First, false).minimal;
  auto cells = cells_with_shift(mx, -n);
  return HeartObject{shift(restrict_cells(mx, cells), n), idempotent_counts(mx, cells)};
}

HeartObject h0_t(const TwistedComplex& x) { return ht_n(x, 0); }

JordanHolder jordan_holder(const TwistedComplex& x) {
  require_perfect_class_p(x, "Jordan-Hoelder");
  const TwistedComplex first = minimalize(x, EliminationOrder::First, false).minimal;
  const TwistedComplex last = minimalize(x, EliminationOrder::Last, false).minimal;
  if (static_cast<int>(cells_with_shift(first, 0).size()) != first.size())
    throw Error(ErrorKind::Precondition, "object is not in the heart");
  JordanHolder out;
  out.factors = idempotent_counts(first, cells_with_shift(first, 0));
  out.factors_other_order = idempotent_counts(last, cells_with_shift(last, 0));
  out.stable = out.factors == out.factors_other_order &&
               static_cast<int>(cells_with_shift(last, 0).size()) == last.size();
  return out;
}

FiberFunctorTable koszul_fiber_functor(const TwistedComplex& x) {
  require_perfect_class_p(x, "fiber functor");
  const auto& alg = x.algebra();
  const int r = alg->num_idempotents();
  FiberFunctorTable out;
  for (int j = 0; j < r; ++j) {
    ModuleHom h(x, share(simple_module(alg, j)));
    for (int p : h.complex().support()) {
      const std::size_t d = h.homology_dim(p);
      if (d == 0) continue;
      auto& row = out.dims.dims[p];
      row.resize(r, 0);
      row[j] = d;
    }
  }
  const TwistedComplex mx = minimalize(x, EliminationOrder::First, false).minimal;
  HomologyTable cells;
  for (const auto& c : mx.cells()) {
    auto& row = cells.dims[c.shift];
    row.resize(r, 0);
    ++row[c.idempotent];
  }
  out.matches_cells = cells == out.dims;
  const TMembership m = t_membership(x, 0);
  const bool in_aisle = m == TMembership::Le || m == TMembership::Both;
  const bool nonnegative = out.dims.empty() || *out.dims.bottom() >= 0;
  out.aisle_consistent = in_aisle == nonnegative;
  return out;
}

bool LesReport::exact() const {
  return std::all_of(checks.begin(), checks.end(), [](const ExactnessCheck& c) { return c.exact(); });
}

LesReport les_check(const TwistedComplex& x, const TwistedComplex& y, const CellMatrix& f) {
  require_perfect_class_p(x, "long exact sequence");
  require_perfect_class_p(y, "long exact sequence");
  TwCone tri = tw_cone(x, y, f);
  LesReport out{tri, {}, {}, {}, {}};
  auto minimal_of = [](const TwistedComplex& t) {
    return minimalize(t, EliminationOrder::First, false).minimal;
  };
  out.ht_x = heart_table(minimal_of(x));
  out.ht_y = heart_table(minimal_of(y));
  out.ht_cone = heart_table(minimal_of(tri.cone));
  const auto& alg = x.algebra();
  for (int j = 0; j < alg->num_idempotents(); ++j) {
    ModulePtr s = share(simple_module(alg, j));
    ModuleHom fx(x, s), fy(y, s), fz(tri.cone, s);
    const auto &cx = fx.complex(), &cy = fy.complex(), &cz = fz.complex();
    GradedMap f_star = precompose(fy, fx, *s, f, 0);
    GradedMap incl_star = precompose(fz, fy, *s, tri.inclusion, 0);
    GradedMap proj_star = precompose(fx, fz, *s, tri.projection, 1);
    std::set<int> degrees;
    for (const auto* c : {&cx, &cy, &cz})
      for (int p : c->support())
        for (int q = p - 1; q <= p + 1; ++q) degrees.insert(q);
    for (int p : degrees) {
      out.checks.push_back(check_exact_at(cz, cy, cx, incl_star, f_star, p));
      out.checks.push_back(check_exact_at(cy, cx, cz, f_star, proj_star, p));
      out.checks.push_back(check_exact_at(cx, cz, cy, proj_star, incl_star, p));
    }
  }
  return out;
}

EndomorphismReport endomorphism_report(const TwistedComplex& x) {
  x.require_valid();
  const FieldSpec k = x.field();
  const auto& alg = *x.algebra();
  TwHom h(x, x);
  auto reps = h.homology_basis(0);
  EndomorphismReport out;
  const std::size_t d = reps.size();
  out.dim = d;
  if (d == 0) return out;
  Matrix z(k, h.complex().dim(0), 0);
  for (const auto& r : reps) z = Matrix::hstack(z, h.from_cells(0, r));
  const Matrix b = h.complex().boundaries(0);
  const Matrix basis = Matrix::hstack(b, z);
  auto coords = [&](const Matrix& v) {
    auto sol = solve(basis, v);
    if (!sol) throw Error(ErrorKind::Internal, "endomorphism product is not a cycle");
    std::vector<Scalar> out_coords;
    for (std::size_t i = 0; i < d; ++i) out_coords.push_back((*sol)(b.cols() + i, 0));
    return out_coords;
  };
  // c[a][b][c] : z_a z_b = sum_c c[a][b][c] z_c modulo boundaries.
  std::vector<std::vector<std::vector<Scalar>>> c(d, std::vector<std::vector<Scalar>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c[i][j] = coords(h.from_cells(0, multiply(alg, reps[i], reps[j])));
  auto product = [&](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
    std::vector<Scalar> w(d, Scalar(k, 0));
    for (std::size_t i = 0; i < d; ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (v[j].is_zero()) continue;
        for (std::size_t l = 0; l < d; ++l) w[l] += u[i] * v[j] * c[i][j][l];
      }
    }
    return w;
  };
  std::vector<Scalar> trace(d, Scalar(k, 0));  // trace of left multiplication by z_l
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t j = 0; j < d; ++j) trace[l] += c[l][j][j];
  Matrix gram(k, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) gram(i, j) += c[i][j][l] * trace[l];
  const Matrix rad = kernel_basis(gram);
  out.radical_dim = rad.cols();
  auto column = [&](const Matrix& m, std::size_t col) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < d; ++i) v.push_back(m(i, col));
    return v;
  };
  auto to_matrix = [&](const std::vector<std::vector<Scalar>>& cols) {
    Matrix m(k, d, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < d; ++i) m(i, j) = cols[j][i];
    return m;
  };
  // A two-sided ideal all of whose elements are nilpotent: then it is the radical.
  bool ideal = true;
  if (rad.cols() > 0) {
    std::vector<std::vector<Scalar>> sides;
    const Matrix id = Matrix::identity(k, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < rad.cols(); ++j) {
        sides.push_back(product(column(id, i), column(rad, j)));
        sides.push_back(product(column(rad, j), column(id, i)));
      }
    ideal = rank(Matrix::hstack(rad, to_matrix(sides))) == rad.cols();
  }
  bool nilpotent = true;
  Matrix power = rad;
  for (std::size_t step = 0; step <= d && power.cols() > 0; ++step) {
    std::vector<std::vector<Scalar>> prods;
    for (std::size_t i = 0; i < power.cols(); ++i)
      for (std::size_t j = 0; j < rad.cols(); ++j) prods.push_back(product(column(power, i), column(rad, j)));
    Matrix next = prods.empty() ? Matrix(k, d, 0) : column_space_basis(to_matrix(prods));
    if (next.cols() > 0 && next.cols() >= power.cols()) {
      nilpotent = false;
      break;
    }
    power = next;
  }
  out.radical_nilpotent = ideal && nilpotent && power.cols() == 0;
  out.local = out.radical_nilpotent && d - out.radical_dim == 1;
  return out;
}

std::string to_string(GenerationVerdict v) {
  return v == GenerationVerdict::Certified ? "certified" : "inconclusive";
}

SimpleMindedReport check_simple_minded(const std::vector<TwistedComplex>& family, int t0, int t1,
                                       int budget) {
  if (family.empty()) throw Error(ErrorKind::Precondition, "empty family");
  for (const auto& s : family) require_perfect_class_p(s, "simple-minded check");
  const auto& alg = family.front().algebra();
  const int n = static_cast<int>(family.size());
  SimpleMindedReport out;
  out.hom0.assign(n, std::vector<std::size_t>(n, 0));
  out.condition_a = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TwHom h(family[i], family[j]);
      out.hom0[i][j] = h.homology_dim(0);
      if (out.hom0[i][j] != (i == j ? 1u : 0u)) out.condition_a = false;
      for (int t : h.complex().support())
        if (t < 0 && h.homology_dim(t) != 0) out.negative_extensions.push_back({i, j, t});
    }
  out.condition_b = out.negative_extensions.empty();

  // Budgeted search for the summands e_i A in the extension closure.
  std::set<int> generated;
  std::vector<TwistedComplex> explored;
  std::deque<std::pair<int, int>> pairs;
  int max_cells = 2;
  for (const auto& s : family) max_cells = std::max(max_cells, 4 * s.size());
  auto add = [&](const TwistedComplex& t) {
    TwistedComplex m = minimalize(t, EliminationOrder::First, false).minimal;
    if (m.size() == 0 || m.size() > max_cells) return;
    if (std::find(explored.begin(), explored.end(), m) != explored.end()) return;
    if (m.size() == 1) generated.insert(m.cell(0).idempotent);
    explored.push_back(std::move(m));
    const int id = static_cast<int>(explored.size()) - 1;
    for (int other = 0; other <= id; ++other) {
      pairs.push_back({id, other});
      if (other != id) pairs.push_back({other, id});
    }
  };
  for (const auto& s : family)
    for (int t = t0; t <= t1; ++t) add(shift(s, t));
  while (static_cast<int>(generated.size()) < alg->num_idempotents() && !pairs.empty() &&
         static_cast<int>(explored.size()) < budget) {
    auto [a, b] = pairs.front();
    pairs.pop_front();
    const TwistedComplex src = explored[a], dst = explored[b];
    for (const auto& f : TwHom(src, dst).homology_basis(0)) {
      add(tw_cone(src, dst, f).cone);
      if (static_cast<int>(explored.size()) >= budget) break;
    }
  }
  out.generated.assign(generated.begin(), generated.end());
  out.objects_explored = static_cast<int>(explored.size());
  out.condition_c = static_cast<int>(generated.size()) == alg->num_idempotents()
                        ? GenerationVerdict::Certified
                        : GenerationVerdict::Inconclusive;
  return out;
}

}  // namespace dgforge
