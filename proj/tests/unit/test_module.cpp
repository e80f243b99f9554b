#include <doctest.h>

#include "dgforge/corpus.hpp"
#include "dgforge/error.hpp"
#include "dgforge/module.hpp"
#include "support/generators.hpp"

using namespace dgforge;

namespace {

// Homology oracle for modules with zero differential: count basis elements.
HomologyTable grading_table(const DgModule& x) {
  HomologyTable t;
  for (const auto& b : x.basis()) {
    auto& row = t.dims[b.degree];
    row.resize(x.algebra()->num_idempotents(), 0);
    ++row[b.idempotent];
  }
  return t;
}

Matrix span_of(const DgModule& x, std::vector<std::string> names) {
  Matrix m(x.field(), x.dim(), names.size());
  for (std::size_t c = 0; c < names.size(); ++c) m(x.index_of(names[c]), c) = Scalar(x.field(), 1);
  return m;
}

}  // namespace

TEST_CASE("homology of algebras over themselves") {
  auto lam = corpus::lambda();
  DgModule l = regular_module(lam);
  CHECK(l.is_valid());
  CHECK(homology(l) == grading_table(l));
  CHECK(homology(l).total(0) == 1);
  CHECK(homology(l).total(1) == 1);

  DgModule a = regular_module(corpus::a2());
  REQUIRE(a.is_valid());
  auto h = homology(a);
  CHECK(h.total(0) == 1);
  CHECK(h.total(1) == 1);
  CHECK(h.total(2) == 0);

  CHECK(homology(DgModule::zero(lam)).empty());
}

TEST_CASE("shift bookkeeping") {
  auto lam = corpus::lambda();
  DgModule l = regular_module(lam);
  DgModule s0 = shift(l, 0);
  CHECK(s0.basis().size() == l.basis().size());
  CHECK(homology(s0) == homology(l));
  DgModule s1 = shift(l, 1);
  CHECK(s1.degrees() == std::vector<int>{-1, 0});
  auto h = homology(s1);
  CHECK(h.total(-1) == 1);
  CHECK(h.total(0) == 1);
  DgModule a = regular_module(corpus::a2());
  DgModule sa = shift(a, 3);
  CHECK(sa.is_valid());
  for (int p = -5; p < 5; ++p) CHECK(homology(sa).total(p) == homology(a).total(p + 3));
}

TEST_CASE("sub and quotient modules") {
  auto lam = corpus::lambda();
  auto l = share(regular_module(lam));
  auto q = quotient(l, span_of(*l, {"x"}));
  CHECK(q.module->dim() == 1);
  CHECK(q.module->is_valid());
  CHECK(homology(*q.module).total(0) == 1);
  CHECK(q.projection.is_chain_map());
  CHECK(q.projection.is_a_linear());
  auto sub = submodule(l, span_of(*l, {"x"}));
  CHECK(homology(*sub.module).total(1) == 1);
  CHECK(sub.inclusion.is_a_linear());
  // span(e) is not closed under the action.
  CHECK_THROWS_AS(submodule(l, span_of(*l, {"e"})), Error);
  // Inhomogeneous vectors are rejected.
  Matrix mixed(l->field(), 2, 1);
  mixed(0, 0) = Scalar(l->field(), 1);
  mixed(1, 0) = Scalar(l->field(), 1);
  CHECK_THROWS_AS(submodule(l, mixed), Error);

  auto a = share(regular_module(corpus::a2()));
  auto ideal = submodule(a, span_of(*a, {"u", "v", "w"}));
  auto hi = homology(*ideal.module);
  CHECK(hi.total(1) == 1);
  CHECK(hi.total() == 1);
}

TEST_CASE("direct sums add homology") {
  auto lam = corpus::lambda();
  DgModule l = regular_module(lam);
  DgModule s = shift(l, -2);
  DgModule sum = direct_sum(l, s);
  CHECK(sum.is_valid());
  for (int p = -3; p < 5; ++p) CHECK(homology(sum).total(p) == homology(l).total(p) + homology(s).total(p));
  DgModule ll = direct_sum(l, l);
  CHECK(ll.index_of("x#2") >= 0);
  CHECK(homology(ll).total(1) == 2);
}

TEST_CASE("cones") {
  auto lam = corpus::lambda();
  auto l = share(regular_module(lam));
  auto c = cone(ModuleMap::identity(l));
  CHECK(c.cone->is_valid());
  CHECK(homology(*c.cone).empty());
  CHECK(c.les_exact());

  auto a = share(regular_module(corpus::a2()));
  auto z = cone(ModuleMap::zero(l, l));
  CHECK(z.les_exact());
  for (int p = -2; p < 3; ++p)
    CHECK(homology(*z.cone).total(p) == homology(*l).total(p) + homology(*l).total(p + 1));

  auto k = corpus::dual_numbers();
  auto km = share(regular_module(k));
  ModuleMap eps = ModuleMap::zero(km, km);
  eps.matrix(1, 0) = Scalar(k->field(), 1);
  REQUIRE(eps.is_a_linear());
  auto ce = cone(eps);
  auto h = homology(*ce.cone);
  CHECK(h.total(0) == 1);
  CHECK(h.total(-1) == 1);
  CHECK(h.total() == 2);
  CHECK(ce.les_exact());

  ModuleMap bad = ModuleMap::zero(l, l);
  bad.matrix(1, 0) = Scalar(lam->field(), 1);  // e -> x is not of degree 0
  CHECK_THROWS_AS(cone(bad), Error);
}

TEST_CASE("null homotopies") {
  auto lam = corpus::lambda();
  auto l = share(regular_module(lam));
  auto h0 = null_homotopy(ModuleMap::zero(l, l));
  REQUIRE(h0);
  CHECK(h0->matrix.is_zero());

  auto c = cone(ModuleMap::identity(l)).cone;
  auto id = ModuleMap::identity(c);
  auto h = null_homotopy(id);
  REQUIRE(h);
  CHECK(h->degree == -1);
  CHECK(h->is_a_linear());
  // f - (dH - (-1)^{deg H} H d) = 0 entrywise.
  Matrix dc(c->field(), c->dim(), c->dim());
  for (int s = 0; s < c->dim(); ++s)
    for (const auto& t : c->differential(s)) dc(t.index, s) = t.coef;
  Matrix dh = dc * h->matrix + (h->matrix * dc);  // deg H = -1
  CHECK(dh == id.matrix);

  auto s = quotient(l, span_of(*l, {"x"})).module;
  CHECK_FALSE(null_homotopy(ModuleMap::identity(s)));
}

TEST_CASE("quasi-isomorphisms") {
  auto lam = corpus::lambda();
  auto l = share(regular_module(lam));
  CHECK(is_quasi_iso(ModuleMap::identity(l)));
  auto q = quotient(l, span_of(*l, {"x"}));
  CHECK_FALSE(is_quasi_iso(q.projection));
  auto a = share(regular_module(corpus::a2()));
  // A2 -> A2 / span(u, w) kills an acyclic piece.
  Matrix uw(a->field(), a->dim(), 2);
  uw(a->index_of("u"), 0) = Scalar(a->field(), 1);
  uw(a->index_of("w"), 1) = Scalar(a->field(), 1);
  auto qa = quotient(a, uw);
  CHECK(is_quasi_iso(qa.projection));
}

TEST_CASE("indecomposable summands") {
  auto k2 = indecomposable_summands(corpus::semisimple(2));
  CHECK(k2.size() == 2);
  auto lam = indecomposable_summands(corpus::lambda());
  REQUIRE(lam.size() == 1);
  CHECK(lam[0].h0_end_dim == 1);
  CHECK(lam[0].indecomposable);
  CHECK(indecomposable_summands(corpus::a2()).size() == 1);
  CHECK_THROWS_AS(indecomposable_summands(corpus::dual_numbers()), Error);
  for (auto& alg : corpus::class_p_algebras())
    for (int i = 0; i < alg->num_idempotents(); ++i) {
      auto h = homology(free_summand(alg, i));
      CHECK(h.bottom().value() == 0);
      CHECK(h.at(0, i) == 1);
    }
}

TEST_CASE("module validation catches broken data") {
  auto lam = corpus::lambda();
  auto k = lam->field();
  std::vector<ModuleBasisElement> basis{{"m", 0, 0}, {"n", 1, 0}};
  DgModule ok(lam, basis, {unit_vec(k, 1), {}}, {{0, 1, unit_vec(k, 1)}});
  CHECK(ok.is_valid());
  DgModule wrong_degree(lam, basis, {{}, unit_vec(k, 0)}, {});
  CHECK_FALSE(wrong_degree.is_valid());
  std::vector<ModuleBasisElement> b3{{"m", 0, 0}, {"n", 1, 0}, {"p", 2, 0}};
  // d(m) = n, m*x = n, n*x = p: d(m*x) = d(n) = 0 vs d(m)*x = n*x = p.
  DgModule leibniz(lam, b3, {unit_vec(k, 1), {}, {}}, {{0, 1, unit_vec(k, 1)}, {1, 1, unit_vec(k, 2)}});
  CHECK_FALSE(leibniz.is_valid());
  CHECK_THROWS_AS(leibniz.require_valid(), Error);
  CHECK_THROWS_AS(DgModule(lam, {{"m", 0, 3}}, {}, {}), Error);
}

TEST_CASE("basis changes preserve homology") {
  auto a = regular_module(corpus::a2());
  auto k = a.field();
  Matrix g = Matrix::identity(k, a.dim());
  g(a.index_of("u"), a.index_of("v")) = Scalar(k, 2);
  g(a.index_of("v"), a.index_of("u")) = Scalar(k, -1);
  DgModule b = change_basis(a, g);
  CHECK(b.is_valid());
  CHECK(homology(b) == homology(a));
  Matrix bad = Matrix::identity(k, a.dim());
  bad(a.index_of("w"), a.index_of("e")) = Scalar(k, 1);
  CHECK_THROWS_AS(change_basis(a, bad), Error);
}

TEST_CASE("property: dense oracles agree with the engine") {
  dgforge::testing::Rng rng(19);
  for (const auto& a : corpus::class_p_algebras()) {
    for (int trial = 0; trial < 15; ++trial) {
      auto m = share(dgforge::testing::random_module(a, rng, 14));
      CHECK(dgforge::testing::homology_oracle(*m) == homology(*m).dims);
      auto id = ModuleMap::identity(m);
      const auto h = homology(*m);
      for (const auto& [q, dims] : h.dims) CHECK(dgforge::testing::induced_rank_oracle(id, q) == h.total(q));
      auto zero = ModuleMap::zero(m, m);
      for (int q : m->degrees()) CHECK(dgforge::testing::induced_rank_oracle(zero, q) == 0);
      auto c = cone(id);
      for (const auto& [q, r] : induced_ranks(c.inclusion))
        CHECK(dgforge::testing::induced_rank_oracle(c.inclusion, q) == r);
    }
  }
}
