#include <doctest.h>

#include "dgforge/corpus.hpp"
#include "dgforge/error.hpp"
#include "dgforge/weight.hpp"
#include "support/generators.hpp"

using namespace dgforge;
using dgforge::testing::Rng;

namespace {

bool same_module(const DgModule& a, const DgModule& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    const auto &x = a.element(i), &y = b.element(i);
    if (x.name != y.name || x.degree != y.degree || x.idempotent != y.idempotent) return false;
    if (a.differential(i) != b.differential(i)) return false;
    for (int e = 0; e < a.algebra()->dim(); ++e)
      if (a.act(i, e) != b.act(i, e)) return false;
  }
  return true;
}

std::vector<std::string> names_of(const DgModule& x) {
  std::vector<std::string> out;
  for (const auto& b : x.basis()) out.push_back(b.name);
  return out;
}

ModulePtr lambda_simple() { return share(simple_sum(corpus::lambda())); }

}  // namespace

TEST_CASE("simple modules") {
  auto s = simple_sum(corpus::lambda());
  CHECK(s.dim() == 1);
  CHECK(homology(s).total(0) == 1);
  CHECK(homology(s).total() == 1);

  auto k2 = corpus::semisimple(2);
  auto sk = simple_sum(k2);
  CHECK(sk.dim() == 2);
  CHECK(homology(sk) == homology(regular_module(k2)));

  auto a2 = corpus::a2();
  CHECK(homology(simple_sum(a2)).total() == 1);
  auto t = weight_truncate(share(regular_module(a2)), 0);
  CHECK(names_of(*t.sigma_gt) == std::vector<std::string>{"u", "v", "w"});
  CHECK(t.gt_homology.total() == 1);
  CHECK(t.gt_homology.total(1) == 1);

  auto q = corpus::quiver2();
  for (int i = 0; i < 2; ++i) {
    auto si = simple_module(q, i);
    CHECK(si.dim() == 1);
    CHECK(homology(si).at(0, i) == 1);
  }
  CHECK_THROWS_AS(simple_sum(corpus::dual_numbers()), Error);
}

TEST_CASE("weight membership") {
  auto lam = corpus::lambda();
  auto reg = share(regular_module(lam));
  CHECK(w_membership(*reg, 0) == WMembership::Neither);
  auto x_span = submodule(reg, Matrix::unit_columns(lam->field(), 2, std::vector<std::size_t>{1}));
  CHECK(w_membership(*x_span.module, 0) == WMembership::GtP);
  CHECK(w_membership(*lambda_simple(), 0) == WMembership::LeP);
  CHECK(w_membership(*lambda_simple(), -1) == WMembership::GtP);
  CHECK(w_membership(DgModule::zero(lam), 0) == WMembership::Both);
  CHECK_THROWS_AS(w_membership(regular_module(corpus::dual_numbers()), 0), Error);
}

TEST_CASE("weight truncation examples") {
  auto lam = corpus::lambda();
  auto t = weight_truncate(share(regular_module(lam)), 0);
  CHECK(t.certificates.all());
  CHECK(names_of(*t.sigma_gt) == std::vector<std::string>{"x"});
  CHECK(names_of(*t.sigma_le) == std::vector<std::string>{"e"});
  CHECK(homology(*t.sigma_gt) == homology(shift(*lambda_simple(), -1)));

  auto a2 = corpus::a2();
  auto t1 = weight_truncate(share(regular_module(a2)), 1);
  CHECK(t1.certificates.all());
  CHECK(names_of(*t1.sigma_gt) == std::vector<std::string>{"u", "w"});
  CHECK(names_of(*t1.sigma_le) == std::vector<std::string>{"e", "v"});
  CHECK(t1.gt_homology.empty());
  CHECK(t1.le_homology.total(0) == 1);
  CHECK(t1.le_homology.total(1) == 1);

  // Above the top of the homology the projection is a quasi-isomorphism.
  auto t2 = weight_truncate(share(regular_module(a2)), 2);
  CHECK(is_quasi_iso(t2.projection));
  CHECK(t2.sigma_gt->dim() == 0);
}

TEST_CASE("weight filtration examples") {
  auto a2 = corpus::a2();
  auto f = weight_filtration(share(regular_module(a2)));
  CHECK(f.all());
  REQUIRE(f.layers.size() == 2);
  CHECK(f.layers[0].degree == 0);
  CHECK(f.layers[0].multiplicities == std::vector<std::size_t>{1});
  CHECK(f.layers[1].degree == 1);
  CHECK(f.layers[1].multiplicities == std::vector<std::size_t>{1});

  auto s = lambda_simple();
  auto fs = weight_filtration(s);
  CHECK(fs.all());
  REQUIRE(fs.layers.size() == 1);
  CHECK(fs.layers[0].degree == 0);

  auto sum = share(direct_sum(shift(*s, -3), *s));
  auto fsum = weight_filtration(sum);
  CHECK(fsum.all());
  std::vector<int> nonzero;
  for (const auto& l : fsum.layers)
    if (l.multiplicities[0] > 0) nonzero.push_back(l.degree);
  CHECK(nonzero == std::vector<int>{0, 3});

  auto empty = weight_filtration(share(DgModule::zero(a2)));
  CHECK(empty.all());
  CHECK(empty.layers.empty());
}

TEST_CASE("simple witnesses") {
  auto lam = corpus::lambda();
  auto s = lambda_simple();
  auto w = simple_witness(s);
  CHECK(w.all());
  CHECK(w.multiplicities == std::vector<std::size_t>{1});

  auto junk = share(regular_module(lam));
  auto contractible = *cone(ModuleMap::identity(junk)).cone;
  auto x = share(direct_sum(*s, contractible));
  auto wx = simple_witness(x);
  CHECK(wx.all());
  CHECK(wx.multiplicities == std::vector<std::size_t>{1});

  CellMatrix d(2, 2);
  d.at(1, 0) = unit_vec(lam->field(), lam->index_of("x"));
  auto mx = share(realize(TwistedComplex(lam, {{0, 0}, {0, 0}}, d)));
  CHECK_THROWS_AS(simple_witness(mx), Error);

  auto q = corpus::quiver2();
  auto sq = share(direct_sum(simple_sum(q), simple_module(q, 1)));
  auto wq = simple_witness(sq);
  CHECK(wq.all());
  CHECK(wq.multiplicities == std::vector<std::size_t>{1, 2});
}

TEST_CASE("derived Hom with verified ranges") {
  auto lam = corpus::lambda();
  SUBCASE("out of a summand") {
    Rng rng(3);
    auto p = share(free_summand(lam, 0));
    for (int trial = 0; trial < 5; ++trial) {
      auto y = share(testing::random_module(lam, rng, 8));
      auto t = derived_hom_windowed(p, y, -4, 4, 3);
      CHECK(t.resolution.complete);
      auto hy = homology(*y);
      for (const auto& row : t.rows) {
        CHECK(row.verified());
        CHECK(row.dim == hy.at(row.degree, 0));
      }
    }
  }
  SUBCASE("simple into simple over Lambda") {
    auto s = lambda_simple();
    std::size_t previous = 0;
    for (int budget = 1; budget <= 4; ++budget) {
      auto t = derived_hom_windowed(s, s, -2, 2, budget);
      REQUIRE(t.vanishing_above.has_value());
      CHECK(*t.vanishing_above == 0);
      for (const auto& row : t.rows) {
        if (row.degree > 0) {
          CHECK(row.verdict == HomVerdict::APriori);
          CHECK(row.dim == 0);
        } else if (row.degree < 0) {
          CHECK(row.dim == 0);
          CHECK_FALSE(row.verified());
        } else {
          CHECK_FALSE(row.verified());
          CHECK(row.dim > previous);
          previous = row.dim;
        }
      }
    }
  }
  SUBCASE("empty range") {
    CHECK_THROWS_AS(derived_hom_windowed(lambda_simple(), lambda_simple(), 1, 0, 2), Error);
  }
}

TEST_CASE("property: weight truncation certificates on random modules") {
  Rng rng(21);
  for (const auto& a : corpus::class_p_algebras()) {
    for (int trial = 0; trial < 25; ++trial) {
      auto x = share(testing::random_module(a, rng, 16));
      auto h = homology(*x);
      const int lo = h.empty() ? -1 : *h.bottom() - 1;
      const int hi = h.empty() ? 1 : *h.top() + 1;
      for (int p = lo; p <= hi; ++p) {
        auto t = weight_truncate(x, p);
        CHECK(t.certificates.all());
        // Membership agrees with the homology support of the pieces.
        auto mg = w_membership(*t.sigma_gt, p), ml = w_membership(*t.sigma_le, p);
        CHECK((mg == WMembership::GtP || mg == WMembership::Both));
        CHECK((ml == WMembership::LeP || ml == WMembership::Both));
        if (!h.empty() && p >= *h.top()) CHECK(is_quasi_iso(t.projection));
      }
      auto f = weight_filtration(x);
      CHECK(f.all());
    }
  }
}

TEST_CASE("property: truncation commutes with sums and shifts") {
  Rng rng(22);
  for (const auto& a : corpus::class_p_algebras()) {
    for (int trial = 0; trial < 15; ++trial) {
      DgModule x = testing::random_module(a, rng, 10);
      DgModule y = testing::random_module(a, rng, 10);
      auto px = share(x), py = share(y);
      auto sum = share(direct_sum(x, y));
      for (int p = -1; p <= 2; ++p) {
        auto tx = weight_truncate(px, p), ty = weight_truncate(py, p), ts = weight_truncate(sum, p);
        std::vector<std::size_t> expected = tx.gt_indices;
        for (auto g : ty.gt_indices) expected.push_back(g + x.dim());
        CHECK(ts.gt_indices == expected);
        const int q = rng.uniform(-2, 2);
        auto lhs = weight_truncate(share(shift(x, q)), p);
        auto rhs = weight_truncate(px, p + q);
        CHECK(same_module(*lhs.sigma_le, shift(*rhs.sigma_le, q)));
        CHECK(same_module(*lhs.sigma_gt, shift(*rhs.sigma_gt, q)));
      }
    }
  }
}

TEST_CASE("property: orthogonality against perfect objects") {
  Rng rng(23);
  int instances = 0;
  for (const auto& a : corpus::class_p_algebras()) {
    for (int trial = 0; trial < 30; ++trial) {
      TwistedComplex p = testing::random_twisted(a, rng, 3);
      auto hp = homology(realize(p));
      if (hp.empty()) continue;
      const int level = *hp.bottom() - 1;
      auto y = share(testing::random_module(a, rng, 10));
      auto ly = weight_truncate(y, level).sigma_le;
      ModuleHom h(p, ly);
      CHECK(h.homology_dim(0) == 0);
      CHECK(testing::hom_oracle(realize(p), *ly, 0) == 0);
      ++instances;
    }
  }
  CHECK(instances > 50);
}

TEST_CASE("property: simple witnesses for perturbed simples") {
  Rng rng(24);
  for (const auto& a : corpus::class_p_algebras()) {
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<DgModule> parts;
      std::vector<std::size_t> expected(a->num_idempotents(), 0);
      for (int i = 0; i < a->num_idempotents(); ++i) {
        const int copies = rng.uniform(0, 2);
        for (int c = 0; c < copies; ++c) parts.push_back(simple_module(a, i));
        expected[i] = copies;
      }
      auto junk = share(testing::random_module(a, rng, 6));
      parts.push_back(*cone(ModuleMap::identity(junk)).cone);
      DgModule x = direct_sum(parts, a);
      x = change_basis(x, testing::random_block_basis_change(x, rng));
      auto w = simple_witness(share(x));
      CHECK(w.all());
      CHECK(w.multiplicities == expected);
    }
  }
}
