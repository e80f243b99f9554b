#include <doctest.h>

#include "dgforge/corpus.hpp"
#include "dgforge/error.hpp"

using namespace dgforge;

TEST_CASE("lambda is valid and class P") {
  auto a = corpus::lambda();
  CHECK(a->is_valid());
  CHECK(a->is_class_p());
  CHECK(a->product(1, 1).empty());
  CHECK(a->product(0, 1) == unit_vec(a->field(), 1));
}

TEST_CASE("dual numbers are valid but not class P") {
  auto a = corpus::dual_numbers();
  CHECK(a->is_valid());
  CHECK_FALSE(a->is_class_p());
  CHECK_FALSE(a->report().class_p_failures.empty());
  CHECK_THROWS_AS(a->require_class_p("test"), Error);
}

TEST_CASE("semisimple and quiver algebras") {
  auto k2 = corpus::semisimple(2);
  CHECK(k2->is_valid());
  CHECK(k2->is_class_p());
  CHECK(k2->product(0, 1).empty());
  auto q = corpus::quiver2();
  CHECK(q->is_valid());
  CHECK(q->is_class_p());
  CHECK(q->block_basis(1, 0, 1) == std::vector<int>{2});
  auto a2 = corpus::a2();
  CHECK(a2->is_valid());
  CHECK(a2->is_class_p());
}

TEST_CASE("violations are reported") {
  auto k = FieldSpec::rationals();
  // Differential of the wrong degree.
  std::vector<AlgebraBasisElement> basis{{"e", 0, 0, 0}, {"x", 1, 0, 0}, {"y", 1, 0, 0}};
  DgAlgebra bad_degree("bad", k, basis, {0}, {}, {{1, unit_vec(k, 2)}});
  CHECK_FALSE(bad_degree.is_valid());
  CHECK_THROWS_AS(bad_degree.require_valid(), Error);

  // dx = z and z*x = t, x*z = 0: d(x*x) = 0 but dx*x - x*dx = t.
  std::vector<AlgebraBasisElement> b2{{"e", 0, 0, 0}, {"x", 1, 0, 0}, {"z", 2, 0, 0}, {"t", 3, 0, 0}};
  DgAlgebra leibniz("leib", k, b2, {0}, {{2, 1, unit_vec(k, 3)}}, {{1, unit_vec(k, 2)}});
  CHECK_FALSE(leibniz.is_valid());

  // Negative degrees make a valid algebra that is not class P.
  std::vector<AlgebraBasisElement> b3{{"e", 0, 0, 0}, {"y", -1, 0, 0}};
  DgAlgebra neg("neg", k, b3, {0}, {}, {});
  CHECK(neg.is_valid());
  CHECK_FALSE(neg.is_class_p());

  CHECK_THROWS_AS(DgAlgebra("zero", k, {}, {}, {}, {}), Error);
}

TEST_CASE("corpus lookup") {
  for (const auto& n : corpus::names()) {
    auto a = corpus::by_name(n);
    REQUIRE(a);
    CHECK(a->is_valid());
  }
  CHECK(corpus::by_name("nope") == nullptr);
}
