#include <doctest.h>

#include "dgforge/corpus.hpp"
#include "dgforge/error.hpp"
#include "dgforge/tower.hpp"
#include "dgforge/weight.hpp"
#include "support/generators.hpp"

using namespace dgforge;
using dgforge::testing::Rng;

namespace {

// Shift so that the homology tops out in degree 0 (a member of the aisle).
DgModule into_aisle(const DgModule& m) {
  auto h = homology(m);
  return h.empty() ? m : shift(m, *h.top());
}

}  // namespace

TEST_CASE("semisimple towers stop at once") {
  auto k2 = corpus::semisimple(2);
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = share(into_aisle(testing::random_module(k2, rng, 10)));
    auto t = aisle_tower(m, 5);
    REQUIRE(t.stabilized_at.has_value());
    CHECK(*t.stabilized_at == 0);
    CHECK(t.stages.size() == 1);
    CHECK(t.quasi_iso);
    CHECK(t.truncation_certified);
    CHECK(t.all_surjective());
  }
  // Homology in positive degrees is outside the aisle: the truncation is still certified.
  auto pos = share(shift(regular_module(k2), -2));
  auto t = aisle_tower(pos, 3);
  CHECK(*t.stabilized_at == 0);
  CHECK(t.stages[0].x.size() == 0);
  CHECK(t.truncation_certified);
  CHECK_FALSE(t.quasi_iso);
}

TEST_CASE("the simple over Lambda never stabilizes") {
  auto s = share(simple_sum(corpus::lambda()));
  auto t = aisle_tower(s, 5);
  CHECK_FALSE(t.stabilized_at.has_value());
  REQUIRE(t.stages.size() == 5);
  CHECK(t.stages[0].x.size() == 1);
  CHECK(t.all_surjective());
  CHECK(t.all_transitions_vanish());
  for (int i = 0; i + 1 < 5; ++i) {
    CHECK(t.stages[i].transition_vanishes.has_value());
    CHECK(t.stages[i + 1].x.size() == t.stages[i].x.size() + t.stages[i].attached);
    CHECK(t.stages[i].attached == 1);
  }
  CHECK_FALSE(t.stages[4].transition_vanishes.has_value());
}

TEST_CASE("tower edge cases") {
  auto lam = corpus::lambda();
  auto zero = aisle_tower(share(DgModule::zero(lam)), 3);
  CHECK(zero.stages.size() == 1);
  CHECK(zero.stages[0].x.size() == 0);
  CHECK(zero.quasi_iso);
  CHECK_THROWS_AS(aisle_tower(share(DgModule::zero(lam)), 0), Error);
  CHECK_THROWS_AS(aisle_tower(share(regular_module(corpus::dual_numbers())), 2), Error);
  // A summand is its own tower.
  auto e = aisle_tower(share(free_summand(lam, 0)), 4);
  CHECK(*e.stabilized_at == 0);
  CHECK(e.quasi_iso);
}

TEST_CASE("property: tower certificates") {
  Rng rng(42);
  for (const auto& name : corpus::names()) {
    auto a = corpus::by_name(name);
    if (!a->is_class_p()) continue;
    for (int trial = 0; trial < 6; ++trial) {
      auto m = share(testing::random_module(a, rng, 8));
      auto t = aisle_tower(m, 4);
      CHECK(t.all_surjective());
      CHECK(t.all_transitions_vanish());
      if (t.stabilized_at) {
        CHECK(t.truncation_certified);
        auto h = homology(*m);
        CHECK(t.quasi_iso == (h.empty() || *h.top() <= 0));
      }
    }
  }
}
