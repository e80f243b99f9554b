#include "dgforge/corpus.hpp"

namespace dgforge::corpus {

namespace {

SparseVec one(FieldSpec k, int index) { return unit_vec(k, index); }

}  // namespace

AlgebraPtr lambda(FieldSpec k) {
  std::vector<AlgebraBasisElement> basis{{"e", 0, 0, 0}, {"x", 1, 0, 0}};
  return std::make_shared<const DgAlgebra>("lambda", k, basis, std::vector<int>{0},
                                           std::vector<ProductRule>{},
                                           std::vector<DifferentialRule>{});
}

AlgebraPtr a2(FieldSpec k) {
  std::vector<AlgebraBasisElement> basis{
      {"e", 0, 0, 0}, {"u", 1, 0, 0}, {"v", 1, 0, 0}, {"w", 2, 0, 0}};
  std::vector<DifferentialRule> diff{{1, one(k, 3)}};
  return std::make_shared<const DgAlgebra>("a2", k, basis, std::vector<int>{0},
                                           std::vector<ProductRule>{}, diff);
}

AlgebraPtr semisimple(int r, FieldSpec k) {
  std::vector<AlgebraBasisElement> basis;
  std::vector<int> idem;
  for (int i = 0; i < r; ++i) {
    basis.push_back({"e" + std::to_string(i + 1), 0, i, i});
    idem.push_back(i);
  }
  std::string name = r == 1 ? "k" : "k" + std::to_string(r);
  return std::make_shared<const DgAlgebra>(name, k, basis, idem, std::vector<ProductRule>{},
                                           std::vector<DifferentialRule>{});
}

AlgebraPtr dual_numbers(FieldSpec k) {
  std::vector<AlgebraBasisElement> basis{{"e", 0, 0, 0}, {"eps", 0, 0, 0}};
  return std::make_shared<const DgAlgebra>("keps", k, basis, std::vector<int>{0},
                                           std::vector<ProductRule>{},
                                           std::vector<DifferentialRule>{});
}

AlgebraPtr quiver2(FieldSpec k) {
  // e1, e2, a (1 -> 2), b (2 -> 1), ab in e2 A e2, ba in e1 A e1.
  std::vector<AlgebraBasisElement> basis{{"e1", 0, 0, 0}, {"e2", 0, 1, 1}, {"a", 1, 0, 1},
                                         {"b", 1, 1, 0},  {"ab", 2, 1, 1}, {"ba", 2, 0, 0}};
  std::vector<ProductRule> mult{{2, 3, one(k, 4)}, {3, 2, one(k, 5)}};
  return std::make_shared<const DgAlgebra>("quiver2", k, basis, std::vector<int>{0, 1}, mult,
                                           std::vector<DifferentialRule>{});
}

std::vector<std::string> names() { return {"lambda", "a2", "k", "k2", "k3", "keps", "quiver2"}; }

AlgebraPtr by_name(std::string_view name) {
  if (name == "lambda") return lambda();
  if (name == "a2") return a2();
  if (name == "k") return semisimple(1);
  if (name == "k2") return semisimple(2);
  if (name == "k3") return semisimple(3);
  if (name == "keps") return dual_numbers();
  if (name == "quiver2") return quiver2();
  return nullptr;
}

std::vector<AlgebraPtr> class_p_algebras() {
  return {lambda(), a2(), semisimple(2), quiver2()};
}

}  // namespace dgforge::corpus
