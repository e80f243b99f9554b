#pragma once

// The shipped example algebras, all over Q unless a field is given.

#include <string>
#include <string_view>
#include <vector>

#include "dgforge/algebra.hpp"

namespace dgforge::corpus {

// k[x]/(x^2), |x| = 1, d = 0.
AlgebraPtr lambda(FieldSpec field = FieldSpec::rationals());
// Basis e; u, v in degree 1; w in degree 2; du = w, all other products zero.
AlgebraPtr a2(FieldSpec field = FieldSpec::rationals());
// k^r: r orthogonal idempotents and nothing else.
AlgebraPtr semisimple(int r, FieldSpec field = FieldSpec::rationals());
// Dual numbers k[eps], |eps| = 0. Valid, not class P.
AlgebraPtr dual_numbers(FieldSpec field = FieldSpec::rationals());
// Two vertices, arrows a: 1 -> 2 and b: 2 -> 1 of degree 1 (a in e2 A e1,
// b in e1 A e2), paths ab and ba of degree 2, longer paths zero, d = 0.
AlgebraPtr quiver2(FieldSpec field = FieldSpec::rationals());

// Builtin names: lambda, a2, k, k2, k3, keps, quiver2.
std::vector<std::string> names();
// nullptr when the name is unknown.
AlgebraPtr by_name(std::string_view name);

// The class P members of the corpus.
std::vector<AlgebraPtr> class_p_algebras();

}  // namespace dgforge::corpus
