#pragma once

// Random objects and independent oracles shared by the unit and acceptance
// tests.

#include <cstdint>
#include <map>
#include <random>

#include "dgforge/module.hpp"
#include "dgforge/twisted.hpp"

namespace dgforge::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  // Nonzero scalar with small numerator and denominator.
  Scalar nonzero(FieldSpec k);
  Scalar any(FieldSpec k);

 private:
  std::mt19937_64 engine_;
};

// Random degree-p cycle in Hom(x, y); zero when there is none.
CellMatrix random_cycle(const TwistedComplex& x, const TwistedComplex& y, int p, Rng& rng);

// Iterated cones of random degree-0 cycles between shifted cells, direct sums
// and shifts; at most max_cells cells; shifts in [lo, hi].
TwistedComplex random_twisted(const AlgebraPtr& a, Rng& rng, int max_cells, int lo = -2,
                              int hi = 2);

// A random minimal object all of whose cells sit at shift 0 (heart object),
// built as a cone of (id, g): H1 -> H1 (+) H2 and iterated extensions.
TwistedComplex random_heart(const AlgebraPtr& a, Rng& rng, int max_cells);

// Degreewise span in degrees >= k, and the quotient by it.
QuotientResult brutal_quotient(const ModulePtr& x, int k);
SubmoduleResult brutal_sub(const ModulePtr& x, int k);

// Invertible matrix mixing basis vectors within (degree, idempotent) blocks.
Matrix random_block_basis_change(const DgModule& x, Rng& rng);

// Realizations, brutal sub/quotients, sums, shifts, contractible cones and
// basis changes; dimension at most max_dim.
DgModule random_module(const AlgebraPtr& a, Rng& rng, int max_dim);

// Module-level oracle: dimension of H^p of the complex of A-linear maps
// x -> y, computed from the linearity constraints directly.
std::size_t hom_oracle(const DgModule& x, const DgModule& y, int p);

// Homology dimensions per degree and idempotent from dense ranks of the
// differential, bypassing the engine's complex machinery. Zero degrees omitted.
std::map<int, std::vector<std::size_t>> homology_oracle(const DgModule& x);

// Rank of H^q(f) for a degree-0 map: rank [f Z^q(x) | B^q(y)] - rank B^q(y).
std::size_t induced_rank_oracle(const ModuleMap& f, int q);

}  // namespace dgforge::testing
