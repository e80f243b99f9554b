#pragma once

// Finite stages of the aisle tower generated by the summands e_i A. X_0 covers
// H^{-n}(m) for n >= 0 by cells Sigma^n e_i A; X_{i+1} attaches cells killing
// H^{-n}(Y_i) for n >= 0, where Y_i is the cone of pi_i: X_i -> m.

#include <map>
#include <optional>
#include <vector>

#include "dgforge/module.hpp"
#include "dgforge/twisted.hpp"

namespace dgforge {

struct SurjectivityEntry {
  int n = 0;              // Hom(Sigma^n e_i A, -) = H^{-n}(- e_i)
  std::size_t rank = 0;   // of H^{-n}(X_i) -> H^{-n}(m)
  std::size_t target = 0; // dim H^{-n}(m)
};

struct TowerStage {
  int index = 0;
  TwistedComplex x;
  ModuleCochain pi;                    // degree-0 cycle in Hom(x, m)
  HomologyTable cone_homology;         // of Y_i
  std::vector<SurjectivityEntry> surjectivity;
  bool surjective = false;
  int attached = 0;                    // cells added to reach the next stage
  // H^{-n}(Y_i) -> H^{-n}(Y_{i+1}) vanishes for n >= 0 (absent on the last stage).
  std::optional<bool> transition_vanishes;
};

struct Tower {
  std::vector<TowerStage> stages;
  std::optional<int> stabilized_at;  // no cells attached from this stage on
  // On stabilization: pi is an isomorphism on H^{<=0} and Y has homology only
  // in positive degrees, so X is the aisle truncation of m.
  bool truncation_certified = false;
  bool quasi_iso = false;            // realize(X) -> m, when stabilized
  bool all_surjective() const;
  bool all_transitions_vanish() const;
};

// Error(Precondition) if stages < 1; requires class P.
Tower aisle_tower(const ModulePtr& m, int stages);

}  // namespace dgforge
