#pragma once

// The canonical weight structure on finite-dimensional modules over class P
// algebras. The truncation at level p is the strict submodule
//   sigma_{>p} x = C (+) x^{>=p+1},
// C the unit-vector complement of ker d^p in x^p (chosen block by block),
// and sigma_{<=p} x is the quotient.

#include <optional>
#include <string>
#include <vector>

#include "dgforge/module.hpp"
#include "dgforge/twisted.hpp"

namespace dgforge {

// S_A = A / A^{>=1} and its summands e_i S_A.
DgModule simple_sum(const AlgebraPtr& algebra);
DgModule simple_module(const AlgebraPtr& algebra, int idempotent);

// Zero objects belong to both halves.
enum class WMembership { LeP, GtP, Both, Neither };
std::string to_string(WMembership m);
WMembership w_membership(const DgModule& x, int p);

struct TruncationCertificates {
  bool gt_member = false;         // H(sigma_gt) vanishes in degrees <= p
  bool le_member = false;         // H(sigma_le) vanishes in degrees > p
  bool inclusion_iso = false;     // H^q(sigma_gt) -> H^q(x) bijective for q > p
  bool projection_iso = false;    // H^q(x) -> H^q(sigma_le) bijective for q <= p
  bool maps_closed = false;       // inclusion and projection are A-linear chain maps
  bool short_exact = false;       // 0 -> sigma_gt -> x -> sigma_le -> 0 degreewise
  bool all() const {
    return gt_member && le_member && inclusion_iso && projection_iso && maps_closed && short_exact;
  }
};

struct TruncationResult {
  int level = 0;
  ModulePtr source;
  ModulePtr sigma_gt;
  ModulePtr sigma_le;
  ModuleMap inclusion;   // sigma_gt -> x
  ModuleMap projection;  // x -> sigma_le
  std::vector<std::size_t> gt_indices;  // basis elements of x spanning sigma_gt
  std::vector<std::size_t> le_indices;  // basis elements of x kept by sigma_le
  HomologyTable source_homology, gt_homology, le_homology;
  TruncationCertificates certificates;
};

// Error(Internal) if a certificate fails.
TruncationResult weight_truncate(const ModulePtr& x, int p);

struct FiltrationLayer {
  int degree = 0;                      // the layer's homology sits here
  ModulePtr layer;                     // W_{degree-1} / W_{degree}
  std::vector<std::size_t> multiplicities;  // per idempotent
  bool concentrated = false;           // certificate
};

// 0 ⊆ W_top ⊆ ... ⊆ W_{bot-1} ⊆ x with W_q = sigma_{>q} x. The two ends
// W_top and x / W_{bot-1} are acyclic.
struct WeightFiltration {
  ModulePtr source;
  HomologyTable homology;
  std::vector<int> levels;                       // q = bot-1, ..., top
  std::vector<std::vector<std::size_t>> steps;   // basis indices of W_q in x
  std::vector<FiltrationLayer> layers;           // degrees bot, ..., top
  bool nested = false;
  bool ends_acyclic = false;
  bool layers_match_homology = false;
  bool all() const;
};

WeightFiltration weight_filtration(const ModulePtr& x);

// x -> sigma_{<=0} x <- (+)_i (e_i S_A)^{m_i}, both quasi-isomorphisms.
struct SimpleWitness {
  TruncationResult truncation;
  ModulePtr simples;
  ModuleMap to_truncation;  // simples -> sigma_{<=0} x
  std::vector<std::size_t> multiplicities;
  bool projection_quasi_iso = false;
  bool simples_quasi_iso = false;
  bool all() const { return projection_quasi_iso && simples_quasi_iso; }
};

// Error(Precondition) unless H(x) is concentrated in degree 0.
SimpleWitness simple_witness(const ModulePtr& x);

enum class HomVerdict { Complete, APriori, Fiber, Unverified };
std::string to_string(HomVerdict v);

struct DerivedHomRow {
  int degree = 0;
  std::size_t dim = 0;       // dim H^n Hom(P, y); 0 when the a-priori bound applies
  HomVerdict verdict = HomVerdict::Unverified;
  bool verified() const { return verdict != HomVerdict::Unverified; }
};

// Hom(m, Sigma^n y) for n in [n0, n1] through a budgeted resolution P -> m.
struct DerivedHomTable {
  ResolveResult resolution;
  // Hom(m, Sigma^n y) = 0 for all n > vanishing_above (absent when either
  // homology is zero, in which case everything vanishes).
  std::optional<int> vanishing_above;
  std::vector<DerivedHomRow> rows;
};

DerivedHomTable derived_hom_windowed(const ModulePtr& m, const ModulePtr& y, int n0, int n1,
                                     int budget);

}  // namespace dgforge
