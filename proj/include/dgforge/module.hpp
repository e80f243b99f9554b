#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgforge/algebra.hpp"
#include "dgforge/complex.hpp"

namespace dgforge {

struct ModuleBasisElement {
  std::string name;
  int degree = 0;
  int idempotent = 0;
};

struct ActionRule {
  int element;    // module basis index
  int algebra;    // algebra basis index
  SparseVec value;
};

// Finite-dimensional right dg module. The action of the idempotents is
// implied by the basis data (m * e_i = m iff m sits at idempotent i).
class DgModule {
 public:
  DgModule(AlgebraPtr algebra, std::vector<ModuleBasisElement> basis,
           std::vector<SparseVec> differential, const std::vector<ActionRule>& action);

  static DgModule zero(AlgebraPtr algebra);

  const AlgebraPtr& algebra() const { return algebra_; }
  FieldSpec field() const { return algebra_->field(); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<ModuleBasisElement>& basis() const { return basis_; }
  const ModuleBasisElement& element(int i) const { return basis_[i]; }
  int index_of(const std::string& name) const;

  const SparseVec& differential(int m) const { return diff_[m]; }
  const SparseVec& act(int m, int a) const { return action_[m * algebra_->dim() + a]; }
  SparseVec act(const SparseVec& x, const SparseVec& a) const;
  SparseVec apply_differential(const SparseVec& x) const;

  const std::vector<std::string>& violations() const { return violations_; }
  bool is_valid() const { return violations_.empty(); }
  void require_valid() const;

  // Basis indices in a degree (and idempotent), ascending.
  std::vector<std::size_t> indices_in_degree(int p) const;
  std::vector<std::size_t> indices_in_block(int p, int idempotent) const;
  std::vector<int> degrees() const;  // distinct, ascending
  std::optional<int> min_degree() const;
  std::optional<int> max_degree() const;

  // Underlying complex of vector spaces (all idempotents, or one block).
  GradedComplex complex() const;
  GradedComplex complex(int idempotent) const;

  // Rows/cols of a dense d: M^p -> M^{p+1} in the index order above.
  Matrix differential_block(int p) const;

  // Listed action without the implied idempotent part.
  std::vector<ActionRule> listed_action() const;

 private:
  void validate();

  AlgebraPtr algebra_;
  std::vector<ModuleBasisElement> basis_;
  std::vector<SparseVec> diff_;
  std::vector<SparseVec> action_;
  std::vector<std::string> violations_;
};

using ModulePtr = std::shared_ptr<const DgModule>;

inline ModulePtr share(DgModule m) { return std::make_shared<const DgModule>(std::move(m)); }

// Degree -> per-idempotent homology dimensions; all-zero degrees omitted.
struct HomologyTable {
  std::map<int, std::vector<std::size_t>> dims;

  bool empty() const { return dims.empty(); }
  std::size_t at(int degree, int idempotent) const;
  std::size_t total(int degree) const;
  std::size_t total() const;
  std::optional<int> bottom() const;
  std::optional<int> top() const;
  friend bool operator==(const HomologyTable&, const HomologyTable&) = default;
};

HomologyTable homology(const DgModule& x);

// A graded A-linear map; matrix is target.dim x source.dim.
struct ModuleMap {
  ModulePtr source;
  ModulePtr target;
  int degree = 0;
  Matrix matrix;

  static ModuleMap zero(ModulePtr source, ModulePtr target, int degree = 0);
  static ModuleMap identity(ModulePtr module);

  bool is_homogeneous() const;
  bool is_a_linear() const;
  bool is_chain_map() const;
  GradedMap graded() const;
};

ModuleMap compose(const ModuleMap& g, const ModuleMap& f);  // g after f

bool is_quasi_iso(const ModuleMap& f);

// Module maps between the same pair of modules, degreewise.
std::map<int, std::size_t> induced_ranks(const ModuleMap& f);

// The regular module A_A and its summands e_i A.
DgModule regular_module(const AlgebraPtr& algebra);
DgModule free_summand(const AlgebraPtr& algebra, int idempotent);

// (Sigma^p x)^n = x^{n+p}; the differential picks up (-1)^p.
DgModule shift(const DgModule& x, int p);

DgModule direct_sum(const DgModule& x, const DgModule& y);
DgModule direct_sum(const std::vector<DgModule>& parts, const AlgebraPtr& algebra);

struct SubmoduleResult {
  ModulePtr module;
  ModuleMap inclusion;
};

struct QuotientResult {
  ModulePtr module;
  ModuleMap projection;
};

// The columns of span must be homogeneous (one degree, one idempotent each)
// and span a dg submodule; otherwise Error(Precondition).
SubmoduleResult submodule(const ModulePtr& x, const Matrix& span);
QuotientResult quotient(const ModulePtr& x, const Matrix& span);

struct ConeResult {
  ModulePtr cone;
  ModuleMap inclusion;   // target -> cone
  ModuleMap projection;  // cone -> Sigma source
  // Homology long exact sequence, checked at target, cone and Sigma source.
  std::vector<ExactnessCheck> les;
  bool les_exact() const;
};

// Cone of a degree-0 chain map f: M -> N, i.e. Sigma M (+) N with
// d(sm, n) = (-s dm, f(m) + dn).
ConeResult cone(const ModuleMap& f);

// H of degree deg f - 1 with d H - (-1)^{deg H} H d = f, if one exists.
std::optional<ModuleMap> null_homotopy(const ModuleMap& f);

struct SummandReport {
  int idempotent = 0;
  std::size_t h0_end_dim = 0;
  bool indecomposable = false;
};

// The summands e_i A of a class P algebra with the H^0 End(e_i A) = H^0(e_i A e_i)
// locality check.
std::vector<SummandReport> indecomposable_summands(const AlgebraPtr& algebra);

// Isomorphic copy in the basis given by the columns of g (block diagonal in
// degree and idempotent, invertible).
DgModule change_basis(const DgModule& x, const Matrix& g);

}  // namespace dgforge
