#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "dgforge/scalars.hpp"

namespace dgforge {

// A basis element b with e_target * b * e_source = b.
struct AlgebraBasisElement {
  std::string name;
  int degree = 0;
  int source = 0;
  int target = 0;
};

struct ValidationReport {
  bool valid = false;
  bool class_p = false;
  std::vector<std::string> violations;
  // Why class P was not granted (empty when it was, or when invalid).
  std::vector<std::string> class_p_failures;
};

struct ProductRule {
  int left;
  int right;
  SparseVec value;
};

struct DifferentialRule {
  int element;
  SparseVec value;
};

// Finite-dimensional dg algebra with an idempotent-adapted basis. Products
// with the idempotents are implied by the basis data and need not be listed;
// listed ones are checked against it.
class DgAlgebra {
 public:
  DgAlgebra(std::string name, FieldSpec field, std::vector<AlgebraBasisElement> basis,
            std::vector<int> idempotents, std::vector<ProductRule> products,
            std::vector<DifferentialRule> differentials);

  const std::string& name() const { return name_; }
  FieldSpec field() const { return field_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<AlgebraBasisElement>& basis() const { return basis_; }
  const AlgebraBasisElement& element(int i) const { return basis_[i]; }
  const std::vector<int>& idempotents() const { return idempotents_; }
  int num_idempotents() const { return static_cast<int>(idempotents_.size()); }
  int index_of(const std::string& name) const;  // -1 when absent

  const SparseVec& product(int a, int b) const { return mult_[a * dim() + b]; }
  const SparseVec& differential(int a) const { return diff_[a]; }
  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;
  SparseVec apply_differential(const SparseVec& x) const;

  // Basis elements of e_target A e_source in the given degree.
  const std::vector<int>& block_basis(int target, int source, int degree) const;
  // Basis elements of e_i A, i.e. target(b) = i, in basis order.
  const std::vector<int>& right_ideal_basis(int i) const { return right_ideal_[i]; }
  // Degree of a homogeneous element; nullopt for zero or inhomogeneous.
  std::optional<int> degree_of(const SparseVec& x) const;
  int min_degree() const;
  int max_degree() const;

  const ValidationReport& report() const { return report_; }
  bool is_valid() const { return report_.valid; }
  bool is_class_p() const { return report_.class_p; }
  void require_valid() const;
  void require_class_p(const std::string& operation) const;

  // Exported product table without the implied idempotent products.
  std::vector<ProductRule> listed_products() const;

 private:
  void validate();

  std::string name_;
  FieldSpec field_;
  std::vector<AlgebraBasisElement> basis_;
  std::vector<int> idempotents_;
  std::vector<SparseVec> mult_;
  std::vector<SparseVec> diff_;
  std::vector<std::vector<int>> right_ideal_;
  std::map<std::tuple<int, int, int>, std::vector<int>> blocks_;
  ValidationReport report_;
};

using AlgebraPtr = std::shared_ptr<const DgAlgebra>;

}  // namespace dgforge
