#include "dgforge/algebra.hpp"

#include <algorithm>
#include <set>

#include "dgforge/error.hpp"

namespace dgforge {

namespace {

std::string show(const DgAlgebra& a, const SparseVec& v) {
  if (v.empty()) return "0";
  std::string s;
  for (const auto& t : v) {
    if (!s.empty()) s += " + ";
    s += t.coef.to_string() + "*" + a.element(t.index).name;
  }
  return s;
}

}  // namespace

DgAlgebra::DgAlgebra(std::string name, FieldSpec field,
                     std::vector<AlgebraBasisElement> basis, std::vector<int> idempotents,
                     std::vector<ProductRule> products,
                     std::vector<DifferentialRule> differentials)
    : name_(std::move(name)),
      field_(field),
      basis_(std::move(basis)),
      idempotents_(std::move(idempotents)) {
  const int n = dim();
  const int r = num_idempotents();
  if (r == 0) throw Error(ErrorKind::InvalidAlgebra, "the zero algebra (no idempotents) is rejected");
  for (const auto& b : basis_) {
    if (b.source < 0 || b.source >= r || b.target < 0 || b.target >= r) {
      throw Error(ErrorKind::InvalidAlgebra,
                  "basis element '" + b.name + "' has an idempotent index out of range");
    }
  }
  std::set<std::string> names;
  for (const auto& b : basis_) {
    if (!names.insert(b.name).second) {
      throw Error(ErrorKind::InvalidAlgebra, "duplicate basis name '" + b.name + "'");
    }
  }
  for (int e : idempotents_) {
    if (e < 0 || e >= n) throw Error(ErrorKind::InvalidAlgebra, "idempotent index out of range");
  }
  auto check_vec = [n](const SparseVec& v) {
    for (const auto& t : v)
      if (t.index < 0 || t.index >= n)
        throw Error(ErrorKind::InvalidAlgebra, "linear combination refers to an unknown basis element");
  };

  mult_.assign(static_cast<std::size_t>(n) * n, {});
  diff_.assign(n, {});
  std::vector<bool> listed(static_cast<std::size_t>(n) * n, false);
  for (auto& rule : products) {
    if (rule.left < 0 || rule.left >= n || rule.right < 0 || rule.right >= n) {
      throw Error(ErrorKind::InvalidAlgebra, "product refers to an unknown basis element");
    }
    check_vec(rule.value);
    std::size_t k = static_cast<std::size_t>(rule.left) * n + rule.right;
    if (listed[k]) {
      report_.violations.push_back("product " + basis_[rule.left].name + "*" +
                                   basis_[rule.right].name + " listed twice");
    }
    listed[k] = true;
    mult_[k] = std::move(rule.value);
  }
  std::vector<bool> diff_listed(n, false);
  for (auto& rule : differentials) {
    if (rule.element < 0 || rule.element >= n) {
      throw Error(ErrorKind::InvalidAlgebra, "differential refers to an unknown basis element");
    }
    check_vec(rule.value);
    if (diff_listed[rule.element]) {
      report_.violations.push_back("differential of " + basis_[rule.element].name + " listed twice");
    }
    diff_listed[rule.element] = true;
    diff_[rule.element] = std::move(rule.value);
  }

  // Products with idempotents are forced by the basis data.
  for (int i = 0; i < r; ++i) {
    const int e = idempotents_[i];
    for (int b = 0; b < n; ++b) {
      SparseVec left = basis_[b].target == i ? unit_vec(field_, b) : SparseVec{};
      SparseVec right = basis_[b].source == i ? unit_vec(field_, b) : SparseVec{};
      std::size_t kl = static_cast<std::size_t>(e) * n + b;
      std::size_t kr = static_cast<std::size_t>(b) * n + e;
      if (listed[kl] && mult_[kl] != left) {
        report_.violations.push_back("product " + basis_[e].name + "*" + basis_[b].name +
                                     " contradicts the idempotent-adapted basis");
      }
      if (listed[kr] && mult_[kr] != right) {
        report_.violations.push_back("product " + basis_[b].name + "*" + basis_[e].name +
                                     " contradicts the idempotent-adapted basis");
      }
      mult_[kl] = left;
      mult_[kr] = right;
    }
  }

  right_ideal_.assign(r, {});
  for (int b = 0; b < n; ++b) {
    right_ideal_[basis_[b].target].push_back(b);
    blocks_[{basis_[b].target, basis_[b].source, basis_[b].degree}].push_back(b);
  }
  validate();
}

int DgAlgebra::index_of(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].name == name) return i;
  return -1;
}

SparseVec DgAlgebra::multiply(const SparseVec& x, const SparseVec& y) const {
  SparseBuilder out;
  for (const auto& a : x) {
    for (const auto& b : y) {
      const SparseVec& p = product(a.index, b.index);
      if (!p.empty()) out.add(p, a.coef * b.coef);
    }
  }
  return out.take();
}

SparseVec DgAlgebra::apply_differential(const SparseVec& x) const {
  SparseBuilder out;
  for (const auto& a : x) out.add(diff_[a.index], a.coef);
  return out.take();
}

const std::vector<int>& DgAlgebra::block_basis(int target, int source, int degree) const {
  static const std::vector<int> empty;
  auto it = blocks_.find({target, source, degree});
  return it == blocks_.end() ? empty : it->second;
}

std::optional<int> DgAlgebra::degree_of(const SparseVec& x) const {
  if (x.empty()) return std::nullopt;
  int d = basis_[x.front().index].degree;
  for (const auto& t : x)
    if (basis_[t.index].degree != d) return std::nullopt;
  return d;
}

int DgAlgebra::min_degree() const {
  int d = basis_.front().degree;
  for (const auto& b : basis_) d = std::min(d, b.degree);
  return d;
}

int DgAlgebra::max_degree() const {
  int d = basis_.front().degree;
  for (const auto& b : basis_) d = std::max(d, b.degree);
  return d;
}

void DgAlgebra::require_valid() const {
  if (!report_.valid) {
    std::string msg = "algebra '" + name_ + "' is not a valid dg algebra";
    if (!report_.violations.empty()) msg += ": " + report_.violations.front();
    throw Error(ErrorKind::InvalidAlgebra, msg);
  }
}

void DgAlgebra::require_class_p(const std::string& operation) const {
  require_valid();
  if (!report_.class_p) {
    std::string msg = operation + " requires a class P algebra; '" + name_ + "' is not";
    if (!report_.class_p_failures.empty()) msg += " (" + report_.class_p_failures.front() + ")";
    throw Error(ErrorKind::ClassPRequired, msg);
  }
}

std::vector<ProductRule> DgAlgebra::listed_products() const {
  std::set<int> idem(idempotents_.begin(), idempotents_.end());
  std::vector<ProductRule> out;
  for (int a = 0; a < dim(); ++a) {
    if (idem.count(a)) continue;
    for (int b = 0; b < dim(); ++b) {
      if (idem.count(b)) continue;
      if (!product(a, b).empty()) out.push_back({a, b, product(a, b)});
    }
  }
  return out;
}

void DgAlgebra::validate() {
  auto& v = report_.violations;
  const int n = dim();
  const int r = num_idempotents();

  for (int i = 0; i < r; ++i) {
    const auto& e = basis_[idempotents_[i]];
    if (e.degree != 0 || e.source != i || e.target != i) {
      v.push_back("idempotent '" + e.name + "' must have degree 0 and source = target = " +
                  std::to_string(i));
    }
    if (!diff_[idempotents_[i]].empty()) v.push_back("d(" + e.name + ") must vanish");
  }
  {
    std::set<int> seen(idempotents_.begin(), idempotents_.end());
    if (static_cast<int>(seen.size()) != r) v.push_back("idempotents listed twice");
  }

  // Grading and block structure of products.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const SparseVec& p = product(a, b);
      if (p.empty()) continue;
      if (basis_[a].source != basis_[b].target) {
        v.push_back("product " + basis_[a].name + "*" + basis_[b].name +
                    " must vanish (idempotents do not match)");
        continue;
      }
      for (const auto& t : p) {
        const auto& c = basis_[t.index];
        if (c.degree != basis_[a].degree + basis_[b].degree || c.target != basis_[a].target ||
            c.source != basis_[b].source) {
          v.push_back("product " + basis_[a].name + "*" + basis_[b].name +
                      " is not homogeneous in the expected block");
          break;
        }
      }
    }
  }
  // Grading of the differential.
  for (int a = 0; a < n; ++a) {
    for (const auto& t : diff_[a]) {
      const auto& c = basis_[t.index];
      if (c.degree != basis_[a].degree + 1 || c.source != basis_[a].source ||
          c.target != basis_[a].target) {
        v.push_back("d(" + basis_[a].name + ") is not of degree +1 in the same block");
        break;
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    SparseVec dd = apply_differential(diff_[a]);
    if (!dd.empty()) v.push_back("d(d(" + basis_[a].name + ")) = " + show(*this, dd) + " != 0");
  }
  // Associativity.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (basis_[a].source != basis_[b].target) continue;
      for (int c = 0; c < n; ++c) {
        if (basis_[b].source != basis_[c].target) continue;
        SparseVec lhs = multiply(product(a, b), unit_vec(field_, c));
        SparseVec rhs = multiply(unit_vec(field_, a), product(b, c));
        if (lhs != rhs) {
          v.push_back("associativity fails on (" + basis_[a].name + ", " + basis_[b].name +
                      ", " + basis_[c].name + ")");
        }
      }
    }
  }
  // Leibniz: d(ab) = d(a) b + (-1)^{|a|} a d(b).
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      SparseVec lhs = apply_differential(product(a, b));
      SparseVec rhs = multiply(diff_[a], unit_vec(field_, b));
      axpy(rhs, sign_scalar(field_, basis_[a].degree), multiply(unit_vec(field_, a), diff_[b]));
      if (lhs != rhs) {
        v.push_back("Leibniz rule fails on (" + basis_[a].name + ", " + basis_[b].name + ")");
      }
    }
  }

  report_.valid = v.empty();
  if (!report_.valid) return;

  auto& f = report_.class_p_failures;
  std::set<int> idem(idempotents_.begin(), idempotents_.end());
  for (int a = 0; a < n; ++a) {
    const auto& b = basis_[a];
    if (b.degree < 0) f.push_back("'" + b.name + "' has negative degree");
    if (b.degree == 0 && !idem.count(a)) {
      f.push_back("degree-0 part is not spanned by the idempotents ('" + b.name + "')");
    }
  }
  report_.class_p = f.empty();
}

}  // namespace dgforge
