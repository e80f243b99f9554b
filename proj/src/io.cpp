#include "dgforge/io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dgforge/corpus.hpp"
#include "dgforge/error.hpp"

namespace dgforge::io {

namespace {

[[noreturn]] void schema(const std::string& message) { throw Error(ErrorKind::Schema, message); }

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(where + ": missing key '" + key + "'");
  return *it;
}

const Json& array_member(const Json& obj, const char* key, const std::string& where,
                         bool optional = false) {
  static const Json empty = Json::array();
  if (optional && obj.is_object() && !obj.contains(key)) return empty;
  const Json& v = member(obj, key, where);
  if (!v.is_array()) schema(where + ": '" + key + "' must be an array");
  return v;
}

int integer(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) schema(what + " must be an integer");
  auto x = v.get<long long>();
  if (x < -1000000 || x > 1000000) schema(what + " is out of range");
  return static_cast<int>(x);
}

std::string text(const Json& v, const std::string& what) {
  if (!v.is_string()) schema(what + " must be a string");
  return v.get<std::string>();
}

Scalar coefficient_of(const Json& v, FieldSpec field, const std::string& where) {
  if (v.is_number_integer()) return Scalar(field, v.get<long>());
  if (!v.is_string()) schema(where + ": coefficient must be a string or an integer");
  try {
    return Scalar::parse(field, v.get<std::string>());
  } catch (const Error& e) {
    schema(where + ": " + e.what());
  }
}

// A name from the table, or an integer position below `count`.
int lookup(const Json& v, const std::map<std::string, int>& names, int count,
           const std::string& what) {
  if (v.is_number_integer()) {
    int i = integer(v, what);
    if (i < 0 || i >= count) schema(what + " index " + std::to_string(i) + " is out of range");
    return i;
  }
  std::string name = text(v, what);
  auto it = names.find(name);
  if (it == names.end()) schema(what + " '" + name + "' is unknown");
  return it->second;
}

SparseVec combination(const Json& terms, const char* key, const std::map<std::string, int>& names,
                      int count, FieldSpec field, const std::string& where) {
  if (!terms.is_array()) schema(where + ": a linear combination must be an array");
  SparseVec out;
  for (const auto& t : terms) {
    int i = lookup(member(t, key, where), names, count, where + " element");
    axpy(out, coefficient_of(member(t, "coef", where), field, where), unit_vec(field, i));
  }
  return out;
}

Json emit_combination(const SparseVec& v, const char* key,
                      const std::function<std::string(int)>& name) {
  SparseVec sorted = v;
  std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  Json out = Json::array();
  for (const auto& t : sorted)
    if (!t.coef.is_zero()) out.push_back({{key, name(t.index)}, {"coef", t.coef.to_string()}});
  return out;
}

Json emit_field(FieldSpec f) {
  if (f.is_rationals()) return "Q";
  return Json{{"Fp", f.characteristic()}};
}

FieldSpec parse_field(const Json& v) {
  if (v.is_string() && v.get<std::string>() == "Q") return FieldSpec::rationals();
  if (v.is_object() && v.size() == 1 && v.contains("Fp")) {
    const Json& p = v["Fp"];
    if (!p.is_number_integer() || p.get<long long>() < 2)
      throw Error(ErrorKind::InvalidField, "Fp needs an integer characteristic");
    return FieldSpec::prime(p.get<std::uint64_t>());
  }
  schema("field must be \"Q\" or {\"Fp\": p}");
}

std::map<std::string, int> idempotent_names(const DgAlgebra& a) {
  std::map<std::string, int> out;
  for (int i = 0; i < a.num_idempotents(); ++i) out[a.element(a.idempotents()[i]).name] = i;
  return out;
}

std::map<std::string, int> algebra_names(const DgAlgebra& a) {
  std::map<std::string, int> out;
  for (int i = 0; i < a.dim(); ++i) out[a.element(i).name] = i;
  return out;
}

AlgebraPtr resolve_algebra(const Json& ref, const std::filesystem::path& base_dir) {
  if (ref.is_object()) return parse_algebra(ref);
  std::string name = text(ref, "algebra reference");
  if (auto a = corpus::by_name(name)) return a;
  std::filesystem::path p = base_dir / name;
  if (!std::filesystem::exists(p)) throw Error(ErrorKind::FileNotFound, "unknown algebra '" + name + "'");
  Document d = parse_document(read_json(p), p.parent_path(), p.stem().string());
  if (d.kind != DocumentKind::Algebra) schema("'" + name + "' is not an algebra document");
  return d.algebra;
}

Json algebra_reference(const DgAlgebra& a) {
  Json inline_doc = emit_algebra(a);
  if (auto builtin = corpus::by_name(a.name()); builtin && emit_algebra(*builtin) == inline_doc)
    return a.name();
  return inline_doc;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    schema(e.what());
  }
}

}  // namespace

std::string to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Algebra: return "algebra";
    case DocumentKind::Module: return "module";
    case DocumentKind::Twisted: return "twisted";
  }
  return "?";
}

DocumentKind document_kind(const Json& doc) {
  if (!doc.is_object()) schema("a document must be a JSON object");
  const bool twisted = doc.contains("cells");
  const bool algebra = doc.contains("idempotents") || doc.contains("field");
  const bool module = doc.contains("algebra") && doc.contains("basis") && !twisted;
  if (twisted + algebra + module != 1) schema("cannot tell the document kind from its keys");
  if (twisted) return DocumentKind::Twisted;
  return algebra ? DocumentKind::Algebra : DocumentKind::Module;
}

AlgebraPtr parse_algebra(const Json& doc, const std::string& fallback_name) {
  return guarded([&] {
    const std::string where = "algebra";
    std::string name = fallback_name;
    if (doc.is_object() && doc.contains("name")) name = text(doc["name"], "algebra name");
    FieldSpec field = parse_field(member(doc, "field", where));
    const Json& basis_doc = array_member(doc, "basis", where);

    std::map<std::string, int> names;
    for (const auto& b : basis_doc) {
      std::string n = text(member(b, "name", where + " basis"), "basis name");
      if (!names.emplace(n, static_cast<int>(names.size())).second) schema("duplicate basis name '" + n + "'");
    }
    std::vector<int> idempotents;
    std::map<std::string, int> idem_names;
    for (const auto& e : array_member(doc, "idempotents", where)) {
      int b = lookup(e, names, static_cast<int>(names.size()), "idempotent");
      if (std::find(idempotents.begin(), idempotents.end(), b) != idempotents.end())
        schema("idempotent listed twice");
      idem_names[basis_doc[b]["name"].get<std::string>()] = static_cast<int>(idempotents.size());
      idempotents.push_back(b);
    }
    const int r = static_cast<int>(idempotents.size());
    std::vector<AlgebraBasisElement> basis;
    for (const auto& b : basis_doc) {
      std::string n = b["name"].get<std::string>();
      basis.push_back({n, integer(member(b, "deg", where + " basis"), "degree of '" + n + "'"),
                       lookup(member(b, "src", where + " basis"), idem_names, r, "src of '" + n + "'"),
                       lookup(member(b, "tgt", where + " basis"), idem_names, r, "tgt of '" + n + "'")});
    }
    const int n = static_cast<int>(basis.size());
    std::vector<ProductRule> mult;
    for (const auto& row : array_member(doc, "mult", where, true)) {
      if (!row.is_array() || row.size() != 3) schema("mult entries are [a, b, combination]");
      mult.push_back({lookup(row[0], names, n, "mult factor"), lookup(row[1], names, n, "mult factor"),
                      combination(row[2], "c", names, n, field, "mult")});
    }
    std::vector<DifferentialRule> diff;
    for (const auto& row : array_member(doc, "diff", where, true)) {
      if (!row.is_array() || row.size() != 2) schema("diff entries are [a, combination]");
      diff.push_back({lookup(row[0], names, n, "diff source"), combination(row[1], "c", names, n, field, "diff")});
    }
    return std::make_shared<const DgAlgebra>(name, field, std::move(basis), std::move(idempotents),
                                             std::move(mult), std::move(diff));
  });
}

ModulePtr parse_module(const Json& doc, const std::filesystem::path& base_dir) {
  return guarded([&] {
    const std::string where = "module";
    AlgebraPtr alg = resolve_algebra(member(doc, "algebra", where), base_dir);
    const FieldSpec field = alg->field();
    const auto idem = idempotent_names(*alg);
    const auto anames = algebra_names(*alg);
    std::vector<ModuleBasisElement> basis;
    std::map<std::string, int> names;
    for (const auto& b : array_member(doc, "basis", where)) {
      std::string n = text(member(b, "name", where + " basis"), "basis name");
      if (!names.emplace(n, static_cast<int>(basis.size())).second) schema("duplicate basis name '" + n + "'");
      basis.push_back({n, integer(member(b, "deg", where + " basis"), "degree of '" + n + "'"),
                       lookup(member(b, "idem", where + " basis"), idem, alg->num_idempotents(),
                              "idem of '" + n + "'")});
    }
    const int n = static_cast<int>(basis.size());
    std::vector<SparseVec> diff(n);
    std::vector<bool> seen(n, false);
    for (const auto& row : array_member(doc, "diff", where, true)) {
      if (!row.is_array() || row.size() != 2) schema("diff entries are [m, combination]");
      int m = lookup(row[0], names, n, "diff source");
      if (seen[m]) schema("diff of '" + basis[m].name + "' listed twice");
      seen[m] = true;
      diff[m] = combination(row[1], "c", names, n, field, "diff");
    }
    std::vector<ActionRule> action;
    for (const auto& row : array_member(doc, "action", where, true)) {
      if (!row.is_array() || row.size() != 3) schema("action entries are [m, a, combination]");
      action.push_back({lookup(row[0], names, n, "action element"),
                        lookup(row[1], anames, alg->dim(), "action algebra element"),
                        combination(row[2], "c", names, n, field, "action")});
    }
    return share(DgModule(alg, std::move(basis), std::move(diff), action));
  });
}

TwistedComplex parse_twisted(const Json& doc, const std::filesystem::path& base_dir) {
  return guarded([&] {
    const std::string where = "twisted";
    AlgebraPtr alg = resolve_algebra(member(doc, "algebra", where), base_dir);
    const auto idem = idempotent_names(*alg);
    const auto anames = algebra_names(*alg);
    std::vector<Cell> cells;
    for (const auto& c : array_member(doc, "cells", where))
      cells.push_back({lookup(member(c, "idem", "cell"), idem, alg->num_idempotents(), "cell idem"),
                       integer(member(c, "shift", "cell"), "cell shift")});
    const int n = static_cast<int>(cells.size());
    CellMatrix delta(n, n);
    std::map<std::string, int> none;
    for (const auto& row : array_member(doc, "delta", where, true)) {
      if (!row.is_array() || row.size() != 3) schema("delta entries are [s, t, combination]");
      int s = lookup(row[0], none, n, "delta source cell");
      int t = lookup(row[1], none, n, "delta target cell");
      if (!delta.at(t, s).empty()) schema("delta entry listed twice");
      delta.at(t, s) = combination(row[2], "elem", anames, alg->dim(), alg->field(), "delta");
    }
    return TwistedComplex(alg, std::move(cells), std::move(delta));
  });
}

Document parse_document(const Json& doc, const std::filesystem::path& base_dir,
                        const std::string& fallback_name) {
  Document out;
  out.kind = document_kind(doc);
  switch (out.kind) {
    case DocumentKind::Algebra:
      out.algebra = parse_algebra(doc, fallback_name);
      break;
    case DocumentKind::Module:
      out.module = parse_module(doc, base_dir);
      out.algebra = out.module->algebra();
      break;
    case DocumentKind::Twisted:
      out.twisted = parse_twisted(doc, base_dir);
      out.algebra = out.twisted->algebra();
      break;
  }
  return out;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::exception& e) {
    schema(path.string() + ": " + e.what());
  }
}

Document load_document(const std::string& path) {
  const std::string prefix = "builtin:";
  if (path.rfind(prefix, 0) == 0) {
    auto a = corpus::by_name(path.substr(prefix.size()));
    if (!a) throw Error(ErrorKind::FileNotFound, "no builtin algebra '" + path.substr(prefix.size()) + "'");
    return Document{DocumentKind::Algebra, a, nullptr, std::nullopt};
  }
  std::filesystem::path p(path);
  return parse_document(read_json(p), p.parent_path(), p.stem().string());
}

Json emit_algebra(const DgAlgebra& a) {
  auto name = [&a](int i) { return a.element(i).name; };
  auto idem = [&a](int i) { return a.element(a.idempotents()[i]).name; };
  Json basis = Json::array();
  for (const auto& b : a.basis())
    basis.push_back({{"name", b.name}, {"deg", b.degree}, {"src", idem(b.source)}, {"tgt", idem(b.target)}});
  Json idempotents = Json::array();
  for (int e : a.idempotents()) idempotents.push_back(name(e));
  Json mult = Json::array();
  for (const auto& rule : a.listed_products())
    mult.push_back({name(rule.left), name(rule.right), emit_combination(rule.value, "c", name)});
  Json diff = Json::array();
  for (int i = 0; i < a.dim(); ++i)
    if (!a.differential(i).empty()) diff.push_back({name(i), emit_combination(a.differential(i), "c", name)});
  return Json{{"name", a.name()}, {"field", emit_field(a.field())}, {"basis", basis},
              {"idempotents", idempotents}, {"mult", mult}, {"diff", diff}};
}

Json emit_module(const DgModule& m) {
  const auto& a = *m.algebra();
  auto name = [&m](int i) { return m.element(i).name; };
  auto aname = [&a](int i) { return a.element(i).name; };
  Json basis = Json::array();
  for (const auto& b : m.basis())
    basis.push_back({{"name", b.name}, {"deg", b.degree}, {"idem", a.element(a.idempotents()[b.idempotent]).name}});
  Json diff = Json::array();
  for (int i = 0; i < m.dim(); ++i)
    if (!m.differential(i).empty()) diff.push_back({name(i), emit_combination(m.differential(i), "c", name)});
  Json action = Json::array();
  for (const auto& rule : m.listed_action())
    action.push_back({name(rule.element), aname(rule.algebra), emit_combination(rule.value, "c", name)});
  return Json{{"algebra", algebra_reference(a)}, {"basis", basis}, {"diff", diff}, {"action", action}};
}

Json emit_twisted(const TwistedComplex& x) {
  const auto& a = *x.algebra();
  Json cells = Json::array();
  for (const auto& c : x.cells())
    cells.push_back({{"idem", a.element(a.idempotents()[c.idempotent]).name}, {"shift", c.shift}});
  Json delta = Json::array();
  auto aname = [&a](int i) { return a.element(i).name; };
  for (int s = 0; s < x.size(); ++s)
    for (int t = 0; t < x.size(); ++t) {
      Json terms = emit_combination(x.delta().at(t, s), "elem", aname);
      if (!terms.empty()) delta.push_back({s, t, terms});
    }
  return Json{{"algebra", algebra_reference(a)}, {"cells", cells}, {"delta", delta}};
}

Json emit_document(const Document& doc) {
  switch (doc.kind) {
    case DocumentKind::Algebra: return emit_algebra(*doc.algebra);
    case DocumentKind::Module: return emit_module(*doc.module);
    case DocumentKind::Twisted: return emit_twisted(*doc.twisted);
  }
  return nullptr;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json emit_scalar(const Scalar& s) { return s.to_string(); }

Json emit_matrix(const Matrix& m) {
  Json entries = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) entries.push_back({r, c, m(r, c).to_string()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json emit_cell_matrix(const DgAlgebra& a, const CellMatrix& m) {
  auto aname = [&a](int i) { return a.element(i).name; };
  Json out = Json::array();
  for (int s = 0; s < m.cols(); ++s)
    for (int t = 0; t < m.rows(); ++t) {
      Json terms = emit_combination(m.at(t, s), "elem", aname);
      if (!terms.empty()) out.push_back({s, t, terms});
    }
  return out;
}

Json emit_homology(const HomologyTable& h) {
  Json out = Json::array();
  for (const auto& [q, dims] : h.dims) out.push_back({{"deg", q}, {"dims", dims}});
  return out;
}

}  // namespace dgforge::io
