#pragma once

// JSON documents for algebras, modules and twisted complexes.
//
//   algebra: {name?, field: "Q" | {"Fp": p}, basis: [{name, deg, src, tgt}],
//             idempotents: [names], mult: [[a, b, [{c, coef}]]], diff: [[a, [{c, coef}]]]}
//   module:  {algebra, basis: [{name, deg, idem}], diff: [[m, [{c, coef}]]],
//             action: [[m, a, [{c, coef}]]]}
//   twisted: {algebra, cells: [{idem, shift}], delta: [[s, t, [{elem, coef}]]]}
//
// src, tgt and idem name an idempotent (an integer position is accepted on
// input); coefficients are strings such as "-3/2" (integers are accepted on
// input). The algebra of a module or twisted document is a builtin name, a
// path relative to the document, or an inline algebra object.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "dgforge/algebra.hpp"
#include "dgforge/module.hpp"
#include "dgforge/twisted.hpp"

namespace dgforge::io {

using Json = nlohmann::json;

enum class DocumentKind { Algebra, Module, Twisted };
std::string to_string(DocumentKind kind);

struct Document {
  DocumentKind kind = DocumentKind::Algebra;
  AlgebraPtr algebra;
  ModulePtr module;                      // kind == Module
  std::optional<TwistedComplex> twisted;  // kind == Twisted
};

// Error(Schema) unless the keys identify exactly one kind.
DocumentKind document_kind(const Json& doc);

AlgebraPtr parse_algebra(const Json& doc, const std::string& fallback_name = "algebra");
ModulePtr parse_module(const Json& doc, const std::filesystem::path& base_dir = {});
TwistedComplex parse_twisted(const Json& doc, const std::filesystem::path& base_dir = {});
Document parse_document(const Json& doc, const std::filesystem::path& base_dir = {},
                        const std::string& fallback_name = "algebra");

// "builtin:NAME" loads a corpus algebra. Error(FileNotFound) or Error(Schema).
Document load_document(const std::string& path);
Json read_json(const std::filesystem::path& path);

Json emit_algebra(const DgAlgebra& algebra);
Json emit_module(const DgModule& module);
Json emit_twisted(const TwistedComplex& x);
Json emit_document(const Document& doc);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

// Sparse serializations used in reports.
Json emit_scalar(const Scalar& s);
Json emit_matrix(const Matrix& m);           // {rows, cols, entries: [[r, c, coef]]}
Json emit_cell_matrix(const DgAlgebra& algebra, const CellMatrix& m);  // [[s, t, [{elem, coef}]]]
Json emit_homology(const HomologyTable& h);  // [{deg, dims}]

}  // namespace dgforge::io
