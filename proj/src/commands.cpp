#include "dgforge/commands.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "dgforge/cache.hpp"
#include "dgforge/error.hpp"
#include "dgforge/tower.hpp"
#include "dgforge/tstruct.hpp"
#include "dgforge/weight.hpp"

namespace dgforge {

using io::Json;

namespace {

ModulePtr as_module(const io::Document& d) {
  switch (d.kind) {
    case io::DocumentKind::Module: return d.module;
    case io::DocumentKind::Twisted: return share(realize(*d.twisted));
    case io::DocumentKind::Algebra: return share(regular_module(d.algebra));
  }
  return nullptr;
}

TwistedComplex as_twisted(const io::Document& d, const std::string& command) {
  if (d.kind == io::DocumentKind::Twisted) return *d.twisted;
  if (d.kind == io::DocumentKind::Algebra) {
    TwistedComplex out = TwistedComplex::empty(d.algebra);
    for (int i = 0; i < d.algebra->num_idempotents(); ++i)
      out = direct_sum(out, TwistedComplex::cell(d.algebra, i));
    return out;
  }
  throw Error(ErrorKind::Schema, command + " expects a twisted complex or an algebra document");
}

std::string idem_name(const DgAlgebra& a, int i) { return a.element(a.idempotents()[i]).name; }

Json names_of(const DgModule& m, const std::vector<std::size_t>& indices) {
  Json out = Json::array();
  for (auto i : indices) out.push_back(m.element(static_cast<int>(i)).name);
  return out;
}

Json emit_cochain(const DgModule& m, const ModuleCochain& c) {
  Json out = Json::array();
  for (std::size_t s = 0; s < c.size(); ++s) {
    SparseVec v = c[s];
    std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
    Json terms = Json::array();
    for (const auto& t : v)
      if (!t.coef.is_zero()) terms.push_back({{"c", m.element(t.index).name}, {"coef", t.coef.to_string()}});
    if (!terms.empty()) out.push_back({s, terms});
  }
  return out;
}

Json emit_cells(const TwistedComplex& x) {
  Json out = Json::array();
  for (const auto& c : x.cells()) out.push_back({{"idem", idem_name(*x.algebra(), c.idempotent)}, {"shift", c.shift}});
  return out;
}

Json emit_minimalize_certificates(const MinimalizeResult& r) {
  const auto& a = *r.minimal.algebra();
  const auto& c = r.certificates;
  return Json{{"to_minimal_closed", c.to_minimal_closed},
              {"from_minimal_closed", c.from_minimal_closed},
              {"retraction", c.retraction},
              {"homotopy", c.homotopy},
              {"quasi_iso", c.quasi_iso},
              {"all", c.all()},
              {"to_minimal", io::emit_cell_matrix(a, r.to_minimal)},
              {"from_minimal", io::emit_cell_matrix(a, r.from_minimal)},
              {"homotopy_matrix", io::emit_cell_matrix(a, r.homotopy)}};
}

const io::Document& single(const std::vector<io::Document>& docs, const std::string& command) {
  if (docs.size() != 1) throw Error(ErrorKind::Precondition, command + " takes exactly one input");
  return docs.front();
}

int required(const std::optional<int>& v, const char* flag, const std::string& command) {
  if (!v) throw Error(ErrorKind::Precondition, command + " needs " + flag);
  return *v;
}

struct Report {
  Json certificates = Json::object();
  Json tables = Json::object();
  Json verified_ranges = Json::object();
};

Report cmd_validate(const io::Document& d) {
  Report r;
  switch (d.kind) {
    case io::DocumentKind::Algebra: {
      const auto& a = *d.algebra;
      const auto& v = a.report();
      r.certificates = {{"valid", v.valid}, {"class_p", v.class_p}};
      r.tables = {{"kind", "algebra"}, {"name", a.name()}, {"field", a.field().to_string()},
                  {"dim", a.dim()}, {"idempotents", a.num_idempotents()},
                  {"violations", v.violations}, {"class_p_failures", v.class_p_failures}};
      if (v.class_p) {
        Json summands = Json::array();
        for (const auto& s : indecomposable_summands(d.algebra))
          summands.push_back({{"idem", idem_name(a, s.idempotent)}, {"h0_end_dim", s.h0_end_dim},
                              {"indecomposable", s.indecomposable}});
        r.tables["summands"] = summands;
      }
      break;
    }
    case io::DocumentKind::Module: {
      const auto& m = *d.module;
      r.certificates = {{"valid", m.is_valid()}};
      r.tables = {{"kind", "module"}, {"dim", m.dim()}, {"violations", m.violations()}};
      if (m.is_valid()) r.tables["homology"] = io::emit_homology(homology(m));
      break;
    }
    case io::DocumentKind::Twisted: {
      const auto& x = *d.twisted;
      r.certificates = {{"valid", x.is_valid()}, {"minimal", x.is_valid() && is_minimal(x)}};
      r.tables = {{"kind", "twisted"}, {"cells", x.size()}, {"violations", x.violations()}};
      break;
    }
  }
  return r;
}

Report cmd_homology(const io::Document& d) {
  Report r;
  ModulePtr m = as_module(d);
  m->require_valid();
  auto h = homology(*m);
  r.certificates = {{"valid", true}};
  r.tables = {{"homology", io::emit_homology(h)}, {"total", h.total()}};
  if (!h.empty()) r.tables["support"] = {*h.bottom(), *h.top()};
  return r;
}

Report cmd_wtrunc(const io::Document& d, int p) {
  Report r;
  ModulePtr m = as_module(d);
  auto t = weight_truncate(m, p);
  const auto& c = t.certificates;
  r.certificates = {{"gt_member", c.gt_member}, {"le_member", c.le_member},
                    {"inclusion_iso", c.inclusion_iso}, {"projection_iso", c.projection_iso},
                    {"maps_closed", c.maps_closed}, {"short_exact", c.short_exact}, {"all", c.all()},
                    {"inclusion", io::emit_matrix(t.inclusion.matrix)},
                    {"projection", io::emit_matrix(t.projection.matrix)}};
  r.tables = {{"level", p},
              {"source", io::emit_module(*m)},
              {"sigma_gt", io::emit_module(*t.sigma_gt)},
              {"sigma_le", io::emit_module(*t.sigma_le)},
              {"gt_basis", names_of(*m, t.gt_indices)},
              {"le_basis", names_of(*m, t.le_indices)},
              {"source_homology", io::emit_homology(t.source_homology)},
              {"gt_homology", io::emit_homology(t.gt_homology)},
              {"le_homology", io::emit_homology(t.le_homology)},
              {"membership", to_string(w_membership(*m, p))}};
  return r;
}

Report cmd_wfilt(const io::Document& d) {
  Report r;
  ModulePtr m = as_module(d);
  auto f = weight_filtration(m);
  Json layers = Json::array();
  Json concentrated = Json::array();
  for (const auto& l : f.layers) {
    layers.push_back({{"deg", l.degree}, {"multiplicities", l.multiplicities}, {"dim", l.layer->dim()}});
    concentrated.push_back(l.concentrated);
  }
  Json steps = Json::array();
  for (std::size_t k = 0; k < f.steps.size(); ++k)
    steps.push_back({{"level", f.levels[k]}, {"basis", names_of(*m, f.steps[k])}});
  r.certificates = {{"nested", f.nested}, {"ends_acyclic", f.ends_acyclic},
                    {"layers_match_homology", f.layers_match_homology},
                    {"layers_concentrated", concentrated}, {"all", f.all()}};
  r.tables = {{"homology", io::emit_homology(f.homology)}, {"steps", steps}, {"layers", layers}};
  return r;
}

Report cmd_ttrunc(const io::Document& d, int n) {
  Report r;
  TwistedComplex x = as_twisted(d, "ttrunc");
  auto t = t_truncate(x, n);
  auto b = is_bounded(x);
  r.certificates = {{"closed", t.closed}, {"strict_triangle", t.strict_triangle},
                    {"orthogonal", t.orthogonal}, {"all", t.all()},
                    {"minimalize", emit_minimalize_certificates(t.minimal)},
                    {"connecting", io::emit_cell_matrix(*x.algebra(), t.connecting)},
                    {"bounded", b.bounded}};
  r.tables = {{"level", n},
              {"minimal", io::emit_twisted(t.minimal.minimal)},
              {"le_cells", t.le_cells},
              {"gt_cells", t.gt_cells},
              {"x_le", io::emit_twisted(t.x_le)},
              {"x_gt", io::emit_twisted(t.x_gt)},
              {"membership", to_string(t_membership(x, n))}};
  if (b.min_shift) r.tables["shift_range"] = {*b.min_shift, *b.max_shift};
  return r;
}

Report cmd_heart(const io::Document& d) {
  Report r;
  TwistedComplex x = as_twisted(d, "heart");
  auto b = is_bounded(x);
  auto h0 = h0_t(x);
  Json by_shift = Json::array();
  if (b.min_shift)
    for (int n = -*b.max_shift; n <= -*b.min_shift; ++n) {
      auto h = ht_n(x, n);
      if (h.length() == 0) continue;
      by_shift.push_back({{"n", n}, {"factors", h.factors}, {"length", h.length()},
                          {"object", io::emit_twisted(h.object)}});
    }
  auto f = koszul_fiber_functor(x);
  const auto le = t_membership(x, 0), ge = t_membership(x, -1);
  const bool in_heart = (le == TMembership::Le || le == TMembership::Both) &&
                        (ge == TMembership::Ge || ge == TMembership::Both);
  r.certificates = {{"fiber_matches_cells", f.matches_cells}, {"aisle_consistent", f.aisle_consistent},
                    {"in_heart", in_heart}};
  r.tables = {{"h0", {{"factors", h0.factors}, {"length", h0.length()}, {"object", io::emit_twisted(h0.object)}}},
              {"by_shift", by_shift},
              {"fiber_functor", io::emit_homology(f.dims)}};
  return r;
}

Report cmd_jh(const io::Document& d) {
  Report r;
  TwistedComplex x = as_twisted(d, "jh");
  auto j = jordan_holder(x);
  auto e = endomorphism_report(x);
  const auto& a = *x.algebra();
  Json factors = Json::object();
  Json names = Json::array();
  std::size_t length = 0;
  for (std::size_t i = 0; i < j.factors.size(); ++i) {
    names.push_back(idem_name(a, static_cast<int>(i)));
    if (j.factors[i] != 0) factors[std::to_string(i + 1)] = j.factors[i];
    length += j.factors[i];
  }
  r.certificates = {{"stable", j.stable},
                    {"factors_other_order", j.factors_other_order},
                    {"endomorphisms", {{"h0_dim", e.dim}, {"radical_dim", e.radical_dim},
                                       {"radical_nilpotent", e.radical_nilpotent}, {"local", e.local}}}};
  r.tables = {{"composition_factors", factors}, {"idempotents", names}, {"length", length}};
  return r;
}

Report cmd_dhom(const io::Document& from, const io::Document& to, std::pair<int, int> range, int budget) {
  Report r;
  ModulePtr m = as_module(from);
  ModulePtr y = as_module(to);
  auto t = derived_hom_windowed(m, y, range.first, range.second, budget);
  Json rows = Json::array();
  Json verified = Json::array();
  Json unverified = Json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"n", row.degree}, {"dim", row.dim}, {"verdict", to_string(row.verdict)}});
    (row.verified() ? verified : unverified).push_back(row.degree);
  }
  const auto& res = t.resolution;
  r.certificates = {{"resolution_complete", res.complete},
                    {"resolution_map", emit_cochain(*m, res.map)},
                    {"cone_homology", io::emit_homology(res.cone_homology)}};
  r.tables = {{"rows", rows}, {"resolution", io::emit_twisted(res.resolution)}, {"steps", res.steps}};
  r.verified_ranges = {{"verified", verified}, {"unverified", unverified}};
  r.verified_ranges["vanishing_above"] = t.vanishing_above ? Json(*t.vanishing_above) : Json(nullptr);
  r.verified_ranges["iso_below"] = res.iso_below ? Json(*res.iso_below) : Json(nullptr);
  r.verified_ranges["fiber_window"] =
      res.fiber_window ? Json{res.fiber_window->first, res.fiber_window->second} : Json(nullptr);
  return r;
}

Report cmd_smo(const std::vector<io::Document>& docs, std::pair<int, int> window, int budget) {
  Report r;
  std::vector<TwistedComplex> family;
  for (const auto& d : docs) {
    if (d.kind == io::DocumentKind::Algebra) {
      for (int i = 0; i < d.algebra->num_idempotents(); ++i) family.push_back(TwistedComplex::cell(d.algebra, i));
    } else {
      family.push_back(as_twisted(d, "smo-check"));
    }
  }
  if (family.empty()) throw Error(ErrorKind::Precondition, "smo-check needs at least one input");
  auto s = check_simple_minded(family, window.first, window.second, budget);
  const auto& a = *family.front().algebra();
  Json negative = Json::array();
  for (const auto& [i, j, t] : s.negative_extensions) negative.push_back({i, j, t});
  Json generated = Json::array();
  for (int i : s.generated) generated.push_back(idem_name(a, i));
  r.certificates = {{"condition_a", s.condition_a}, {"condition_b", s.condition_b},
                    {"condition_c", to_string(s.condition_c)}, {"hom0", s.hom0},
                    {"negative_extensions", negative}};
  r.tables = {{"family_size", family.size()}, {"generated", generated},
              {"objects_explored", s.objects_explored}};
  r.verified_ranges = {{"window", {window.first, window.second}}, {"budget", budget}};
  return r;
}

Report cmd_tower(const io::Document& d, int stages) {
  Report r;
  ModulePtr m = as_module(d);
  auto t = aisle_tower(m, stages);
  Json out = Json::array();
  for (const auto& s : t.stages) {
    Json surj = Json::array();
    for (const auto& e : s.surjectivity) surj.push_back({{"n", e.n}, {"rank", e.rank}, {"target", e.target}});
    out.push_back({{"index", s.index},
                   {"cells", emit_cells(s.x)},
                   {"x", io::emit_twisted(s.x)},
                   {"pi", emit_cochain(*m, s.pi)},
                   {"cone_homology", io::emit_homology(s.cone_homology)},
                   {"surjectivity", surj},
                   {"surjective", s.surjective},
                   {"attached", s.attached},
                   {"transition_vanishes", s.transition_vanishes ? Json(*s.transition_vanishes) : Json(nullptr)}});
  }
  r.certificates = {{"all_surjective", t.all_surjective()},
                    {"all_transitions_vanish", t.all_transitions_vanish()},
                    {"truncation_certified", t.truncation_certified},
                    {"quasi_iso", t.quasi_iso}};
  r.tables = {{"stages", out}};
  r.tables["stabilized_at"] = t.stabilized_at ? Json(*t.stabilized_at) : Json(nullptr);
  r.verified_ranges = {{"stages_computed", t.stages.size()}};
  return r;
}

Report cmd_minimalize(const io::Document& d, const std::string& order) {
  Report r;
  TwistedComplex x = as_twisted(d, "minimalize");
  EliminationOrder o;
  if (order == "first") o = EliminationOrder::First;
  else if (order == "last") o = EliminationOrder::Last;
  else throw Error(ErrorKind::Precondition, "--order must be first or last");
  auto m = minimalize(x, o);
  Json eliminated = Json::array();
  for (const auto& [s, t] : m.eliminated) eliminated.push_back({s, t});
  r.certificates = emit_minimalize_certificates(m);
  r.certificates["minimal"] = is_minimal(m.minimal);
  r.tables = {{"minimal", io::emit_twisted(m.minimal)}, {"eliminated", eliminated},
              {"cells_before", x.size()}, {"cells_after", m.minimal.size()}};
  return r;
}

Report cmd_resolve(const io::Document& d, int budget) {
  Report r;
  ModulePtr m = as_module(d);
  auto res = resolve(m, budget);
  r.certificates = {{"complete", res.complete}, {"map", emit_cochain(*m, res.map)},
                    {"cone_homology", io::emit_homology(res.cone_homology)}};
  r.tables = {{"resolution", io::emit_twisted(res.resolution)}, {"cells", emit_cells(res.resolution)},
              {"steps", res.steps}};
  r.verified_ranges["iso_below"] = res.iso_below ? Json(*res.iso_below) : Json(nullptr);
  r.verified_ranges["fiber_window"] =
      res.fiber_window ? Json{res.fiber_window->first, res.fiber_window->second} : Json(nullptr);
  r.verified_ranges["budget"] = budget;
  return r;
}

Json options_json(const CommandOptions& o) {
  Json out = Json::object();
  if (o.level) out["level"] = *o.level;
  if (o.stages) out["stages"] = *o.stages;
  if (o.budget) out["budget"] = *o.budget;
  if (o.range) out["range"] = {o.range->first, o.range->second};
  if (o.window) out["window"] = {o.window->first, o.window->second};
  if (o.command == "minimalize") out["order"] = o.order;
  return out;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"validate", "homology", "wtrunc", "wfilt", "ttrunc", "heart", "jh",
          "dhom", "smo-check", "tower", "minimalize", "resolve"};
}

Json run_command(const CommandOptions& options) {
  std::vector<io::Document> docs;
  for (const auto& path : options.inputs) docs.push_back(io::load_document(path));
  return run_command(options, docs, options.inputs);
}

Json run_command(const CommandOptions& o, const std::vector<io::Document>& docs,
                 const std::vector<std::string>& labels) {
  const std::string& c = o.command;
  Report r;
  if (c == "validate") r = cmd_validate(single(docs, c));
  else if (c == "homology") r = cmd_homology(single(docs, c));
  else if (c == "wtrunc") r = cmd_wtrunc(single(docs, c), required(o.level, "--level", c));
  else if (c == "wfilt") r = cmd_wfilt(single(docs, c));
  else if (c == "ttrunc") r = cmd_ttrunc(single(docs, c), required(o.level, "--level", c));
  else if (c == "heart") r = cmd_heart(single(docs, c));
  else if (c == "jh") r = cmd_jh(single(docs, c));
  else if (c == "dhom") {
    if (docs.size() != 2) throw Error(ErrorKind::Precondition, "dhom needs --from and --to");
    if (!o.range) throw Error(ErrorKind::Precondition, "dhom needs --range");
    r = cmd_dhom(docs[0], docs[1], *o.range, o.budget.value_or(8));
  } else if (c == "smo-check") r = cmd_smo(docs, o.window.value_or(std::pair{-1, 1}), o.budget.value_or(20));
  else if (c == "tower") r = cmd_tower(single(docs, c), required(o.stages, "--stages", c));
  else if (c == "minimalize") r = cmd_minimalize(single(docs, c), o.order);
  else if (c == "resolve") r = cmd_resolve(single(docs, c), required(o.budget, "--budget", c));
  else throw Error(ErrorKind::Precondition, "unknown command '" + c + "'");

  Json inputs = Json::array();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    inputs.push_back({{"source", i < labels.size() ? labels[i] : std::string()},
                      {"kind", io::to_string(d.kind)},
                      {"algebra", d.algebra->name()},
                      {"hash", hex64(fnv1a64(io::dump(io::emit_document(d))))}});
  }
  return Json{{"command", c},
              {"engine", {{"name", "dgforge"}, {"version", kEngineVersion}}},
              {"inputs", {{"documents", inputs}, {"options", options_json(o)}}},
              {"certificates", r.certificates},
              {"tables", r.tables},
              {"verified_ranges", r.verified_ranges}};
}

std::string cache_key(const CommandOptions& o, const std::vector<io::Document>& docs) {
  std::string material = std::string(kEngineVersion) + "\n" + o.command + "\n" + options_json(o).dump() + "\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    material += (i < o.inputs.size() ? o.inputs[i] : std::string()) + "\n";
    material += io::dump(io::emit_document(docs[i]));
  }
  return hex64(fnv1a64(material));
}

namespace {

bool is_document(const Json& j) {
  if (!j.is_object()) return false;
  auto has = [&j](std::initializer_list<const char*> keys) {
    return std::all_of(keys.begin(), keys.end(), [&j](const char* k) { return j.contains(k); });
  };
  return has({"algebra", "cells", "delta"}) || has({"algebra", "basis", "diff", "action"}) ||
         has({"field", "basis", "idempotents", "mult", "diff"});
}

std::string summary(const Json& doc) {
  if (doc.contains("cells")) return "<twisted complex, " + std::to_string(doc["cells"].size()) + " cells>";
  if (doc.contains("idempotents")) return "<algebra, dim " + std::to_string(doc["basis"].size()) + ">";
  return "<module, dim " + std::to_string(doc["basis"].size()) + ">";
}

bool flat(const Json& j) {
  if (!j.is_array()) return !j.is_object();
  return std::all_of(j.begin(), j.end(), [](const Json& e) { return !e.is_object(); });
}

void render(std::ostringstream& out, const Json& j, const std::string& path) {
  if (is_document(j)) {
    out << path << ": " << summary(j) << "\n";
  } else if (j.is_object() && j.empty()) {
    out << (path.empty() ? "(none)" : path + ": {}") << "\n";
  } else if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) render(out, v, path.empty() ? k : path + "." + k);
  } else if (flat(j)) {
    out << path << ": " << j.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < j.size(); ++i) render(out, j[i], path + "[" + std::to_string(i) + "]");
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  out << "dgforge " << report.value("command", "") << "\n";
  for (const char* section : {"inputs", "certificates", "tables", "verified_ranges"}) {
    if (!report.contains(section)) continue;
    out << "\n[" << section << "]\n";
    render(out, report[section], "");
  }
  return out.str();
}

Json error_report(const std::string& kind, const std::string& message) {
  return Json{{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace dgforge
