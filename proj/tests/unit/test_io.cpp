#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dgforge/cache.hpp"
#include "dgforge/commands.hpp"
#include "dgforge/corpus.hpp"
#include "dgforge/error.hpp"
#include "dgforge/io.hpp"
#include "support/generators.hpp"

using namespace dgforge;
using dgforge::io::Json;
using dgforge::testing::Rng;

namespace {

const std::filesystem::path kData = DGFORGE_DATA_DIR;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Internal;
}

Json lambda_doc() { return io::emit_algebra(*corpus::lambda()); }

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dgforge_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("shipped documents round-trip") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kData)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    Json file = io::read_json(entry.path());
    auto doc = io::load_document(entry.path().string());
    Json once = io::emit_document(doc);
    Json twice = io::emit_document(io::parse_document(once, kData));
    CHECK(io::dump(once) == io::dump(twice));
    // Files naming their algebra by a relative path are canonicalised to the builtin name.
    if (entry.path().filename() != "cone_eps.json") CHECK(file == once);
  }
  CHECK(count >= 8);
}

TEST_CASE("corpus algebras round-trip over Q and F_p") {
  for (const auto& name : corpus::names()) {
    auto a = corpus::by_name(name);
    Json j = io::emit_algebra(*a);
    auto b = io::parse_algebra(j);
    CHECK(io::emit_algebra(*b) == j);
    CHECK(b->is_class_p() == a->is_class_p());
  }
  auto l5 = corpus::lambda(FieldSpec::prime(5));
  Json j = io::emit_algebra(*l5);
  CHECK(j["field"] == Json{{"Fp", 5}});
  auto back = io::parse_algebra(j);
  CHECK(back->field() == FieldSpec::prime(5));
  // A module over the F_5 copy carries the algebra inline: the builtin name means Q.
  Json m = io::emit_module(regular_module(back));
  CHECK(m["algebra"].is_object());
  CHECK(io::emit_module(*io::parse_module(m)) == m);
}

TEST_CASE("property: random modules and twisted complexes round-trip") {
  Rng rng(51);
  for (const auto& a : corpus::class_p_algebras()) {
    for (int trial = 0; trial < 8; ++trial) {
      auto m = testing::random_module(a, rng, 12);
      Json j = io::emit_module(m);
      auto back = io::parse_module(j);
      CHECK(io::emit_module(*back) == j);
      CHECK(homology(*back) == homology(m));

      auto x = testing::random_twisted(a, rng, 5);
      Json t = io::emit_twisted(x);
      auto y = io::parse_twisted(t);
      CHECK(y == x);
      CHECK(io::dump(io::emit_twisted(y)) == io::dump(t));
    }
  }
}

TEST_CASE("emission is canonical") {
  // Shuffled input keys and combination order produce the same canonical text.
  Json a = Json::parse(R"({"name":"a2","mult":[],"idempotents":["e"],"field":"Q",
    "diff":[["u",[{"coef":"1","c":"w"}]]],
    "basis":[{"tgt":"e","src":"e","name":"e","deg":0},{"name":"u","deg":1,"src":0,"tgt":0},
             {"name":"v","deg":1,"src":"e","tgt":"e"},{"name":"w","deg":2,"src":"e","tgt":"e"}]})");
  CHECK(io::dump(io::emit_algebra(*io::parse_algebra(a))) == io::dump(io::emit_algebra(*corpus::a2())));
  Json t = Json::parse(R"({"algebra":"lambda","cells":[{"idem":"e","shift":0},{"idem":"e","shift":0}],
    "delta":[[0,1,[{"elem":"x","coef":"2/4"},{"elem":"x","coef":"-1/2"}]]]})");
  // The two terms cancel; the entry disappears.
  CHECK(io::emit_twisted(io::parse_twisted(t))["delta"].empty());
  CHECK(io::dump(Json{{"b", 1}, {"a", 2}}) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST_CASE("schema violations are rejected") {
  Json bad_degree = lambda_doc();
  bad_degree["basis"][1]["deg"] = "1";
  CHECK(kind_of([&] { io::parse_algebra(bad_degree); }) == ErrorKind::Schema);
  bad_degree["basis"][1]["deg"] = 1.5;
  CHECK(kind_of([&] { io::parse_algebra(bad_degree); }) == ErrorKind::Schema);

  Json missing = lambda_doc();
  missing.erase("basis");
  CHECK(kind_of([&] { io::parse_algebra(missing); }) == ErrorKind::Schema);

  Json unknown = lambda_doc();
  unknown["basis"][1]["src"] = "f";
  CHECK(kind_of([&] { io::parse_algebra(unknown); }) == ErrorKind::Schema);

  Json coef = lambda_doc();
  coef["diff"] = Json::parse(R"([["x",[{"c":"x","coef":"1/0"}]]])");
  CHECK(kind_of([&] { io::parse_algebra(coef); }) == ErrorKind::Schema);

  Json field = lambda_doc();
  field["field"] = Json{{"Fp", 4}};
  CHECK(kind_of([&] { io::parse_algebra(field); }) == ErrorKind::InvalidField);
  field["field"] = "R";
  CHECK(kind_of([&] { io::parse_algebra(field); }) == ErrorKind::Schema);

  Json dup = lambda_doc();
  dup["basis"][1]["name"] = "e";
  CHECK(kind_of([&] { io::parse_algebra(dup); }) == ErrorKind::Schema);

  Json module = Json::parse(R"({"algebra":"nowhere","basis":[],"diff":[],"action":[]})");
  CHECK(kind_of([&] { io::parse_module(module, kData); }) == ErrorKind::FileNotFound);
  module["algebra"] = "lambda";
  module["basis"] = Json::parse(R"([{"name":"m","deg":0,"idem":"e"}])");
  module["diff"] = Json::parse(R"([["m",[]],["m",[]]])");
  CHECK(kind_of([&] { io::parse_module(module); }) == ErrorKind::Schema);

  Json twisted = Json::parse(R"({"algebra":"lambda","cells":[{"idem":"e","shift":0}],"delta":[[0,3,[]]]})");
  CHECK(kind_of([&] { io::parse_twisted(twisted); }) == ErrorKind::Schema);

  CHECK(kind_of([] { io::document_kind(Json::array()); }) == ErrorKind::Schema);
  CHECK(kind_of([] { io::document_kind(Json{{"cells", 1}, {"field", "Q"}}); }) == ErrorKind::Schema);
  CHECK(kind_of([] { io::load_document("/nonexistent/file.json"); }) == ErrorKind::FileNotFound);
  CHECK(kind_of([] { io::load_document("builtin:nope"); }) == ErrorKind::FileNotFound);

  auto dir = temp_dir("garbage");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(kind_of([&] { io::load_document((dir / "bad.json").string()); }) == ErrorKind::Schema);
}

TEST_CASE("engine-level invalidity is reported, not a schema error") {
  Json d2 = lambda_doc();
  d2["diff"] = Json::parse(R"([["e",[{"c":"x","coef":"1"}]]])");
  auto a = io::parse_algebra(d2);
  CHECK_FALSE(a->is_valid());
  CommandOptions o{"validate"};
  auto r = run_command(o, {io::Document{io::DocumentKind::Algebra, a, nullptr, std::nullopt}}, {"inline"});
  CHECK(r["certificates"]["valid"] == false);
  CHECK_FALSE(r["tables"]["violations"].empty());
}

TEST_CASE("command reports") {
  auto file = [](const char* name) { return (kData / name).string(); };
  CommandOptions v{"validate", {file("keps.json")}};
  auto keps = run_command(v);
  CHECK(keps["certificates"]["class_p"] == false);
  for (const char* key : {"inputs", "certificates", "tables", "verified_ranges"}) CHECK(keps.contains(key));

  CommandOptions jh{"jh", {file("m_x.json")}};
  auto j = run_command(jh);
  CHECK(j["tables"]["composition_factors"] == Json{{"1", 2}});
  CHECK(j["certificates"]["endomorphisms"]["h0_dim"] == 2);
  CHECK(j["certificates"]["endomorphisms"]["local"] == true);

  CommandOptions w{"wtrunc", {"builtin:lambda"}};
  w.level = 0;
  auto t = run_command(w);
  CHECK(t["certificates"]["all"] == true);
  CHECK(t["tables"]["gt_basis"] == Json{"x"});
  CHECK(t["tables"]["le_basis"] == Json{"e"});
  // The emitted truncations parse back to modules with the advertised homology.
  auto gt = io::parse_module(t["tables"]["sigma_gt"]);
  CHECK(homology(*gt).dims == std::map<int, std::vector<std::size_t>>{{1, {1}}});

  CommandOptions tt{"ttrunc", {file("cone_eps.json")}};
  tt.level = 0;
  CHECK(kind_of([&] { run_command(tt); }) == ErrorKind::ClassPRequired);
  CommandOptions tw{"tower", {file("simple_lambda.json")}};
  tw.stages = 0;
  CHECK(kind_of([&] { run_command(tw); }) == ErrorKind::Precondition);
  CommandOptions missing{"wtrunc", {file("simple_lambda.json")}};
  CHECK(kind_of([&] { run_command(missing); }) == ErrorKind::Precondition);
  CommandOptions wrong{"jh", {file("simple_lambda.json")}};
  CHECK(kind_of([&] { run_command(wrong); }) == ErrorKind::Schema);

  CommandOptions d{"dhom", {file("simple_lambda.json"), file("simple_lambda.json")}};
  d.range = {-1, 2};
  d.budget = 3;
  auto h = run_command(d);
  auto& ranges = h["verified_ranges"];
  CHECK(ranges["vanishing_above"] == 0);
  CHECK(ranges["verified"] == Json{1, 2});
  CHECK(ranges["unverified"] == Json{-1, 0});
}

TEST_CASE("every command is deterministic") {
  auto file = [](const char* name) { return (kData / name).string(); };
  std::vector<CommandOptions> runs;
  runs.push_back({"validate", {file("quiver2.json")}});
  runs.push_back({"homology", {file("mixed_quiver2.json")}});
  runs.push_back({"wtrunc", {file("mixed_quiver2.json")}, 0});
  runs.push_back({"wfilt", {file("mixed_quiver2.json")}});
  runs.push_back({"ttrunc", {file("a2_joined.json")}, -1});
  runs.push_back({"heart", {file("m_x.json")}});
  runs.push_back({"jh", {file("m_x.json")}});
  CommandOptions d{"dhom", {file("simple_lambda.json"), "builtin:lambda"}};
  d.range = {-2, 2};
  d.budget = 4;
  runs.push_back(d);
  runs.push_back({"smo-check", {"builtin:quiver2"}});
  CommandOptions tower{"tower", {file("mixed_quiver2.json")}};
  tower.stages = 3;
  runs.push_back(tower);
  CommandOptions last{"minimalize", {file("a2_joined.json")}};
  last.order = "last";
  runs.push_back(last);
  CommandOptions res{"resolve", {file("simple_lambda.json")}};
  res.budget = 3;
  runs.push_back(res);
  CHECK(runs.size() == command_names().size());
  for (const auto& o : runs) {
    CAPTURE(o.command);
    std::string first = io::dump(run_command(o));
    CHECK(first == io::dump(run_command(o)));
    CHECK(render_text(Json::parse(first)) == render_text(run_command(o)));
  }
}

TEST_CASE("cache") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");

  auto dir = temp_dir("cache");
  ReportCache cache(dir, "v1");
  CHECK_FALSE(cache.lookup("k").has_value());
  cache.store("k", "{\"x\": 1}\n");
  CHECK(cache.lookup("k") == std::optional<std::string>("{\"x\": 1}\n"));
  CHECK_FALSE(ReportCache(dir, "v2").lookup("k").has_value());
  std::ofstream(cache.entry_path("broken")) << "{";
  CHECK_FALSE(cache.lookup("broken").has_value());
  // No temporary files are left behind.
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    CHECK(e.path().extension() == ".json");
  }
  CHECK(files == 2);

  // Keys depend on options and canonical content, not on formatting.
  auto a = io::load_document("builtin:lambda");
  CommandOptions o{"wtrunc", {"x"}, 0};
  CommandOptions o2 = o;
  o2.level = 1;
  CHECK(cache_key(o, {a}) != cache_key(o2, {a}));
  CHECK(cache_key(o, {a}) == cache_key(o, {io::parse_document(io::emit_document(a))}));
}
