// dgforge: command-line front end. One command per process; the report goes to
// stdout as JSON (or text with --format text), errors as {"error": {...}} with
// a nonzero exit code.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dgforge/cache.hpp"
#include "dgforge/commands.hpp"
#include "dgforge/error.hpp"

namespace {

std::pair<int, int> parse_pair(const std::string& text, const char* flag) {
  auto colon = text.find(':', 1);
  try {
    if (colon == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    std::size_t used = 0;
    int a = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    std::string rest = text.substr(colon + 1);
    int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    if (a > b) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw dgforge::Error(dgforge::ErrorKind::Precondition,
                         std::string(flag) + " expects LO:HI with LO <= HI, got '" + text + "'");
  }
}

int emit_error(const std::string& kind, const std::string& message) {
  std::cout << dgforge::io::dump(dgforge::error_report(kind, message));
  return kind == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgforge: exact computations for weight and t-structures over dg algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

  dgforge::CommandOptions opts;
  std::string range_text, window_text, from, to;
  std::vector<std::string> inputs;

  auto add = [&](const std::string& name, const std::string& help, bool positional = true) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (positional) sub->add_option("inputs", inputs, "Document paths or builtin:NAME")->required();
    return sub;
  };
  add("validate", "Validate a document and classify an algebra");
  add("homology", "Homology table per idempotent");
  add("wtrunc", "Weight truncation at a level")->add_option("--level", opts.level)->required();
  add("wfilt", "Weight filtration and its layers");
  add("ttrunc", "t-truncation of a twisted complex")->add_option("--level", opts.level)->required();
  add("heart", "Heart components of a twisted complex");
  add("jh", "Composition factors of a heart object");
  {
    CLI::App* sub = add("dhom", "Derived Hom with verified ranges", false);
    sub->add_option("--from", from)->required();
    sub->add_option("--to", to)->required();
    sub->add_option("--range", range_text, "LO:HI")->required();
    sub->add_option("--budget", opts.budget, "Cell budget for the resolution");
  }
  {
    CLI::App* sub = add("smo-check", "Simple-minded family check");
    sub->add_option("--window", window_text, "LO:HI shifts seeding the generation search");
    sub->add_option("--budget", opts.budget, "Objects explored by the generation search");
  }
  add("tower", "Aisle tower stages")->add_option("--stages", opts.stages)->required();
  add("minimalize", "Gaussian elimination to a minimal twisted complex")
      ->add_option("--order", opts.order)
      ->check(CLI::IsMember({"first", "last"}));
  add("resolve", "Twisted resolution of a module")->add_option("--budget", opts.budget)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("usage", e.what());
  }

  try {
    opts.command = app.get_subcommands().front()->get_name();
    opts.inputs = opts.command == "dhom" ? std::vector<std::string>{from, to} : inputs;
    if (!range_text.empty()) opts.range = parse_pair(range_text, "--range");
    if (!window_text.empty()) opts.window = parse_pair(window_text, "--window");

    std::vector<dgforge::io::Document> docs;
    for (const auto& path : opts.inputs) docs.push_back(dgforge::io::load_document(path));
    auto cache = dgforge::ReportCache::from_environment(dgforge::kEngineVersion);
    const std::string key = dgforge::cache_key(opts, docs);
    std::string json;
    if (auto hit = cache ? cache->lookup(key) : std::nullopt) {
      json = *hit;
    } else {
      json = dgforge::io::dump(dgforge::run_command(opts, docs, opts.inputs));
      if (cache) cache->store(key, json);
    }
    if (format == "text") {
      std::cout << dgforge::render_text(dgforge::io::Json::parse(json));
    } else {
      std::cout << json;
    }
    return 0;
  } catch (const dgforge::Error& e) {
    return emit_error(dgforge::to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return emit_error("internal", e.what());
  }
}
