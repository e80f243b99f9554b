#pragma once

// One function per CLI command. Every report has the keys
//   command, engine, inputs, certificates, tables, verified_ranges
// and depends only on the canonical form of the inputs and the options.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgforge/io.hpp"

namespace dgforge {

inline constexpr const char* kEngineVersion = "1.0.0";

struct CommandOptions {
  std::string command;
  std::vector<std::string> inputs;  // paths or builtin:NAME
  std::optional<int> level;
  std::optional<int> stages;
  std::optional<int> budget;
  std::optional<std::pair<int, int>> range;   // dhom
  std::optional<std::pair<int, int>> window;  // smo-check
  std::string order = "first";                // minimalize
};

std::vector<std::string> command_names();

// Loads the inputs and runs the command. Throws Error on bad input.
io::Json run_command(const CommandOptions& options);
// The same on already loaded documents; `labels` name them in the report.
io::Json run_command(const CommandOptions& options, const std::vector<io::Document>& docs,
                     const std::vector<std::string>& labels);

// Cache key over engine version, command, options and canonical inputs.
std::string cache_key(const CommandOptions& options, const std::vector<io::Document>& docs);

std::string render_text(const io::Json& report);
io::Json error_report(const std::string& kind, const std::string& message);

}  // namespace dgforge
