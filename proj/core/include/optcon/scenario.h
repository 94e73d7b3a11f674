#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optcon/graph.h"
#include "optcon/sim.h"

namespace optcon {

struct ScenarioOptions {
  std::optional<std::uint64_t> seed;  // replaces the document's "seed"
  std::vector<std::string> overrides; // "dotted.path=value"
};

// Parses a scenario document and resolves every random draw (uncertainty,
// initial state) from the run seed. Syntax errors raise Error(kParse) with
// line and column; bad fields raise Error(kParse) naming the field path.
Scenario ParseScenario(std::string_view text, const ScenarioOptions& opts = {});

// Only the "graph" section; lets spectrum checks run on partial documents.
Digraph ParseScenarioGraph(std::string_view text,
                           const ScenarioOptions& opts = {});

// Throws Error(kIo) when the file cannot be read.
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace optcon
