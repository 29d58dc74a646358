#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pathcov/diagram.hpp"

namespace pathcov {

/// Parses the line-oriented diagram language:
///
///     node <id> noise <number>
///     edge <id> -> <id> coef <number>
///     edge <id> <-> <id> cov <number>
///
/// '#' starts a comment. Numbers are decimals or "p/q". Errors carry the
/// line and column of the offending token.
PathDiagram<Rational> parse_diagram(std::string_view text);

PathDiagram<Rational> load_diagram(const std::filesystem::path& file);

/// Canonical form: nodes sorted by name, then directed edges sorted by
/// (tail, head), then bidirected edges sorted by (min name, max name).
std::string serialize(const PathDiagram<Rational>& d);

}  // namespace pathcov
