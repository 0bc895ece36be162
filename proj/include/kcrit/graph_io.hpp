#pragma once

#include "kcrit/graph.hpp"

#include <string>
#include <string_view>

namespace kcrit {

/// Decodes one graph6 line (McKay's format). An optional ">>graph6<<" header and trailing
/// whitespace are accepted. Throws ParseError carrying the offending byte offset.
Graph parse_graph6(std::string_view text);

/// Canonical graph6 encoding; the size prefix uses the shortest admissible form.
std::string to_graph6(const Graph& g);

/// DIMACS .col text: "c" comments, one "p edge n m" line, "e u v" lines with 1-based endpoints.
/// ParseError offsets are 1-based line numbers.
Graph parse_dimacs(std::string_view text);

std::string to_dimacs(const Graph& g);

enum class GraphFormat { graph6, dimacs };

Graph parse_graph(std::string_view text, GraphFormat format);

} // namespace kcrit
