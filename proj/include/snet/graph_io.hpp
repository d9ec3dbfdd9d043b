#pragma once

#include "snet/generator.hpp"

#include <iosfwd>
#include <string_view>

namespace snet {

/// JSON-lines: a meta line, then one line per node, then one per arc.
void write_graph_jsonl(std::ostream& out, const ColoredDigraph& g);
ColoredDigraph read_graph_jsonl(std::string_view text);

}  // namespace snet
