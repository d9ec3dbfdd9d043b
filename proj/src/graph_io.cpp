#include "snet/graph_io.hpp"

#include "snet/errors.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace snet {

void write_graph_jsonl(std::ostream& out, const ColoredDigraph& g) {
  out << "{\"type\":\"meta\",\"t\":" << g.step << ",\"num_colors\":" << g.num_colors << "}\n";
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    out << "{\"type\":\"node\",\"id\":" << v << ",\"birth\":" << g.birth[v] << "}\n";
  }
  for (const auto& a : g.arcs) {
    out << "{\"type\":\"arc\",\"src\":" << a.src << ",\"dst\":" << a.dst << ",\"color\":" << int(a.color) << "}\n";
  }
}

ColoredDigraph read_graph_jsonl(std::string_view text) {
  ColoredDigraph g;
  bool have_meta = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line.begin(), line.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::MalformedFile, "graph line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      const auto type = rec.at("type").get<std::string>();
      if (type == "meta") {
        g.step = rec.at("t").get<std::uint32_t>();
        g.num_colors = rec.at("num_colors").get<int>();
        have_meta = true;
      } else if (type == "node") {
        const auto id = rec.at("id").get<std::uint64_t>();
        if (id != g.birth.size()) {
          throw Error(ErrorKind::MalformedFile, "graph line " + std::to_string(line_no) + ": node ids must be contiguous");
        }
        g.birth.push_back(rec.at("birth").get<std::uint32_t>());
      } else if (type == "arc") {
        const auto color = rec.at("color").get<int>();
        if (color < 1 || color > g.num_colors) {
          throw Error(ErrorKind::UnknownColor, "graph line " + std::to_string(line_no));
        }
        Arc a{rec.at("src").get<NodeId>(), rec.at("dst").get<NodeId>(), static_cast<std::uint8_t>(color)};
        if (a.src >= g.birth.size() || a.dst >= g.birth.size()) {
          throw Error(ErrorKind::UnknownNode, "graph line " + std::to_string(line_no) + ": undeclared endpoint");
        }
        g.arcs.push_back(a);
      } else {
        throw Error(ErrorKind::MalformedFile, "graph line " + std::to_string(line_no) + ": unknown type " + type);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::MalformedFile, "graph line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_meta) throw Error(ErrorKind::MalformedFile, "graph file must start with a meta line");
  }
  if (!have_meta) throw Error(ErrorKind::MalformedFile, "graph file has no meta line");
  return g;
}

}  // namespace snet
