#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ledgergraph/error.hpp"
#include "ledgergraph/graph.hpp"

namespace ledgergraph::pajek {

// Writes `*Vertices N`, optional `i "label"` lines, `*Arcs` and one `s d` line
// per unique arc in lexicographic order. Indices are 1-based.
inline void write(std::ostream& out, const DirectedGraph& graph, bool include_labels = false) {
  if (include_labels && !graph.fully_labeled())
    throw ContractError("pajek::write: labels requested but some nodes are unlabeled");
  std::string buf;
  buf.reserve(1 << 16);
  auto flush_if_full = [&] {
    if (buf.size() > (1 << 16) - 64) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  };
  buf += "*Vertices " + std::to_string(graph.node_count()) + "\n";
  if (include_labels) {
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      buf += std::to_string(v + 1);
      buf += " \"";
      buf += graph.label(v);
      buf += "\"\n";
      flush_if_full();
    }
  }
  buf += "*Arcs\n";
  for (auto [a, b] : graph.sorted_arcs()) {
    buf += std::to_string(a + 1);
    buf += ' ';
    buf += std::to_string(b + 1);
    buf += '\n';
    flush_if_full();
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("pajek::write: output stream failure");
}

inline std::string to_string(const DirectedGraph& graph, bool include_labels = false) {
  std::ostringstream out;
  write(out, graph, include_labels);
  return out.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string lower(std::string_view s) {
  std::string r(s);
  for (char& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return r;
}

inline std::string_view next_token(std::string_view& rest) {
  rest = trim(rest);
  const auto end = rest.find_first_of(" \t");
  auto tok = rest.substr(0, end);
  rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  return tok;
}

inline std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("non-integer token '" + std::string(tok) + "'", line);
  return value;
}

inline bool is_number(std::string_view tok) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return !tok.empty() && ec == std::errc{} && ptr == tok.data() + tok.size();
}

}  // namespace detail

// Accepts `*Vertices`, vertex label lines, `*Arcs` and `*Edges` sections
// (edges become arcs in both directions). Keywords are case-insensitive;
// blank lines and `%` comments are ignored. A third numeric column on arc
// lines is tolerated and discarded.
inline DirectedGraph read(std::istream& in) {
  enum class Section { none, vertices, arcs, edges };
  Section section = Section::none;
  DirectedGraph graph;
  std::size_t vertex_count = 0;
  std::vector<std::string> labels;
  std::size_t labels_seen = 0;
  bool nodes_created = false;

  auto create_nodes = [&](std::size_t line) {
    if (nodes_created) return;
    if (labels_seen != 0 && labels_seen != vertex_count)
      throw ParseError("vertex labels cover " + std::to_string(labels_seen) + " of " + std::to_string(vertex_count) +
                           " vertices",
                       line);
    for (std::size_t i = 0; i < vertex_count; ++i) {
      if (labels_seen != 0) {
        try {
          graph.add_node(std::move(labels[i]));
        } catch (const ContractError&) {
          throw ParseError("duplicate vertex label", line);
        }
      } else {
        graph.add_node();
      }
    }
    nodes_created = true;
  };

  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = detail::trim(raw);
    if (text.empty() || text.front() == '%') continue;

    if (text.front() == '*') {
      std::string_view rest = text.substr(1);
      const std::string keyword = detail::lower(detail::next_token(rest));
      if (keyword == "vertices") {
        if (header_seen) throw ParseError("repeated *Vertices header", line);
        vertex_count = detail::parse_index(detail::next_token(rest), line);
        labels.assign(vertex_count, {});
        header_seen = true;
        section = Section::vertices;
      } else if (keyword == "arcs" || keyword == "edges") {
        if (!header_seen) throw ParseError("malformed header: expected *Vertices", line);
        create_nodes(line);
        section = keyword == "arcs" ? Section::arcs : Section::edges;
      } else {
        throw ParseError("unsupported section '*" + std::string(keyword) + "'", line);
      }
      continue;
    }

    if (section == Section::none) throw ParseError("malformed header: expected *Vertices", line);

    std::string_view rest = text;
    if (section == Section::vertices) {
      const std::size_t index = detail::parse_index(detail::next_token(rest), line);
      if (index < 1 || index > vertex_count) throw ParseError("index out of range", line);
      rest = detail::trim(rest);
      std::string label;
      if (!rest.empty() && rest.front() == '"') {
        const auto close = rest.find('"', 1);
        if (close == std::string_view::npos) throw ParseError("unterminated vertex label", line);
        label = std::string(rest.substr(1, close - 1));
      } else {
        label = std::string(detail::next_token(rest));
      }
      if (label.empty()) throw ParseError("empty vertex label", line);
      if (!labels[index - 1].empty()) throw ParseError("vertex " + std::to_string(index) + " labeled twice", line);
      labels[index - 1] = std::move(label);
      ++labels_seen;
      continue;
    }

    const std::size_t src = detail::parse_index(detail::next_token(rest), line);
    const std::size_t dst = detail::parse_index(detail::next_token(rest), line);
    if (src < 1 || src > vertex_count || dst < 1 || dst > vertex_count) throw ParseError("index out of range", line);
    if (auto weight = detail::next_token(rest); !weight.empty() && !detail::is_number(weight))
      throw ParseError("non-numeric arc weight '" + std::string(weight) + "'", line);
    if (!detail::trim(rest).empty()) throw ParseError("trailing tokens on arc line", line);
    const auto a = static_cast<NodeId>(src - 1), b = static_cast<NodeId>(dst - 1);
    graph.add_arc(a, b);
    if (section == Section::edges && a != b) graph.add_arc(b, a);
  }
  if (!header_seen) throw ParseError("malformed header: expected *Vertices", line + 1);
  create_nodes(line);
  return graph;
}

inline DirectedGraph from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read(in);
}

}  // namespace ledgergraph::pajek
