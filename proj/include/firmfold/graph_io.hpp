// Copyright 2026 The firmfold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON (de)serialization and DOT export.
//
// Schema:
//   {"nodes":[{"id":int,"kind":str,"value"?:int,"relation"?:str,
//              "volatile"?:bool,"block"?:int}],
//    "edges":[{"src":int,"dst":int,"kind":str,"position"?:int}],
//    "start":int,"end":int}
//
// BlockEdges are carried by the node's "block" field, never in "edges". The
// writer is canonical: nodes by id, edges by (src, kind, position, dst), one
// element per line, so save(load(save(g))) is byte-identical to save(g).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "firmfold/ir.hpp"
#include "json.hpp"

namespace firmfold {

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<EdgeId> canonicalEdges(const FirmGraph& g) {
  std::vector<EdgeId> edges;
  for (EdgeId e : g.liveEdges())
    if (g.edge(e).kind != EdgeKind::BlockEdge) edges.push_back(e);
  std::sort(edges.begin(), edges.end(), [&](EdgeId a, EdgeId b) {
    const Edge& x = g.edge(a);
    const Edge& y = g.edge(b);
    return std::tuple(x.src, x.kind, x.position, x.dst, a) < std::tuple(y.src, y.kind, y.position, y.dst, b);
  });
  return edges;
}

inline std::int64_t requireInt(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer()) throw LoadError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

inline NodeId requireId(const nlohmann::json& j, const std::string& where) {
  const std::int64_t v = requireInt(j, where);
  if (v < 0 || v >= std::numeric_limits<std::uint32_t>::max()) throw LoadError(where + ": id out of range");
  return nodeId(static_cast<std::uint32_t>(v));
}

}  // namespace detail

inline std::string toJson(const FirmGraph& g) {
  using nlohmann::ordered_json;
  std::ostringstream os;
  os << "{\n  \"nodes\": [";
  bool first = true;
  for (NodeId n : g.liveNodes()) {
    ordered_json j;
    j["id"] = index(n);
    j["kind"] = kindName(g.kind(n));
    const NodeAttrs& a = g.attrs(n);
    if (a.value) j["value"] = *a.value;
    if (a.relation) j["relation"] = relationName(*a.relation);
    if (a.isVolatile) j["volatile"] = *a.isVolatile;
    if (auto b = g.findBlock(n)) j["block"] = index(*b);
    os << (first ? "\n    " : ",\n    ") << j.dump();
    first = false;
  }
  os << (first ? "],\n" : "\n  ],\n");
  os << "  \"edges\": [";
  first = true;
  for (EdgeId e : detail::canonicalEdges(g)) {
    const Edge& ed = g.edge(e);
    ordered_json j;
    j["src"] = index(ed.src);
    j["dst"] = index(ed.dst);
    j["kind"] = edgeKindName(ed.kind);
    j["position"] = ed.position;
    os << (first ? "\n    " : ",\n    ") << j.dump();
    first = false;
  }
  os << (first ? "],\n" : "\n  ],\n");
  os << "  \"start\": " << index(g.startBlock()) << ",\n";
  os << "  \"end\": " << index(g.endBlock()) << "\n}\n";
  return os.str();
}

inline FirmGraph fromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line number
    const std::size_t at = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
    throw LoadError("line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw LoadError("top level: expected an object");
  for (const char* key : {"nodes", "edges", "start", "end"})
    if (!doc.contains(key)) throw LoadError(std::string("top level: missing field '") + key + "'");
  if (!doc["nodes"].is_array()) throw LoadError("nodes: expected an array");
  if (!doc["edges"].is_array()) throw LoadError("edges: expected an array");

  FirmGraph g = FirmGraph::bare();
  std::vector<std::pair<NodeId, NodeId>> blocks;  // node -> block

  const auto& nodes = doc["nodes"];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const auto& jn = nodes[i];
    if (!jn.is_object()) throw LoadError(where + ": expected an object");
    for (const auto& [key, _] : jn.items())
      if (key != "id" && key != "kind" && key != "value" && key != "relation" && key != "volatile" && key != "block")
        throw LoadError(where + ": unknown field '" + key + "'");
    if (!jn.contains("id")) throw LoadError(where + ": missing field 'id'");
    if (!jn.contains("kind")) throw LoadError(where + ": missing field 'kind'");
    const NodeId id = detail::requireId(jn["id"], where + ".id");
    if (!jn["kind"].is_string()) throw LoadError(where + ".kind: expected a string");
    const auto kind = parseKind(jn["kind"].get<std::string>());
    if (!kind) throw LoadError(where + ".kind: unknown kind '" + jn["kind"].get<std::string>() + "'");

    NodeAttrs a;
    if (jn.contains("value")) {
      const std::int64_t v = detail::requireInt(jn["value"], where + ".value");
      if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
        throw LoadError(where + ".value: does not fit in 32 bits");
      a.value = static_cast<std::int32_t>(v);
    }
    if (jn.contains("relation")) {
      if (!jn["relation"].is_string()) throw LoadError(where + ".relation: expected a string");
      a.relation = parseRelation(jn["relation"].get<std::string>());
      if (!a.relation) throw LoadError(where + ".relation: unknown relation '" + jn["relation"].get<std::string>() + "'");
    }
    if (jn.contains("volatile")) {
      if (!jn["volatile"].is_boolean()) throw LoadError(where + ".volatile: expected a boolean");
      a.isVolatile = jn["volatile"].get<bool>();
    }
    if (g.alive(id)) throw LoadError(where + ".id: duplicate id " + std::to_string(index(id)));
    g.restoreNode(id, *kind, a);
    if (jn.contains("block")) blocks.emplace_back(id, detail::requireId(jn["block"], where + ".block"));
  }

  for (const auto& [n, b] : blocks) {
    if (!g.alive(b)) throw LoadError("node " + std::to_string(index(n)) + ": block " + std::to_string(index(b)) + " does not exist");
    g.addEdgeUnchecked(n, b, EdgeKind::BlockEdge);
  }

  const auto& edges = doc["edges"];
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const auto& je = edges[i];
    if (!je.is_object()) throw LoadError(where + ": expected an object");
    for (const char* key : {"src", "dst", "kind"})
      if (!je.contains(key)) throw LoadError(where + ": missing field '" + key + "'");
    const NodeId src = detail::requireId(je["src"], where + ".src");
    const NodeId dst = detail::requireId(je["dst"], where + ".dst");
    if (!je["kind"].is_string()) throw LoadError(where + ".kind: expected a string");
    const auto kind = parseEdgeKind(je["kind"].get<std::string>());
    if (!kind) throw LoadError(where + ".kind: unknown edge kind '" + je["kind"].get<std::string>() + "'");
    if (*kind == EdgeKind::BlockEdge) throw LoadError(where + ".kind: BlockEdge is expressed through the node's 'block' field");
    std::int64_t position = 0;
    if (je.contains("position")) {
      position = detail::requireInt(je["position"], where + ".position");
      if (position < 0 || position > std::numeric_limits<std::uint32_t>::max())
        throw LoadError(where + ".position: out of range");
    } else {
      throw LoadError(where + ": missing field 'position'");
    }
    if (!g.alive(src)) throw LoadError(where + ".src: node " + std::to_string(index(src)) + " does not exist");
    if (!g.alive(dst)) throw LoadError(where + ".dst: node " + std::to_string(index(dst)) + " does not exist");
    g.addEdgeUnchecked(src, dst, *kind, static_cast<std::uint32_t>(position));
  }

  const NodeId start = detail::requireId(doc["start"], "start");
  const NodeId end = detail::requireId(doc["end"], "end");
  if (!g.alive(start)) throw LoadError("start: node " + std::to_string(index(start)) + " does not exist");
  if (!g.alive(end)) throw LoadError("end: node " + std::to_string(index(end)) + " does not exist");
  g.setAnchors(start, end);
  return g;
}

inline FirmGraph load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return fromJson(ss.str());
  } catch (const LoadError& e) {
    throw LoadError(path + ": " + e.what());
  }
}

inline void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline void save(const FirmGraph& g, const std::string& path) { writeFile(path, toJson(g)); }

// --- DOT --------------------------------------------------------------------

inline std::string nodeLabel(const FirmGraph& g, NodeId n) {
  std::string label = std::to_string(index(n)) + ": " + std::string(kindName(g.kind(n)));
  const NodeAttrs& a = g.attrs(n);
  if (a.value) label += " " + std::to_string(*a.value);
  if (a.relation) label += " " + std::string(relationName(*a.relation));
  if (a.isVolatile && *a.isVolatile) label += " volatile";
  return label;
}

inline std::string toDot(const FirmGraph& g, const std::set<NodeId>& highlights = {}) {
  std::ostringstream os;
  os << "digraph firm {\n";
  os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (NodeId n : g.liveNodes()) {
    os << "  n" << index(n) << " [label=\"" << nodeLabel(g, n) << "\"";
    if (g.kind(n) == NodeKind::Block) os << ", shape=ellipse";
    if (highlights.contains(n)) os << ", style=filled, fillcolor=\"#ffd966\"";
    os << "];\n";
  }
  std::vector<EdgeId> edges = g.liveEdges();
  std::sort(edges.begin(), edges.end(), [&](EdgeId a, EdgeId b) {
    const Edge& x = g.edge(a);
    const Edge& y = g.edge(b);
    return std::tuple(x.src, x.kind, x.position, x.dst, a) < std::tuple(y.src, y.kind, y.position, y.dst, b);
  });
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    os << "  n" << index(ed.src) << " -> n" << index(ed.dst) << " [";
    switch (ed.kind) {
      case EdgeKind::Dataflow: os << "label=\"" << ed.position << "\""; break;
      case EdgeKind::Controlflow: os << "label=\"" << ed.position << "\", color=red"; break;
      case EdgeKind::True: os << "label=\"T" << ed.position << "\", color=darkgreen"; break;
      case EdgeKind::False: os << "label=\"F" << ed.position << "\", color=darkorange"; break;
      case EdgeKind::BlockEdge: os << "style=dotted, color=gray, arrowhead=none"; break;
    }
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

inline void exportDot(const FirmGraph& g, const std::string& path, const std::set<NodeId>& highlights = {}) {
  writeFile(path, toDot(g, highlights));
}

}  // namespace firmfold
