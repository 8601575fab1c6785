#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dpprice/diagrams/diagram.hpp"

namespace dpprice {

inline const char* diagram_kind_name(DiagramKind k) {
  switch (k) {
    case DiagramKind::value_function: return "vf";
    case DiagramKind::selection: return "sd";
    case DiagramKind::decision: return "dd";
  }
  return "?";
}

// Graphviz text. Nodes are listed by (layer, id) and arcs by id; items are
// 0-based indices.
inline std::string export_dot(const Diagram& d) {
  std::ostringstream os;
  os << "digraph " << diagram_kind_name(d.kind()) << " {\n";
  os << "  rankdir=LR;\n";
  for (int id : d.topological_order()) {
    const auto& node = d.node(id);
    os << "  n" << id << " [layer=" << node.layer << ", label=\"";
    if (id == d.p())
      os << "p ";
    os << state_label(node.state) << "\"];\n";
  }
  for (const auto& a : d.arcs())
    os << "  n" << a.src << " -> n" << a.dst << " [label=\"" << format_set(a.items) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace dpprice
