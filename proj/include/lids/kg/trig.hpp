#pragma once

#include "lids/kg/graph_store.hpp"

#include <string>
#include <string_view>

namespace lids::kg {

// Deterministic TriG-star document: fixed prefix block, default graph as an
// unnamed `{ ... }` block, then one block per named graph in IRI order.
// A certainty is written as a quoted-triple statement right after the
// asserted triple:
//   << s p o >> kglids:certainty "0.95"^^xsd:double .
std::string serialize_trig_star(const GraphStore& store);

// Accepts the subset of TriG-star that serialize_trig_star produces plus the
// usual abbreviations (`;`, `,`, `a`, PREFIX/@prefix, GRAPH keyword, numeric
// and boolean shorthand). Blank nodes are rejected. Throws SyntaxError.
GraphStore parse_trig_star(std::string_view text);

// Default graph only, full IRIs, annotations dropped.
std::string serialize_ntriples(const GraphStore& store);

}  // namespace lids::kg
