#pragma once

#include "ellipt/completion.hpp"
#include "ellipt/graph.hpp"
#include "ellipt/rational.hpp"
#include "ellipt/reductions.hpp"
#include "ellipt/values.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace ellipt {

// One JSON document feeds every verb: the (produced) graph lives at the top
// level as {"n", "edges"}, per-edge data rides along as "x" (+"mode"), "d",
// or "a", and reductions add "kind", "source" and "certificate" blocks.
// All rational and float values are strings ("p/q" or decimal); structural
// integers (node counts, ids, signs, colors) are plain JSON integers.
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// "p/q" or decimal text ("0.25", "-1e-3") to an exact rational.
Rational rational_from_text(const std::string& text);

// Shortest round-trip decimal form / locale-independent parse.
std::string format_double(double v);
double parse_double(const std::string& text);

std::uint64_t fnv1a(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

ojson graph_to_json(const Graph& g);             // {"n": ..., "edges": [[u,v],...]}
Graph graph_from_json(const json& j);             // accepts the same shape

ojson partial_values_to_json(const Graph& g, const PartialVector& x); // the "x" map
// Reads "x" (keyed "u,v") plus the sibling "mode" tag from doc; every edge
// must be covered exactly once.
PartialVector partial_from_doc(const Graph& g, const json& doc);
void partial_to_doc(const Graph& g, const PartialVector& x, ojson& doc);

ojson angles_to_json(const Graph& g, const EdgeAngles& d);
EdgeAngles angles_from_json(const Graph& g, const json& j);

ojson witness_to_json(const GramWitness& w);
GramWitness witness_from_json(const json& j);

std::string kind_to_string(ReductionKind k);
ReductionKind kind_from_string(const std::string& s);

// Full reduction instance document (graph/data at top level so the decider
// verbs consume reduction outputs unchanged).
ojson reduction_to_json(const ReductionInstance& inst);
ReductionInstance reduction_from_json(const json& doc);

} // namespace ellipt
