#pragma once
// Shortest-path reasoning chains over the entity graph, primary chain
// selection, the token serialization consumed by the span model, and
// comparison-type classification.

#include <string>
#include <vector>

#include "hopadv/corpus.hpp"
#include "hopadv/graph.hpp"

namespace hopadv {

struct Hop {
  std::string from_entity;  // canonical keys
  std::string to_entity;
  std::string relation_phrase;
  std::string locator_title;
  int locator_sentence = -1;
};

struct ReasoningChain {
  std::string start;  // query-entity key
  std::vector<Hop> hops;
  bool reaches_answer = false;
};

enum class ReasoningType { Bridging, Intersection, Comparatives, YesNo };

std::string reasoning_type_name(ReasoningType t);

// One chain per query entity: the shortest path to the answer entity
// over the undirected view of the graph, ties broken by lexicographic
// order of the canonical keys along the path. Query entities with no
// path (or no answer entity) yield reaches_answer=false with no hops.
std::vector<ReasoningChain> find_chains(const EntityGraph& graph);

// The reaches_answer chain with the most hops; ties go to the query
// entity mentioned earliest in the question. Zero-hop chains (query
// entity equals the answer) are never selected. Throws DataError
// ("no-chain") when nothing qualifies.
ReasoningChain select_primary_chain(const std::vector<ReasoningChain>& chains,
                                    const EntityGraph& graph);

// Token sequence "[HOP1] <entity> <relation> [HOP2] <entity> <relation>
// ..." with the second and later hops flattened after [HOP2]. The final
// (answer) entity is not part of the sequence.
std::vector<std::string> serialize_chain(const ReasoningChain& chain);

inline constexpr const char* kHop1Marker = "[HOP1]";
inline constexpr const char* kHop2Marker = "[HOP2]";

// Marker-delimited structure of a serialized chain.
struct SerializedChain {
  std::vector<std::string> hop1_tokens;
  std::vector<std::string> tail_tokens;
};

SerializedChain parse_chain_tokens(const std::vector<std::string>& tokens);
std::vector<std::string> serialize_chain_tokens(const SerializedChain& parts);

// For dataset-tagged comparison questions only.
ReasoningType classify_comparison(const Example& ex);

std::string chain_to_json(const ReasoningChain& chain, ReasoningType type);

}  // namespace hopadv
