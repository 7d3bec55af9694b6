#pragma once
// Triple cleaning and per-example entity-relation graph assembly over
// the selected paragraphs.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hopadv/annotate.hpp"

namespace hopadv {

// Argument/relation token budgets: longer arguments get re-extracted,
// and anything still above the hard limit afterwards is dropped.
inline constexpr int kReextractTokenLimit = 8;
inline constexpr int kDropTokenLimit = 15;

enum class RelationKind { Property, Action };

struct CleanTriple {
  std::string subject;
  std::string relation;
  std::string object;
  RelationKind kind = RelationKind::Property;
  std::string locator_title;
  int locator_sentence = -1;
};

// Reason codes for triples discarded during cleaning.
struct DroppedTriple {
  RawTriple raw;
  std::string reason;  // "no-antecedent", "arg-too-long", "empty-relation"...
};

struct EntityNode {
  std::string canonical_key;
  std::set<std::string> surfaces;
  std::string ner_type;  // empty when unknown
  std::set<std::pair<std::string, int>> provenance;
};

struct RelationEdge {
  std::string source;  // canonical keys
  std::string target;
  std::string relation_phrase;
  RelationKind kind = RelationKind::Property;
  std::string locator_title;
  int locator_sentence = -1;
};

struct EntityGraph {
  std::map<std::string, EntityNode> nodes;
  std::vector<RelationEdge> edges;  // multigraph; parallel edges keep provenance
  std::set<std::string> query_entities;
  std::map<std::string, int> query_entity_offsets;  // key -> first char offset in question
  std::optional<std::string> answer_entity;
};

// Case-folds, collapses whitespace and strips a leading article.
// Idempotent and deterministic.
std::string normalize_entity(const std::string& surface);

// Cleans one extracted triple: re-extracts over-long arguments into
// sub-triples, snaps arguments onto known entity mentions, resolves
// pronoun arguments to the previous sentence's subject, and classifies
// the relation as property vs action. Uncleanable triples are dropped
// with a reason code rather than raising.
std::vector<CleanTriple> clean_triple(
    const RawTriple& raw, const AnnotationBundle& bundle,
    const std::vector<EntityMention>& question_entities,
    const std::vector<EntityMention>& context_entities,
    std::vector<DroppedTriple>* dropped = nullptr);

std::vector<CleanTriple> clean_all_triples(const AnnotationBundle& bundle,
                                           std::vector<DroppedTriple>* dropped = nullptr);

// One node per canonical key, one edge per cleaned triple. Query
// entities are the question mentions present in the graph; the answer
// node matches the normalized answer exactly, else by token-boundary
// containment, else is absent ("yes"/"no" answers never resolve).
EntityGraph build_graph(const std::vector<CleanTriple>& triples,
                        const TextAnnotations& question_ann,
                        const std::vector<EntityMention>& context_entities,
                        const std::string& answer);

std::string graph_to_json(const EntityGraph& g);

}  // namespace hopadv
