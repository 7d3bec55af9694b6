#include "hopadv/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include "hopadv/builtin_annotator.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

std::string normalize_entity(const std::string& surface) {
  std::string s = text::collapse_whitespace(text::lower(surface));
  for (const char* article : {"the ", "a ", "an "}) {
    size_t len = std::char_traits<char>::length(article);
    if (s.rfind(article, 0) == 0) {
      s = s.substr(len);
      break;
    }
  }
  return s;
}

namespace {

bool is_pronoun_surface(const std::string& s) {
  static const std::unordered_set<std::string> pronouns = {
      "he", "she", "it", "they", "him", "her", "them", "his", "its", "their"};
  return pronouns.count(text::lower(s)) > 0;
}

struct TokenSlice {
  std::vector<const TokenAnn*> toks;

  int size() const { return static_cast<int>(toks.size()); }
  std::string join(int b, int e) const {  // [b, e)
    std::string out;
    for (int k = b; k < e; ++k) {
      if (!out.empty()) out += ' ';
      out += toks[k]->surface;
    }
    return out;
  }
  std::string join() const { return join(0, size()); }
};

TokenSlice tokens_in_span(const TextAnnotations& ann, const TripleSpan& span) {
  TokenSlice slice;
  for (const auto& t : ann.tokens)
    if (t.char_start >= span.char_start && t.char_end <= span.char_end)
      slice.toks.push_back(&t);
  return slice;
}

// Longest (then earliest) known mention surface occurring inside `arg`
// at token boundaries.
std::optional<std::string> snap_to_mention(const std::string& arg,
                                           const std::vector<const EntityMention*>& mentions) {
  const EntityMention* best = nullptr;
  for (const EntityMention* m : mentions) {
    if (!text::contains_token_boundary(arg, m->surface)) continue;
    if (!best || m->surface.size() > best->surface.size()) best = m;
  }
  if (!best) return std::nullopt;
  return best->surface;
}

struct ArgCleanResult {
  std::string surface;  // empty means uncleanable
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> subtriples;
  // (subject, (relation, object)) emitted during re-extraction
};

std::string strip_leading_articles_tokens(const TokenSlice& slice, int b, int e) {
  while (b < e && slice.toks[b]->pos == "DT") ++b;
  while (e > b && (slice.toks[e - 1]->pos == "." || slice.toks[e - 1]->pos == "," ||
                   slice.toks[e - 1]->pos == ":"))
    --e;
  return slice.join(b, e);
}

// Re-extraction of an over-long argument: keep the head segment before
// the first internal preposition as the endpoint and emit the split as a
// sub-triple. A stand-in for argument simplification; arguments still
// longer than the hard limit afterwards are dropped by the caller.
ArgCleanResult reextract_argument(const TokenSlice& slice) {
  ArgCleanResult res;
  int n = slice.size();
  int split = -1;
  for (int k = 1; k + 1 < n; ++k) {
    if (slice.toks[k]->pos == "IN" || slice.toks[k]->pos == "TO") {
      split = k;
      break;
    }
  }
  if (split <= 0) {
    res.surface = strip_leading_articles_tokens(slice, 0, n);
    return res;
  }
  std::string head = strip_leading_articles_tokens(slice, 0, split);
  std::string tail = strip_leading_articles_tokens(slice, split + 1, n);
  res.surface = head;
  if (!head.empty() && !tail.empty())
    res.subtriples.push_back({head, {slice.toks[split]->surface, tail}});
  return res;
}

}  // namespace

std::vector<CleanTriple> clean_triple(const RawTriple& raw, const AnnotationBundle& bundle,
                                      const std::vector<EntityMention>& question_entities,
                                      const std::vector<EntityMention>& context_entities,
                                      std::vector<DroppedTriple>* dropped) {
  auto drop = [&](const std::string& reason) -> std::vector<CleanTriple> {
    if (dropped) dropped->push_back({raw, reason});
    return {};
  };

  auto sent_it = bundle.sentences.find({raw.locator_title, raw.locator_sentence});
  if (sent_it == bundle.sentences.end()) return drop("unlocated-sentence");
  const TextAnnotations& sent = sent_it->second;

  std::vector<const EntityMention*> known;
  for (const auto& m : question_entities) known.push_back(&m);
  for (const auto& m : context_entities) known.push_back(&m);

  // Subject entity of a sentence, for pronoun resolution: the snapped
  // subject of its first triple, else its first entity mention.
  auto sentence_subject = [&](const std::string& title, int idx) -> std::optional<std::string> {
    auto it = bundle.sentences.find({title, idx});
    if (it == bundle.sentences.end()) return std::nullopt;
    const TextAnnotations& prev = it->second;
    if (!prev.triples.empty()) {
      const std::string& subj = prev.triples.front().subject.surface;
      if (auto snapped = snap_to_mention(subj, known)) return snapped;
      if (!is_pronoun_surface(subj)) return subj;
    }
    if (!prev.entities.empty()) return prev.entities.front().surface;
    return std::nullopt;
  };

  auto clean_argument = [&](const TripleSpan& span, ArgCleanResult& out) -> std::string {
    // pronoun -> previous sentence's subject
    std::string trimmed = text::collapse_whitespace(span.surface);
    if (is_pronoun_surface(trimmed)) {
      if (raw.locator_sentence <= 0) return "no-antecedent";
      auto subject = sentence_subject(raw.locator_title, raw.locator_sentence - 1);
      if (!subject) return "no-antecedent";
      out.surface = *subject;
      return "";
    }
    if (auto snapped = snap_to_mention(trimmed, known)) {
      out.surface = *snapped;
      return "";
    }
    TokenSlice slice = tokens_in_span(sent, span);
    if (slice.size() == 0) {
      out.surface = trimmed;
      return out.surface.empty() ? "empty-argument" : "";
    }
    if (slice.size() > kReextractTokenLimit) {
      out = reextract_argument(slice);
      if (out.surface.empty()) return "empty-argument";
      if (static_cast<int>(text::split_ws(out.surface).size()) > kDropTokenLimit)
        return "arg-too-long";
      return "";
    }
    out.surface = strip_leading_articles_tokens(slice, 0, slice.size());
    return out.surface.empty() ? "empty-argument" : "";
  };

  ArgCleanResult subj, obj;
  if (auto reason = clean_argument(raw.subject, subj); !reason.empty()) return drop(reason);
  if (auto reason = clean_argument(raw.object, obj); !reason.empty()) return drop(reason);

  // Relation: strip leading auxiliaries and determiners, cut coordinated
  // tails, strip trailing prepositions; never strip to empty.
  TokenSlice rel = tokens_in_span(sent, raw.relation);
  std::string relation_phrase;
  RelationKind kind = RelationKind::Property;
  if (rel.size() == 0) {
    relation_phrase = text::collapse_whitespace(raw.relation.surface);
  } else {
    int b = 0, e = rel.size();
    while (e - b > 1 && is_auxiliary_or_modal(rel.toks[b]->surface, rel.toks[b]->pos)) ++b;
    while (e - b > 1 && rel.toks[b]->pos == "DT") ++b;
    for (int k = b; k < e; ++k) {
      if (rel.toks[k]->pos == "CC" && k > b) {
        e = k;
        break;
      }
    }
    while (e - b > 1 && (rel.toks[e - 1]->pos == "IN" || rel.toks[e - 1]->pos == "TO")) --e;
    if (static_cast<int>(e - b) > kDropTokenLimit) return drop("relation-too-long");
    relation_phrase = rel.join(b, e);
    bool has_verb = false;
    for (int k = b; k < e; ++k)
      if (rel.toks[k]->pos.rfind("VB", 0) == 0) has_verb = true;
    kind = has_verb ? RelationKind::Action : RelationKind::Property;
  }
  if (relation_phrase.empty()) return drop("empty-relation");

  if (normalize_entity(subj.surface) == normalize_entity(obj.surface)) return drop("self-loop");

  std::vector<CleanTriple> out;
  CleanTriple main;
  main.subject = subj.surface;
  main.relation = relation_phrase;
  main.object = obj.surface;
  main.kind = kind;
  main.locator_title = raw.locator_title;
  main.locator_sentence = raw.locator_sentence;
  out.push_back(std::move(main));

  for (const auto& arg : {subj, obj}) {
    for (const auto& [s, ro] : arg.subtriples) {
      if (normalize_entity(s) == normalize_entity(ro.second)) continue;
      CleanTriple sub;
      sub.subject = s;
      sub.relation = ro.first;
      sub.object = ro.second;
      sub.kind = RelationKind::Property;
      sub.locator_title = raw.locator_title;
      sub.locator_sentence = raw.locator_sentence;
      out.push_back(std::move(sub));
    }
  }
  return out;
}

std::vector<CleanTriple> clean_all_triples(const AnnotationBundle& bundle,
                                           std::vector<DroppedTriple>* dropped) {
  std::vector<EntityMention> context_entities;
  for (const auto& [loc, ann] : bundle.sentences)
    for (const auto& m : ann.entities) context_entities.push_back(m);

  std::vector<CleanTriple> out;
  for (const auto& [loc, ann] : bundle.sentences) {
    for (const auto& raw : ann.triples) {
      auto cleaned = clean_triple(raw, bundle, bundle.question.entities, context_entities, dropped);
      out.insert(out.end(), cleaned.begin(), cleaned.end());
    }
  }
  return out;
}

EntityGraph build_graph(const std::vector<CleanTriple>& triples,
                        const TextAnnotations& question_ann,
                        const std::vector<EntityMention>& context_entities,
                        const std::string& answer) {
  EntityGraph g;

  auto mention_type = [&](const std::string& key) -> std::string {
    for (const auto& m : question_ann.entities)
      if (normalize_entity(m.surface) == key) return m.ner_type;
    for (const auto& m : context_entities)
      if (normalize_entity(m.surface) == key) return m.ner_type;
    return "";
  };

  auto upsert = [&](const std::string& surface, const std::string& title, int sent) -> std::string {
    std::string key = normalize_entity(surface);
    if (key.empty()) return key;
    EntityNode& node = g.nodes[key];
    if (node.canonical_key.empty()) {
      node.canonical_key = key;
      node.ner_type = mention_type(key);
    }
    node.surfaces.insert(surface);
    if (!title.empty()) node.provenance.insert({title, sent});
    return key;
  };

  for (const auto& t : triples) {
    std::string src = upsert(t.subject, t.locator_title, t.locator_sentence);
    std::string dst = upsert(t.object, t.locator_title, t.locator_sentence);
    if (src.empty() || dst.empty()) continue;
    RelationEdge e;
    e.source = src;
    e.target = dst;
    e.relation_phrase = t.relation;
    e.kind = t.kind;
    e.locator_title = t.locator_title;
    e.locator_sentence = t.locator_sentence;
    g.edges.push_back(std::move(e));
  }

  for (const auto& m : question_ann.entities) {
    std::string key = normalize_entity(m.surface);
    if (!g.nodes.count(key)) continue;
    g.query_entities.insert(key);
    int offset = question_ann.tokens.at(m.first_token).char_start;
    auto it = g.query_entity_offsets.find(key);
    if (it == g.query_entity_offsets.end() || offset < it->second)
      g.query_entity_offsets[key] = offset;
  }

  std::string norm_answer = normalize_entity(answer);
  std::string folded = text::lower(answer);
  if (!norm_answer.empty() && folded != "yes" && folded != "no") {
    if (g.nodes.count(norm_answer)) {
      g.answer_entity = norm_answer;
    } else {
      for (const auto& [key, node] : g.nodes) {  // ordered: first match is deterministic
        bool contains = false;
        for (const auto& s : node.surfaces)
          if (text::contains_token_boundary(s, answer)) contains = true;
        if (contains) {
          g.answer_entity = key;
          break;
        }
      }
    }
  }
  return g;
}

std::string graph_to_json(const EntityGraph& g) {
  json nodes = json::array();
  for (const auto& [key, node] : g.nodes) {
    json prov = json::array();
    for (const auto& [title, idx] : node.provenance) prov.push_back(json::array({title, idx}));
    nodes.push_back(json{{"key", key},
                         {"surfaces", std::vector<std::string>(node.surfaces.begin(),
                                                               node.surfaces.end())},
                         {"ner", node.ner_type},
                         {"provenance", std::move(prov)}});
  }
  json edges = json::array();
  for (const auto& e : g.edges)
    edges.push_back(json{{"source", e.source},
                         {"target", e.target},
                         {"relation", e.relation_phrase},
                         {"kind", e.kind == RelationKind::Property ? "property" : "action"},
                         {"sentence", json::array({e.locator_title, e.locator_sentence})}});
  json doc{{"nodes", std::move(nodes)},
           {"edges", std::move(edges)},
           {"query_entities",
            std::vector<std::string>(g.query_entities.begin(), g.query_entities.end())}};
  if (g.answer_entity) doc["answer_entity"] = *g.answer_entity;
  return doc.dump();
}

}  // namespace hopadv
