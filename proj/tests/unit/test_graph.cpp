#include "doctest.h"
#include "hopadv/builtin_annotator.hpp"
#include "hopadv/graph.hpp"
#include "hopadv/text.hpp"

using namespace hopadv;

namespace {

Lexicons shipped_lexicons() {
  static Lexicons lex = Lexicons::load(std::string(HOPADV_RESOURCE_DIR) + "/pos_lexicon.json",
                                       std::string(HOPADV_RESOURCE_DIR) + "/ner_lexicon.json");
  return lex;
}

const BuiltinAnnotator& annotator() {
  static BuiltinAnnotator ann(shipped_lexicons());
  return ann;
}

// Builds a bundle over one synthetic paragraph.
AnnotationBundle bundle_for(const std::string& question,
                            const std::vector<std::string>& sentences,
                            const std::string& title = "P") {
  AnnotationBundle bundle;
  bundle.question = annotator().annotate(question);
  for (size_t i = 0; i < sentences.size(); ++i) {
    TextAnnotations ann = annotator().annotate(sentences[i]);
    for (auto& t : ann.triples) {
      t.locator_title = title;
      t.locator_sentence = static_cast<int>(i);
    }
    bundle.sentences.emplace(std::make_pair(title, static_cast<int>(i)), std::move(ann));
  }
  return bundle;
}

}  // namespace

TEST_CASE("normalize_entity folds case, whitespace and articles") {
  CHECK(normalize_entity("The  Laysan") == "laysan");
  CHECK(normalize_entity("HAWAII") == normalize_entity("Hawaii"));
  CHECK(normalize_entity("Otto Emil Plath") != normalize_entity("Otto Plath"));
  CHECK(normalize_entity("An Island") == "island");
  // idempotent
  for (const char* s : {"The Glass Harbor", "  a  b  ", "Honolulu"})
    CHECK(normalize_entity(normalize_entity(s)) == normalize_entity(s));
}

TEST_CASE("pronoun subject resolves to the previous sentence's subject") {
  auto bundle = bundle_for("Who was Otto Plath?",
                           {"Otto Plath taught at Merrow College.", "He was born in 1932."});
  std::vector<DroppedTriple> dropped;
  auto cleaned = clean_all_triples(bundle, &dropped);
  bool found = false;
  for (const auto& t : cleaned)
    if (t.subject == "Otto Plath" && t.object == "1932") found = true;
  CHECK(found);
}

TEST_CASE("pronoun in a paragraph-initial sentence is dropped with no-antecedent") {
  auto bundle = bundle_for("Who?", {"He was born in 1932."});
  std::vector<DroppedTriple> dropped;
  auto cleaned = clean_all_triples(bundle, &dropped);
  CHECK(cleaned.empty());
  REQUIRE(dropped.size() == 1);
  CHECK(dropped[0].reason == "no-antecedent");
}

TEST_CASE("over-long argument snaps to a known mention") {
  auto bundle = bundle_for(
      "What island is located 808 nmi northwest of the capital of Hawaii?",
      {"Honolulu is the capital and most populous city of the state of Hawaii."});
  auto cleaned = clean_all_triples(bundle);
  REQUIRE_FALSE(cleaned.empty());
  const CleanTriple& t = cleaned.front();
  CHECK(t.subject == "Honolulu");
  CHECK(t.object == "Hawaii");
  CHECK(t.relation == "capital");
  CHECK(t.kind == RelationKind::Property);
}

TEST_CASE("action relation keeps its verb phrase and classification") {
  auto bundle = bundle_for("Where is Laysan?",
                           {"Laysan is located 808 nmi northwest of Honolulu."});
  auto cleaned = clean_all_triples(bundle);
  REQUIRE(cleaned.size() == 1);
  CHECK(cleaned[0].relation == "located 808 nmi northwest");
  CHECK(cleaned[0].kind == RelationKind::Action);
}

TEST_CASE("clean arguments never exceed the hard token limit") {
  auto bundle = bundle_for(
      "What?",
      {"The committee report on the northern fisheries recommended a lengthy and detailed "
       "schedule of staged improvements to harbor facilities across the region."});
  auto cleaned = clean_all_triples(bundle);
  for (const auto& t : cleaned) {
    CHECK(text::split_ws(t.subject).size() <= kDropTokenLimit);
    CHECK(text::split_ws(t.object).size() <= kDropTokenLimit);
  }
}

TEST_CASE("graph construction over the worked two-paragraph example") {
  AnnotationBundle bundle;
  bundle.question = annotator().annotate(
      "What island is located 808 nmi northwest of Honolulu, the capital of Hawaii?");
  auto add = [&](const std::string& title, int idx, const std::string& sentence) {
    TextAnnotations ann = annotator().annotate(sentence);
    for (auto& t : ann.triples) {
      t.locator_title = title;
      t.locator_sentence = idx;
    }
    bundle.sentences.emplace(std::make_pair(title, idx), std::move(ann));
  };
  add("Honolulu", 0, "Honolulu is the capital and most populous city of the state of Hawaii.");
  add("Laysan", 0, "Laysan is located 808 nmi northwest of Honolulu.");

  std::vector<EntityMention> context_entities;
  for (const auto& [loc, ann] : bundle.sentences)
    for (const auto& m : ann.entities) context_entities.push_back(m);

  auto cleaned = clean_all_triples(bundle);
  EntityGraph g = build_graph(cleaned, bundle.question, context_entities, "Laysan");

  CHECK(g.nodes.size() == 3);
  CHECK(g.edges.size() == 2);
  CHECK(g.nodes.count("hawaii"));
  CHECK(g.nodes.count("honolulu"));
  CHECK(g.nodes.count("laysan"));
  REQUIRE(g.answer_entity.has_value());
  CHECK(*g.answer_entity == "laysan");
  CHECK(g.query_entities.count("hawaii"));
  CHECK(g.query_entities.count("honolulu"));

  // no dangling edge endpoints
  for (const auto& e : g.edges) {
    CHECK(g.nodes.count(e.source));
    CHECK(g.nodes.count(e.target));
  }
}

TEST_CASE("empty graph and non-entity answers") {
  EntityGraph g = build_graph({}, annotator().annotate("Why?"), {}, "yes");
  CHECK(g.nodes.empty());
  CHECK_FALSE(g.answer_entity.has_value());

  // "yes" never resolves even when a node matches textually
  CleanTriple t{"yes men", "made", "films", RelationKind::Action, "P", 0};
  EntityGraph g2 = build_graph({t}, annotator().annotate("Did they?"), {}, "yes");
  CHECK_FALSE(g2.answer_entity.has_value());
}

TEST_CASE("answer resolves by token-boundary containment when not exact") {
  CleanTriple t{"Otto Emil Plath", "taught at", "Merrow College", RelationKind::Action, "P", 0};
  EntityGraph g = build_graph({t}, annotator().annotate("Who taught?"), {}, "Plath");
  REQUIRE(g.answer_entity.has_value());
  CHECK(*g.answer_entity == "otto emil plath");
}

TEST_CASE("graph invariants hold across the shipped fixture") {
  auto fix = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_50.json");
  LexicalOverlapScorer scorer = LexicalOverlapScorer::fit(fix);
  for (const auto& ex : fix) {
    auto selected = select_paragraphs(ex, scorer, 0.5);
    AnnotationBundle bundle = annotate_example(ex, selected, annotator());
    std::vector<EntityMention> context_entities;
    for (const auto& [loc, ann] : bundle.sentences)
      for (const auto& m : ann.entities) context_entities.push_back(m);
    auto cleaned = clean_all_triples(bundle);
    EntityGraph g = build_graph(cleaned, bundle.question, context_entities, ex.answer);
    for (const auto& e : g.edges) {
      CHECK(g.nodes.count(e.source));
      CHECK(g.nodes.count(e.target));
      CHECK_FALSE(e.relation_phrase.empty());
    }
    for (const auto& q : g.query_entities) CHECK(g.nodes.count(q));
    if (g.answer_entity) CHECK(g.nodes.count(*g.answer_entity));
  }
}
