#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "doctest.h"
#include "hopadv/builtin_annotator.hpp"
#include "hopadv/corenlp_client.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/fixture_store.hpp"

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

bool has_mention(const TextAnnotations& ann, const std::string& surface,
                 const std::vector<std::string>& types) {
  for (const auto& m : ann.entities)
    if (m.surface == surface)
      for (const auto& t : types)
        if (m.ner_type == t) return true;
  return false;
}

void check_leaves_in_order(const ConstituencyNode& root, size_t token_count) {
  std::vector<int> leaves;
  std::function<void(const ConstituencyNode&)> walk = [&](const ConstituencyNode& n) {
    if (n.is_leaf()) leaves.push_back(n.leaf_token);
    for (const auto& c : n.children) walk(c);
  };
  walk(root);
  REQUIRE(leaves.size() == token_count);
  for (size_t i = 0; i < leaves.size(); ++i) CHECK(leaves[i] == static_cast<int>(i));
}

}  // namespace

TEST_CASE("empty text is a precondition error") {
  CHECK_THROWS_AS(annotator().annotate(""), DataError);
  CHECK_THROWS_AS(annotator().annotate("   "), DataError);
}

TEST_CASE("token offsets reconstruct the source") {
  const std::string texts[] = {
      "Plath was born in 1932.",
      "Laysan is located 808 nmi northwest of Honolulu.",
      "A 90.4 percent share, worth 7,405 dollars (roughly).",
  };
  for (const auto& s : texts) {
    auto ann = annotator().annotate(s);
    int prev_end = 0;
    for (const auto& t : ann.tokens) {
      CHECK(t.char_start >= prev_end);
      CHECK(s.substr(t.char_start, t.char_end - t.char_start) == t.surface);
      prev_end = t.char_end;
    }
    check_leaves_in_order(ann.tree, ann.tokens.size());
  }
}

TEST_CASE("mentions for a person-like subject and a number") {
  auto ann = annotator().annotate("Plath was born in 1932.");
  CHECK(has_mention(ann, "Plath", {"PERSON", "MISC"}));
  CHECK(has_mention(ann, "1932", {"NUMBER", "DATE"}));
}

TEST_CASE("copular property sentence yields one triple") {
  auto ann = annotator().annotate("Honolulu is the capital of Hawaii.");
  auto triples = extract_triples(ann);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject.surface == "Honolulu");
  CHECK(triples[0].relation.surface == "is the capital of");
  CHECK(triples[0].object.surface == "Hawaii");
}

TEST_CASE("verbless fragment yields no triples") {
  auto ann = annotator().annotate("Honolulu.");
  CHECK(extract_triples(ann).empty());
}

TEST_CASE("fixture store replays byte-identically") {
  FixtureStore store;
  const std::string texts[] = {
      "Plath was born in 1932.",
      "Honolulu is the capital of Hawaii.",
      "Are Abel Ashford and Dora Dunmore both French novelists?",
  };
  for (const auto& s : texts) store.put(annotator().annotate(s));

  auto dir = std::filesystem::temp_directory_path() / "hopadv_fixture_test";
  std::filesystem::remove_all(dir);
  store.save(dir.string());
  FixtureStore loaded = FixtureStore::load(dir.string());
  FixtureProvider provider(loaded);

  for (const auto& s : texts) {
    TextAnnotations direct = annotator().annotate(s);
    TextAnnotations replayed = provider.annotate(s);
    CHECK(annotations_to_json(direct) == annotations_to_json(replayed));
  }
  // saving twice produces identical bytes
  auto dir2 = std::filesystem::temp_directory_path() / "hopadv_fixture_test2";
  std::filesystem::remove_all(dir2);
  loaded.save(dir2.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream a(entry.path(), std::ios::binary);
    std::ifstream b(dir2 / entry.path().filename(), std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
  }
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("fixture miss is an explicit error, never silently empty") {
  FixtureProvider provider((FixtureStore()));
  CHECK_THROWS_AS(provider.annotate("never stored"), DataError);
}

TEST_CASE("committed annotation shards replay the builtin annotator") {
  std::string dir = std::string(HOPADV_TEST_DATA_DIR) + "/annotations";
  REQUIRE(std::filesystem::is_directory(dir));
  FixtureProvider provider(FixtureStore::load(dir));
  auto fix = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_50.json");
  for (size_t i = 0; i < 5; ++i) {
    const auto& ex = fix[i];
    TextAnnotations stored = provider.annotate(ex.question);
    TextAnnotations live = annotator().annotate(ex.question);
    CHECK(annotations_to_json(stored) == annotations_to_json(live));
  }
}

TEST_CASE("bracketed parse round trips") {
  auto ann = annotator().annotate("Who was the father of the author of The Silent Meadow?");
  std::string bracketed = tree_to_bracketed(ann.tree, ann.tokens);
  ConstituencyNode parsed = tree_from_bracketed(bracketed, ann.tokens);
  CHECK(tree_to_bracketed(parsed, ann.tokens) == bracketed);
}

TEST_CASE("corenlp response mapping") {
  const std::string body = R"json({"sentences":[{
    "index":0,
    "parse":"(ROOT (S (NP (NNP Plath)) (VP (VBD was) (VP (VBN born)))))",
    "tokens":[
      {"index":1,"word":"Plath","originalText":"Plath","lemma":"Plath","characterOffsetBegin":0,"characterOffsetEnd":5,"pos":"NNP","ner":"PERSON"},
      {"index":2,"word":"was","originalText":"was","lemma":"be","characterOffsetBegin":6,"characterOffsetEnd":9,"pos":"VBD","ner":"O"},
      {"index":3,"word":"born","originalText":"born","lemma":"bear","characterOffsetBegin":10,"characterOffsetEnd":14,"pos":"VBN","ner":"O"}],
    "entitymentions":[{"text":"Plath","ner":"PERSON","tokenBegin":0,"tokenEnd":1}],
    "openie":[{"subject":"Plath","subjectSpan":[0,1],"relation":"was born","relationSpan":[1,3],"object":"born","objectSpan":[2,3]}]
  }]})json";
  TextAnnotations ann = CoreNlpClient::parse_response(body, "Plath was born");
  REQUIRE(ann.tokens.size() == 3);
  CHECK(ann.tokens[0].pos == "NNP");
  CHECK(ann.tokens[2].lemma == "bear");
  REQUIRE(ann.entities.size() == 1);
  CHECK(ann.entities[0].ner_type == "PERSON");
  CHECK(ann.entities[0].last_token == 0);
  REQUIRE(ann.triples.size() == 1);
  CHECK(ann.triples[0].relation.surface == "was born");
  check_leaves_in_order(ann.tree, 3);
}

TEST_CASE("corenlp server unreachable is an explicit error") {
  CoreNlpClient client("http://127.0.0.1:1", 1);
  CHECK_THROWS_AS(client.annotate("some text"), ConfigError);
}

TEST_CASE("relevance: gold paragraph outranks an unrelated one") {
  auto fix = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_50.json");
  LexicalOverlapScorer scorer = LexicalOverlapScorer::fit(fix);
  const Example& ex = fix[0];  // geography trace
  const Paragraph* gold = ex.find_paragraph("Laysan");
  REQUIRE(gold != nullptr);
  double gold_score = scorer.score(ex.question, *gold);
  for (const auto& p : ex.context) {
    bool is_gold = false;
    for (const auto& [title, idx] : ex.supporting_facts)
      if (title == p.title) is_gold = true;
    if (!is_gold) CHECK(gold_score > scorer.score(ex.question, p));
  }
}

TEST_CASE("relevance: identical text scores at least an empty-overlap paragraph") {
  LexicalOverlapScorer scorer;
  Paragraph same{"Q", {"What island holds the colony?"}};
  Paragraph other{"O", {"Peat bricks dry slowly."}};
  std::string q = "What island holds the colony?";
  CHECK(scorer.score(q, same) >= scorer.score(q, other));
  CHECK(scorer.score(q, same) == doctest::Approx(1.0));
}

TEST_CASE("select_paragraphs thresholds and the top-2 floor") {
  auto fix = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_50.json");
  LexicalOverlapScorer scorer = LexicalOverlapScorer::fit(fix);
  const Example& ex = fix[0];

  auto all = select_paragraphs(ex, scorer, 0.0);
  CHECK(all.size() == ex.context.size());  // every paragraph scores above zero? no: >0 required
  auto top2 = select_paragraphs(ex, scorer, 1.0);
  CHECK(top2.size() == 2);

  // sublist property over the fixture: ordered indices, size >= 2
  for (const auto& e : fix) {
    auto sel = select_paragraphs(e, scorer, 0.5);
    CHECK(sel.size() >= std::min<size_t>(2, e.context.size()));
    for (size_t i = 1; i < sel.size(); ++i) CHECK(sel[i - 1] < sel[i]);
    CHECK(sel.size() <= e.context.size());
  }
}

TEST_CASE("selection keeps the gold paragraphs on the shipped fixture") {
  auto fix = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_50.json");
  LexicalOverlapScorer scorer = LexicalOverlapScorer::fit(fix);
  size_t covered = 0;
  for (const auto& ex : fix) {
    auto sel = select_paragraphs(ex, scorer, 0.5);
    std::set<std::string> chosen;
    for (size_t i : sel) chosen.insert(ex.context[i].title);
    bool all_gold = true;
    for (const auto& [title, idx] : ex.supporting_facts)
      if (!chosen.count(title)) all_gold = false;
    if (all_gold) ++covered;
  }
  CHECK(covered >= 45);  // at least 90% of the fixture keeps its gold evidence
}
