#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hopadv/errors.hpp"
#include "hopadv/perturb.hpp"
#include "hopadv/text.hpp"

using namespace hopadv;

namespace {

const SubstitutionResources& resources() {
  static SubstitutionResources res = SubstitutionResources::load(HOPADV_RESOURCE_DIR);
  return res;
}

const BuiltinAnnotator& annotator() {
  static BuiltinAnnotator ann(resources().lexicons);
  return ann;
}

// Resources with a hand-picked antonym whose stem clashes, to force the
// embedding path.
SubstitutionResources stem_clash_resources() {
  SubstitutionResources res = resources();
  res.antonyms["born"] = {"bornes"};  // same stem after suffix stripping
  res.lexicons.pos["bornes"] = {"VBN"};
  return res;
}

std::vector<int> full_span(const TextAnnotations& ann) {
  std::vector<int> span;
  for (int i = 0; i < static_cast<int>(ann.tokens.size()); ++i) span.push_back(i);
  return span;
}

void check_record_constraints(const SubstitutionRecord& rec) {
  CHECK(rec.original_pos_class == rec.replacement_pos_class);
  CHECK(rec.original_stem != rec.replacement_stem);
  CHECK(text::lower(rec.original) != text::lower(rec.replacement));
  bool ner_ok = rec.original_ner == rec.replacement_ner ||
                (rec.original_ner.empty() && rec.replacement_ner.empty());
  CHECK(ner_ok);
}

}  // namespace

TEST_CASE("worked substitution pairs reproduce with the pinned resources") {
  SubstitutionRecord rec;
  auto first = substitute_word("first", "JJ", "", resources(), &rec);
  REQUIRE(first.has_value());
  CHECK(*first == "last");
  CHECK(rec.rule == "antonym");
  check_record_constraints(rec);

  auto born = substitute_word("born", "VBN", "", resources(), &rec);
  REQUIRE(born.has_value());
  CHECK(*born == "named");
  CHECK(rec.rule == "embedding");
  check_record_constraints(rec);

  auto year = substitute_word("1998", "CD", "NUMBER", resources(), &rec);
  REQUIRE(year.has_value());
  CHECK(*year == "1999");
  check_record_constraints(rec);

  auto son = substitute_word("son", "NN", "", resources(), &rec);
  REQUIRE(son.has_value());
  CHECK(*son == "daughter");
}

TEST_CASE("an antonym sharing the stem is rejected in favor of the embedding path") {
  SubstitutionResources res = stem_clash_resources();
  SubstitutionRecord rec;
  auto result = substitute_word("born", "VBN", "", res, &rec);
  REQUIRE(result.has_value());
  CHECK(*result == "named");
  CHECK(rec.rule == "embedding");
}

TEST_CASE("unknown words yield no substitution") {
  CHECK_FALSE(substitute_word("zyqqur", "NN", "", resources()).has_value());
  // a word with a vector but no valid candidate of the same class
  CHECK_FALSE(substitute_word("Hawaii", "NNP", "LOC", resources()).has_value());
}

TEST_CASE("case of the original surface is preserved") {
  auto result = substitute_word("First", "JJ", "", resources());
  REQUIRE(result.has_value());
  CHECK(*result == "Last");
}

TEST_CASE("perturb_span rewrites the worked kinship span") {
  auto ann = annotator().annotate("Who was the first son of Aurelia Plath?");
  // span: "the first son of Aurelia Plath"
  std::vector<int> span{2, 3, 4, 5, 6, 7};
  PerturbResult result = perturb_span(ann, span, resources());
  REQUIRE(result.ok);
  CHECK(text::detokenize(result.tokens) == "Who was the last daughter of Aurelia Plath?");
  CHECK(result.log.size() == 2);
  for (const auto& rec : result.log) check_record_constraints(rec);
}

TEST_CASE("named entities and out-of-span tokens are never altered") {
  auto ann = annotator().annotate("Who was the first son of Aurelia Plath?");
  std::vector<int> span{2, 3, 4, 5, 6, 7};
  PerturbResult result = perturb_span(ann, span, resources());
  REQUIRE(result.ok);
  // entity tokens
  CHECK(result.tokens[6] == "Aurelia");
  CHECK(result.tokens[7] == "Plath");
  // outside the span, byte identical
  CHECK(result.tokens[0] == "Who");
  CHECK(result.tokens[1] == "was");
  CHECK(result.tokens[8] == "?");
  for (const auto& rec : result.log) {
    CHECK(rec.token_index >= 2);
    CHECK(rec.token_index <= 5);
  }
}

TEST_CASE("a span of only entities is unperturbable") {
  auto ann = annotator().annotate("Was Aurelia Plath there?");
  std::vector<int> span{1, 2};  // the mention only
  PerturbResult result = perturb_span(ann, span, resources());
  CHECK_FALSE(result.ok);
  CHECK(result.tokens == ann.token_surfaces());
}

TEST_CASE("fake answer pool construction") {
  std::vector<Example> train;
  auto add = [&](const std::string& answer) {
    Example ex;
    ex.id = "t" + std::to_string(train.size());
    ex.question = "Q?";
    ex.answer = answer;
    ex.context = {{"P", {"Sentence one."}}};
    ex.supporting_facts = {{"P", 0}};
    train.push_back(ex);
  };
  add("1998");
  add("Paris");
  add("yes");
  add("Paris");  // duplicate collapses

  FakeAnswerPool pool = build_fake_answer_pool(train, annotator());
  REQUIRE(pool.by_type.count("NUMBER"));
  REQUIRE(pool.by_type.count("LOC"));
  CHECK(pool.by_type.at("NUMBER") == std::vector<std::string>{"1998"});
  CHECK(pool.by_type.at("LOC") == std::vector<std::string>{"Paris"});
  CHECK(pool.by_type.size() == 2);  // "yes" excluded

  FakeAnswerPool empty_pool = build_fake_answer_pool({}, annotator());
  CHECK(empty_pool.empty());
}

TEST_CASE("fake answers: per-word substitution, pool fallback, gold exclusion") {
  auto train = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_train.json");
  FakeAnswerPool pool = build_fake_answer_pool(train, annotator());

  std::mt19937_64 rng(7);
  // numeric answers go through substitution
  auto year = make_fake_answer("1998", resources(), pool, annotator(), rng);
  REQUIRE(year.has_value());
  CHECK(*year == "1999");

  // person names resist substitution and fall back to the typed pool
  std::vector<SubstitutionRecord> log;
  auto person = make_fake_answer("Nicholas Farrar Hughes", resources(), pool, annotator(), rng,
                                 &log);
  REQUIRE(person.has_value());
  CHECK(*person == "Otto Emil Plath");
  REQUIRE(log.size() == 1);
  CHECK(log[0].rule == "entity-pool");
  CHECK(log[0].original_ner == "PERSON");

  // the pool never returns the gold answer itself
  auto same = make_fake_answer("Otto Emil Plath", resources(), pool, annotator(), rng);
  CHECK_FALSE(same.has_value());  // single-entry pool, nothing else to pick

  // unknown type with empty pool
  FakeAnswerPool empty;
  auto none = make_fake_answer("Zanzibar Quux", resources(), empty, annotator(), rng);
  CHECK_FALSE(none.has_value());
}

TEST_CASE("fake answers are deterministic under a fixed seed") {
  auto train = load_dataset(std::string(HOPADV_TEST_DATA_DIR) + "/fixture_train.json");
  FakeAnswerPool pool = build_fake_answer_pool(train, annotator());
  for (uint64_t seed : {1ull, 9ull, 77ull}) {
    std::mt19937_64 rng_a(seed), rng_b(seed);
    auto a = make_fake_answer("Nicholas Farrar Hughes", resources(), pool, annotator(), rng_a);
    auto b = make_fake_answer("Nicholas Farrar Hughes", resources(), pool, annotator(), rng_b);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(*a == *b);
  }
}

TEST_CASE("yes/no answers are rejected by precondition") {
  FakeAnswerPool pool;
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(make_fake_answer("yes", resources(), pool, annotator(), rng), DataError);
}

TEST_CASE("resource loading records file hashes and rejects bad paths") {
  const auto& res = resources();
  CHECK(res.file_hashes.size() == 5);
  for (const auto& [path, hash] : res.file_hashes) CHECK(hash.size() == 64);
  CHECK_THROWS_AS(SubstitutionResources::load("/nonexistent-dir"), ConfigError);
}

TEST_CASE("full-span perturbation still skips auxiliaries and stopwords") {
  auto ann = annotator().annotate("Who was the first son of Aurelia Plath?");
  PerturbResult result = perturb_span(ann, full_span(ann), resources());
  REQUIRE(result.ok);
  CHECK(result.tokens[1] == "was");  // auxiliary untouched
}
