#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "hopadv/builtin_annotator.hpp"
#include "hopadv/declarative.hpp"
#include "hopadv/errors.hpp"

using namespace hopadv;

namespace {

const BuiltinAnnotator& annotator() {
  static BuiltinAnnotator ann(
      Lexicons::load(std::string(HOPADV_RESOURCE_DIR) + "/pos_lexicon.json",
                     std::string(HOPADV_RESOURCE_DIR) + "/ner_lexicon.json"));
  return ann;
}

const ConversionRuleSet& rules() {
  static ConversionRuleSet r =
      ConversionRuleSet::load(std::string(HOPADV_RESOURCE_DIR) + "/conversion_rules.json");
  return r;
}

StatementResult convert(const std::string& question, const std::string& fake,
                        std::vector<std::pair<int, std::string>> edits = {}) {
  auto ann = annotator().annotate(question);
  auto tokens = ann.token_surfaces();
  for (const auto& [idx, repl] : edits) tokens[idx] = repl;
  return to_statement(ann, tokens, fake, rules());
}

bool wh_first_token(const std::string& sentence) {
  static const std::set<std::string> wh = {"who", "what", "which", "where",
                                           "when", "why", "how"};
  auto pos = sentence.find(' ');
  std::string first = sentence.substr(0, pos);
  std::string lowered;
  for (char c : first) lowered += static_cast<char>(::tolower(c));
  return wh.count(lowered) > 0;
}

}  // namespace

TEST_CASE("rule file pins the inventory and order") {
  CHECK(rules().version == 1);
  CHECK(rules().rule_order.size() == 6);
  CHECK(rules().rule_order.front() == "wh-subject-copula");
  CHECK(rules().enabled("yesno-polarity"));
}

TEST_CASE("unknown rule names in the data file are rejected") {
  auto path = std::filesystem::temp_directory_path() / "bad_rules.json";
  std::ofstream(path) << R"({"version":1,"rules":[{"name":"mystery-rule"}]})";
  CHECK_THROWS_AS(ConversionRuleSet::load(path.string()), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("simplest subject rule: What is X -> Y is X") {
  auto res = convert("What is the capital of Hawaii?", "Guangzhou");
  REQUIRE(res.ok);
  CHECK(res.sentence == "Guangzhou is the capital of Hawaii.");
  CHECK(res.rule == "wh-subject-copula");
}

TEST_CASE("worked kinship conversion") {
  // mutated question with grandson -> nephew already substituted
  auto res = convert("Who was a grandson of Aurelia Plath and was a fisheries biologist?",
                     "Otto Emil Plath", {{3, "nephew"}});
  REQUIRE(res.ok);
  CHECK(res.sentence == "Otto Emil Plath was a nephew of Aurelia Plath and was a fisheries biologist.");
}

TEST_CASE("WH noun phrase with copula keeps the category noun") {
  auto res = convert("What island is located 808 nmi northwest of Honolulu?", "Guangzhou",
                     {{3, "situated"}, {5, "l/s"}, {6, "southwest"}});
  REQUIRE(res.ok);
  CHECK(res.sentence == "Guangzhou is an island situated 808 l/s southwest of Honolulu.");
}

TEST_CASE("subject WH with a plain verb") {
  auto res = convert("Which city lies north of Seabrook?", "Guangzhou");
  REQUIRE(res.ok);
  CHECK(res.sentence == "Guangzhou lies north of Seabrook.");
  CHECK(res.rule == "wh-subject-verb");
}

TEST_CASE("object WH undoes the inversion and appends the fake answer") {
  auto res = convert("What was the ship named?", "Guangzhou");
  REQUIRE(res.ok);
  CHECK(res.sentence == "The ship was named Guangzhou.");
  CHECK(res.rule == "wh-object-aux");
}

TEST_CASE("where questions take a prepositional placement") {
  auto res = convert("Where was Marcus Merriweather born?", "Guangzhou");
  REQUIRE(res.ok);
  CHECK(res.sentence == "Marcus Merriweather was born in Guangzhou.");
  CHECK(res.rule == "wh-adverb-place-time");
}

TEST_CASE("declarative input matches no rule") {
  auto res = convert("The festival is held in spring.", "Guangzhou");
  CHECK_FALSE(res.ok);
  CHECK(res.reason == "no-rule");
}

TEST_CASE("outputs start with no WH word and contain the fake answer exactly once") {
  const char* questions[] = {
      "What is the capital of Hawaii?",
      "Who was the son of Aurelia Plath?",
      "Which city lies north of Seabrook?",
      "Where was Marcus Merriweather born?",
  };
  for (const char* q : questions) {
    auto res = convert(q, "Guangzhou");
    REQUIRE(res.ok);
    CHECK_FALSE(wh_first_token(res.sentence));
    CHECK(res.sentence.back() == '.');
    // exactly one occurrence of the fake answer
    size_t count = 0, pos = 0;
    while ((pos = res.sentence.find("Guangzhou", pos)) != std::string::npos) {
      ++count;
      ++pos;
    }
    CHECK(count == 1);
  }
}

TEST_CASE("a fake answer already present in the question is a collision") {
  auto res = convert("What is the capital of Hawaii?", "Hawaii");
  CHECK_FALSE(res.ok);
  CHECK(res.reason == "fake-collision");
}

TEST_CASE("competitor extraction around coordinators") {
  auto ann = annotator().annotate(
      "Which band has more members, Glenrock Harriers or Redmoor Quartet?");
  auto pairs = find_competitors(ann);
  REQUIRE_FALSE(pairs.empty());
  const CompetitorPair& pair = pairs.back();
  CHECK(pair.left_surface == "Glenrock Harriers");
  CHECK(pair.right_surface == "Redmoor Quartet");

  auto ann2 = annotator().annotate("Are Abel Ashford and Dora Dunmore both French novelists?");
  auto pairs2 = find_competitors(ann2);
  REQUIRE_FALSE(pairs2.empty());
  CHECK(pairs2.front().left_surface == "Abel Ashford");
  CHECK(pairs2.front().right_surface == "Dora Dunmore");

  CHECK(find_competitors(annotator().annotate("Who was the son of Aurelia Plath?")).empty());
}

TEST_CASE("comparative statement asserts the property of the chosen competitor") {
  auto ann = annotator().annotate(
      "Which band has more members, Glenrock Harriers or Redmoor Quartet?");
  auto tokens = ann.token_surfaces();
  tokens[3] = "fewer";  // perturbed property
  auto pairs = find_competitors(ann);
  REQUIRE_FALSE(pairs.empty());
  auto res = comparison_statement(ann, tokens, pairs.back(), "Redmoor Quartet", rules());
  REQUIRE(res.ok);
  CHECK(res.sentence == "Redmoor Quartet has fewer members.");
}

TEST_CASE("yes/no statements follow the gold polarity") {
  auto ann = annotator().annotate("Are Abel Ashford and Dora Dunmore both French novelists?");
  auto tokens = ann.token_surfaces();
  tokens[6] = "Italian";
  tokens[7] = "essayists";
  auto pairs = find_competitors(ann);
  REQUIRE_FALSE(pairs.empty());

  auto affirmative = yesno_statement(ann, tokens, pairs.front(), true, rules());
  REQUIRE(affirmative.ok);
  CHECK(affirmative.sentence == "Abel Ashford and Dora Dunmore are both Italian essayists.");

  auto negative = yesno_statement(ann, tokens, pairs.front(), false, rules());
  REQUIRE(negative.ok);
  CHECK(negative.sentence == "Abel Ashford and Dora Dunmore are not both Italian essayists.");
}

TEST_CASE("conversion is deterministic given the parse") {
  for (int i = 0; i < 3; ++i) {
    auto a = convert("What island is located 808 nmi northwest of Honolulu?", "Guangzhou");
    auto b = convert("What island is located 808 nmi northwest of Honolulu?", "Guangzhou");
    REQUIRE(a.ok);
    CHECK(a.sentence == b.sentence);
    CHECK(a.rule == b.rule);
  }
}
