#include <string>
#include <vector>

#include "doctest.h"
#include "hopadv/text.hpp"

using namespace hopadv;

TEST_CASE("lower and whitespace") {
  CHECK(text::lower("HAWAII") == "hawaii");
  CHECK(text::collapse_whitespace("  a \t b\n") == "a b");
  CHECK(text::trim("  x  ") == "x");
}

TEST_CASE("number tokens") {
  CHECK(text::is_number_token("808"));
  CHECK(text::is_number_token("7,405"));
  CHECK(text::is_number_token("90.4"));
  CHECK_FALSE(text::is_number_token("l/s"));
  CHECK_FALSE(text::is_number_token("nmi"));
  CHECK_FALSE(text::is_number_token(""));
}

TEST_CASE("porter stemmer fixed points and reductions") {
  CHECK(text::porter_stem("caresses") == "caress");
  CHECK(text::porter_stem("ponies") == "poni");
  CHECK(text::porter_stem("relational") == "relat");
  CHECK(text::porter_stem("hopping") == "hop");
  CHECK(text::porter_stem("falling") == "fall");
  CHECK(text::porter_stem("located") == "locat");
  CHECK(text::porter_stem("situated") == "situat");
  CHECK(text::porter_stem("named") == "name");
  CHECK(text::porter_stem("born") == "born");
  CHECK(text::porter_stem("first") == "first");
  CHECK(text::porter_stem("last") == "last");
  // non-alphabetic tokens stem to themselves
  CHECK(text::porter_stem("1998") == "1998");
  CHECK(text::porter_stem("l/s") == "l/s");
}

TEST_CASE("stems separate the pinned substitution pairs") {
  auto differs = [](const char* a, const char* b) {
    return text::porter_stem(a) != text::porter_stem(b);
  };
  CHECK(differs("first", "last"));
  CHECK(differs("born", "named"));
  CHECK(differs("son", "daughter"));
  CHECK(differs("grandson", "nephew"));
  CHECK(differs("novelists", "essayists"));
  CHECK(differs("french", "italian"));
}

TEST_CASE("token boundary containment") {
  CHECK(text::contains_token_boundary("Otto Plath was born", "Plath"));
  CHECK(text::contains_token_boundary("the laysan island", "Laysan"));
  CHECK_FALSE(text::contains_token_boundary("displather", "plath"));
  CHECK_FALSE(text::contains_token_boundary("plathx y", "plath"));
  CHECK(text::contains_token_boundary("x (Laysan)", "laysan"));
}

TEST_CASE("detokenization spacing") {
  CHECK(text::detokenize({"Hello", ",", "world", "."}) == "Hello, world.");
  CHECK(text::detokenize({"a", "b", "?"}) == "a b?");
  CHECK(text::detokenize({"it", "'s", "fine"}) == "it's fine");
  CHECK(text::detokenize({"", "x", "", "."}) == "x.");
}

TEST_CASE("capitalization helpers") {
  CHECK(text::capitalize_first("otto was here.") == "Otto was here.");
  CHECK(text::capitalize_first("1998 was a year") == "1998 was a year");
  CHECK(text::starts_with_vowel_sound("island"));
  CHECK_FALSE(text::starts_with_vowel_sound("city"));
}
