#pragma once
// Data model and IO for multi-hop QA datasets in the HotpotQA distractor
// JSON layout: a top-level array of records with "_id", "question",
// "answer", "type", "level", "supporting_facts" and "context".

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hopadv {

struct Paragraph {
  std::string title;
  std::vector<std::string> sentences;  // order is identity-bearing

  bool operator==(const Paragraph&) const = default;
};

// A supporting fact addresses (paragraph title, sentence index).
using SupportingFact = std::pair<std::string, int>;

struct Example {
  std::string id;
  std::string question;
  std::string answer;
  std::vector<Paragraph> context;
  std::vector<SupportingFact> supporting_facts;
  std::string type_tag;   // "bridge" or "comparison" as distributed
  std::string level_tag;

  const Paragraph* find_paragraph(const std::string& title) const;

  bool operator==(const Example&) const = default;
};

// Parses a HotpotQA-format JSON array. Throws DataError with the record
// index on malformed JSON or schema violations; every returned Example
// passes validate_example.
std::vector<Example> load_dataset(const std::string& path);

std::vector<Example> parse_dataset(const std::string& json_text);

// Emits the exact HotpotQA key layout so downstream consumers read the
// file unchanged. load_dataset(write_dataset(x)) == x structurally.
void write_dataset(const std::vector<Example>& examples, const std::string& path);

std::string serialize_dataset(const std::vector<Example>& examples);

// Returns human-readable invariant violations; empty means valid.
// Total: never throws on structurally-parsed input.
std::vector<std::string> validate_example(const Example& ex);

}  // namespace hopadv
