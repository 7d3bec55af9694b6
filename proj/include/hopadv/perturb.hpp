#pragma once
// Constrained lexical substitution over hop spans and fake-answer
// generation. Substitutions must keep the coarse POS class and NER
// class, change the stem and the surface, and never touch named
// entities; every applied substitution is logged with enough detail to
// re-check those constraints from the log alone.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "hopadv/annotate.hpp"
#include "hopadv/builtin_annotator.hpp"

namespace hopadv {

struct SubstitutionResources {
  std::unordered_map<std::string, std::vector<std::string>> antonyms;  // lemma -> antonyms
  std::vector<std::string> vector_words;                                // embedding vocabulary
  std::vector<std::vector<float>> vectors;                              // unit-normalized rows
  std::unordered_map<std::string, size_t> vector_index;                 // exact surface match
  Lexicons lexicons;
  std::set<std::string> stopwords;
  int neighbor_top_k = 100;
  std::map<std::string, std::string> file_hashes;  // path -> sha256, for run manifests

  // Loads antonyms.json, vectors.txt, pos_lexicon.json, ner_lexicon.json
  // and stopwords.txt from a resource directory.
  static SubstitutionResources load(const std::string& dir);

  // Extends the POS lexicon with tags observed in corpus annotations.
  void absorb_pos(const TextAnnotations& ann);

  // NER class of a candidate word: lexicon entry, NUMBER for numerics,
  // empty for plain words.
  std::string ner_class_of(const std::string& word) const;
  bool pos_class_allowed(const std::string& word, PosClass cls) const;
};

struct SubstitutionRecord {
  int token_index = -1;
  std::string original;
  std::string replacement;
  std::string rule;  // "antonym", "embedding" or "entity-pool"
  std::string original_pos_class;
  std::string replacement_pos_class;
  std::string original_stem;
  std::string replacement_stem;
  std::string original_ner;
  std::string replacement_ner;
};

// First matching antonym of the word's lemma, else the nearest embedding
// neighbor satisfying the constraints, else nothing.
std::optional<std::string> substitute_word(const std::string& word, const std::string& penn_pos,
                                           const std::string& ner_type,
                                           const SubstitutionResources& resources,
                                           SubstitutionRecord* record = nullptr,
                                           const std::string& lemma_hint = "");

struct PerturbResult {
  bool ok = false;  // false: no in-span target could be substituted
  std::vector<std::string> tokens;
  std::vector<SubstitutionRecord> log;
};

// Attempts every in-span common noun, adjective and full verb outside
// named-entity mentions; tokens outside the span are byte-identical.
PerturbResult perturb_span(const TextAnnotations& question_ann, const std::vector<int>& span,
                           const SubstitutionResources& resources);

struct FakeAnswerPool {
  std::map<std::string, std::vector<std::string>> by_type;  // NER type -> sorted answers

  bool empty() const { return by_type.empty(); }
};

// Harvests training-set answers by NER type; "yes"/"no" excluded,
// entries deduplicated and sorted.
FakeAnswerPool build_fake_answer_pool(const std::vector<Example>& training,
                                      const BuiltinAnnotator& typer);

// Per-word substitution of the answer; when any non-stopword word
// resists, falls back to a same-type pool entry drawn with the provided
// RNG. Never returns the gold answer; nullopt means "no-fake-answer".
std::optional<std::string> make_fake_answer(const std::string& answer,
                                            const SubstitutionResources& resources,
                                            const FakeAnswerPool& pool,
                                            const BuiltinAnnotator& typer, std::mt19937_64& rng,
                                            std::vector<SubstitutionRecord>* log = nullptr);

}  // namespace hopadv
