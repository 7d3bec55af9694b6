#pragma once
// Linguistic annotations behind a pluggable provider contract. Three
// providers ship: a deterministic rule-based annotator (builtin), a
// replayer over frozen on-disk fixtures keyed by content hash, and an
// HTTP adapter for a CoreNLP-compatible server. Downstream modules only
// see the provider interface, so tests never need a live toolchain.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hopadv/corpus.hpp"

namespace hopadv {

struct TokenAnn {
  std::string surface;
  int char_start = 0;  // offsets into the source text
  int char_end = 0;
  std::string pos;     // Penn-style tag
  std::string lemma;
};

struct EntityMention {
  std::string surface;
  std::string ner_type;  // from the closed tag set in the lexicon config
  int first_token = 0;
  int last_token = 0;    // inclusive
};

struct ConstituencyNode {
  std::string label;
  int leaf_token = -1;  // >= 0 iff this is a leaf
  std::vector<ConstituencyNode> children;

  bool is_leaf() const { return leaf_token >= 0; }
  // Token index range covered by this subtree, inclusive.
  std::pair<int, int> token_range() const;
};

struct TripleSpan {
  std::string surface;
  int char_start = 0;
  int char_end = 0;
};

struct RawTriple {
  TripleSpan subject;
  TripleSpan relation;
  TripleSpan object;
  std::string locator_title;   // filled when attached to an example
  int locator_sentence = -1;
  double confidence = 1.0;
};

// Annotations for one text (a question or a single context sentence).
struct TextAnnotations {
  std::string text;
  std::vector<TokenAnn> tokens;
  std::vector<EntityMention> entities;
  ConstituencyNode tree;
  std::vector<RawTriple> triples;

  std::vector<std::string> token_surfaces() const;
  // Index of the entity mention covering token i, or nullopt.
  std::optional<size_t> mention_at(int token_index) const;
};

// Per-example view: question annotations plus one entry per context
// sentence of the selected paragraphs, keyed by (title, sentence index).
struct AnnotationBundle {
  TextAnnotations question;
  std::map<std::pair<std::string, int>, TextAnnotations> sentences;
};

class AnnotationProvider {
 public:
  virtual ~AnnotationProvider() = default;
  virtual std::string name() const = 0;
  // Deterministic for a fixed provider and version. Throws DataError on
  // empty input or provider failure; never returns silently empty
  // annotations for a failure.
  virtual TextAnnotations annotate(const std::string& text) const = 0;
};

// Returns the triples carried by the annotations after validating that
// every span lies inside the sentence text. Zero triples is legal.
std::vector<RawTriple> extract_triples(const TextAnnotations& ann);

// Annotates the question and every sentence of the paragraphs named in
// `selected` (indices into ex.context).
AnnotationBundle annotate_example(const Example& ex,
                                  const std::vector<size_t>& selected,
                                  const AnnotationProvider& provider);

// ---- lexicon configuration shared by the builtin annotator and the
// substitution resources ----

struct Lexicons {
  // word (lowercased) -> Penn tags in preference order
  std::unordered_map<std::string, std::vector<std::string>> pos;
  // entity surface (lowercased) -> NER type
  std::unordered_map<std::string, std::string> ner;
  std::set<std::string> ner_tag_set = {"PERSON", "ORG", "LOC", "NUMBER", "DATE", "MISC"};

  static Lexicons load(const std::string& pos_path, const std::string& ner_path);
};

// ---- serialization of the fixture format ----

std::string sha256_hex(const std::string& data);

std::string tree_to_bracketed(const ConstituencyNode& node,
                              const std::vector<TokenAnn>& tokens);
ConstituencyNode tree_from_bracketed(const std::string& bracketed,
                                     const std::vector<TokenAnn>& tokens);

// ---- paragraph relevance filter ----

// Contract for the relevance model: higher means the paragraph more
// likely holds a supporting fact for the question. A trained text-pair
// classifier can be plugged in behind this interface; the shipped
// implementation is the IDF-weighted lexical overlap below.
class RelevanceScorer {
 public:
  virtual ~RelevanceScorer() = default;
  virtual double score(const std::string& question, const Paragraph& paragraph) const = 0;
};

class LexicalOverlapScorer : public RelevanceScorer {
 public:
  LexicalOverlapScorer() = default;  // uniform term weights
  // Estimates IDF weights from the paragraphs of a dataset.
  static LexicalOverlapScorer fit(const std::vector<Example>& corpus);

  double score(const std::string& question, const Paragraph& paragraph) const override;

 private:
  std::unordered_map<std::string, double> idf_;
  double unseen_idf_ = 1.0;
};

// Paragraphs scoring above `threshold`, as indices into ex.context in
// original order; falls back to the top-2 by score when fewer than two
// qualify (multi-hop needs at least two).
std::vector<size_t> select_paragraphs(const Example& ex, const RelevanceScorer& scorer,
                                      double threshold);

}  // namespace hopadv
