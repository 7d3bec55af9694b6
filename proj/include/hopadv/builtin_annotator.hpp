#pragma once
// A self-contained deterministic annotator: rule tokenizer, lexicon+
// morphology POS tagger, gazetteer/pattern NER, a shallow constituency
// cascade (NP/PP/VP/WHNP/SBAR) and pattern-based relation triples. It is
// the backend used to generate the shipped annotation fixtures and the
// default provider for desk-scale runs.

#include <string>
#include <vector>

#include "hopadv/annotate.hpp"

namespace hopadv {

class BuiltinAnnotator : public AnnotationProvider {
 public:
  BuiltinAnnotator() = default;
  explicit BuiltinAnnotator(Lexicons lexicons);

  std::string name() const override { return "builtin"; }
  TextAnnotations annotate(const std::string& text) const override;

  // Exposed for direct use (answer typing, resource builds).
  std::vector<TokenAnn> tokenize(const std::string& text) const;
  void tag_pos(std::vector<TokenAnn>& tokens) const;
  std::vector<EntityMention> find_entities(const std::vector<TokenAnn>& tokens) const;
  // NER type for a free-standing string such as an answer; falls back to
  // MISC for capitalized phrases and empty for plain text.
  std::string classify_phrase(const std::string& phrase) const;

 private:
  Lexicons lexicons_;
};

// Coarse POS classes used by the substitution constraints.
enum class PosClass { Noun, Verb, Adjective, Adverb, Number, Other };

PosClass pos_class(const std::string& penn_tag);
std::string pos_class_name(PosClass c);

bool is_auxiliary_or_modal(const std::string& surface, const std::string& penn_tag);
bool is_wh_tag(const std::string& penn_tag);

}  // namespace hopadv
