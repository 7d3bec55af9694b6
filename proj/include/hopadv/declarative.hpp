#pragma once
// Conversion of a (mutated) question plus fake answer into a
// grammatical declarative distractor sentence, including the
// comparison-specific constructions. The rule inventory and order are
// pinned by a versioned JSON data file so tests can hold them fixed.

#include <optional>
#include <string>
#include <vector>

#include "hopadv/annotate.hpp"

namespace hopadv {

struct ConversionRuleSet {
  int version = 0;
  std::vector<std::string> rule_order;  // enabled rules, in application order

  static ConversionRuleSet load(const std::string& path);
  bool enabled(const std::string& name) const;
};

struct StatementResult {
  bool ok = false;
  std::string sentence;
  std::string rule;    // name of the applied rule
  std::string reason;  // "no-rule" or a constraint failure when !ok
};

// Applies the first matching WH conversion rule, in the file's order:
// subject WH phrases are replaced by the fake answer, object WH
// questions have their inversion undone with the fake answer appended,
// where/when questions get a prepositional placement. The tree comes
// from the original question; `mutated_tokens` carry the perturbed
// surfaces (the substitution is one token for one token).
StatementResult to_statement(const TextAnnotations& question_ann,
                             const std::vector<std::string>& mutated_tokens,
                             const std::string& fake_answer,
                             const ConversionRuleSet& rules);

// Two argument constituents around a coordinating "and"/"or".
struct CompetitorPair {
  int cc_index = -1;
  int left_first = -1, left_last = -1;
  int right_first = -1, right_last = -1;
  std::string left_surface;
  std::string right_surface;
};

std::vector<CompetitorPair> find_competitors(const TextAnnotations& question_ann);

// Comparatives: assert the perturbed property of the competitor that is
// not the true answer. The fake answer of the attack is that competitor.
StatementResult comparison_statement(const TextAnnotations& question_ann,
                                     const std::vector<std::string>& mutated_tokens,
                                     const CompetitorPair& pair,
                                     const std::string& competitor_surface,
                                     const ConversionRuleSet& rules);

// Yes/No: assert (gold "yes") or negate (gold "no") that the two
// entities share the perturbed property.
StatementResult yesno_statement(const TextAnnotations& question_ann,
                                const std::vector<std::string>& mutated_tokens,
                                const CompetitorPair& pair, bool affirmative,
                                const ConversionRuleSet& rules);

}  // namespace hopadv
