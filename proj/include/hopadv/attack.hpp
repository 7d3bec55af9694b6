#pragma once
// Per-type adversary assembly, insertion with supporting-fact label
// revision, ablation variants (hop choice, entity targets, placement)
// and retraining-set mixing. Failures never escape: each one becomes a
// skip reason and the example is copied through unchanged, so original
// and adversarial datasets stay id-aligned.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hopadv/annotate.hpp"
#include "hopadv/builtin_annotator.hpp"
#include "hopadv/chain.hpp"
#include "hopadv/corpus.hpp"
#include "hopadv/declarative.hpp"
#include "hopadv/perturb.hpp"

namespace hopadv {

class SpanModel;

enum class HopChoice { First, Second, Both, Random };
enum class Placement { Random, First, Last };
enum class TargetWords { Relations, Entities };

std::string hop_choice_name(HopChoice h);
std::string placement_name(Placement p);
std::optional<HopChoice> hop_choice_from_name(const std::string& name);
std::optional<Placement> placement_from_name(const std::string& name);

struct AttackConfig {
  // unset: first hop for Bridging, random hop for Intersection
  std::optional<HopChoice> hop;
  Placement placement = Placement::Random;
  TargetWords target = TargetWords::Relations;
  uint64_t seed = 0;  // mandatory; recorded in every manifest
  double relevance_threshold = 0.5;
  bool allow_span_fallback = true;
  bool debug_dumps = false;  // fill graph/chain JSON in outcomes
};

struct AttackOutcome {
  std::string status;  // "attacked" or "skipped"
  std::string reason;  // skip reason code, empty when attacked
  std::string adversary_sentence;
  std::string fake_answer;  // empty for yes/no attacks
  std::string attacked_hop; // "first", "second", "both", "comparison"
  std::map<std::string, int> insertions;  // selected paragraph title -> position
  std::string reasoning_type;
  std::string conversion_rule;
  std::vector<SubstitutionRecord> substitutions;
  std::string graph_json;  // only with debug dumps
  std::string chain_json;
};

struct AttackRecord {
  std::string id;
  AttackOutcome outcome;
};

// Read-only dependencies shared across workers.
struct AttackContext {
  const AnnotationProvider* provider = nullptr;
  const SubstitutionResources* resources = nullptr;
  const FakeAnswerPool* pool = nullptr;
  const BuiltinAnnotator* typer = nullptr;  // answer typing and tokenization
  const ConversionRuleSet* rules = nullptr;
  const RelevanceScorer* scorer = nullptr;
  const SpanModel* span_model = nullptr;  // optional; fallback rules otherwise
};

// Deterministic per-example stream: identical for a fixed (seed, id)
// regardless of scheduling.
std::mt19937_64 example_rng(uint64_t seed, const std::string& example_id);

// The full pipeline for one example. The returned example preserves the
// gold answer and every original sentence in order; on failure it is the
// input unchanged with a skip reason in the outcome.
std::pair<Example, AttackOutcome> attack_example(const Example& ex, const AttackConfig& config,
                                                 const AttackContext& ctx);

// Ablation: substitute the question's named entities and leave relation
// words untouched. Dispatched by attack_example for target == Entities.
std::pair<Example, AttackOutcome> entity_attack_variant(const Example& ex,
                                                        const AttackConfig& config,
                                                        const AttackContext& ctx);

// Inserts one copy of the sentence into each selected paragraph at an
// independent position and shifts supporting-fact indices so they keep
// addressing the same sentence text.
Example insert_adversary(const Example& ex, const std::vector<size_t>& selected,
                         const std::string& sentence, Placement placement, std::mt19937_64& rng,
                         std::map<std::string, int>* positions = nullptr);

struct AttackStats {
  size_t total = 0;
  size_t attacked = 0;
  size_t skipped = 0;
  std::map<std::string, size_t> by_reason;
  std::map<std::string, size_t> by_type;
};

// Worker-pool map over the dataset; output order equals input order for
// any worker count.
std::pair<std::vector<Example>, std::vector<AttackRecord>> attack_dataset(
    const std::vector<Example>& examples, const AttackConfig& config, const AttackContext& ctx,
    int workers = 1);

AttackStats summarize(const std::vector<AttackRecord>& records);

// original ∪ seeded sample of ceil(fraction * |adversarial|) examples
// with disambiguated ids, shuffled deterministically. Setting
// include_original=false with fraction 1.0 yields the all-adversarial
// variant.
std::vector<Example> mix_retraining_set(const std::vector<Example>& original,
                                        const std::vector<Example>& adversarial, double fraction,
                                        uint64_t seed, bool include_original = true);

// Manifest lines (JSONL), one record per example.
std::string manifest_to_jsonl(const std::vector<AttackRecord>& records);
std::vector<AttackRecord> manifest_from_jsonl(const std::string& text);

}  // namespace hopadv
