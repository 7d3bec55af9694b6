#pragma once
// First-hop sub-question span and Bridging/Intersection prediction.
// Two paths: a trainable span model (see span_model.hpp) and the
// deterministic constituency-based fallback here.

#include <optional>
#include <string>
#include <vector>

#include "hopadv/annotate.hpp"
#include "hopadv/chain.hpp"

namespace hopadv {

class SpanModel;

enum class PredictionSource { Model, Fallback, Human };

struct HopSpanPrediction {
  // Question-token indices, inclusive; 0 <= start <= end < question length.
  int start_index = 0;
  int end_index = 0;
  ReasoningType bridge_type = ReasoningType::Bridging;  // Bridging or Intersection
  double joint_probability = 1.0;
  PredictionSource source = PredictionSource::Fallback;
};

// Model input "[CLS] QUERY [SEP] CHAIN [SEP]", truncated from the chain
// tail down to max_len, with a mask that is true exactly on the query
// token positions.
struct SpanModelInput {
  std::vector<std::string> tokens;
  std::vector<bool> query_mask;
  int query_length = 0;
};

inline constexpr int kSpanModelMaxLen = 150;

SpanModelInput build_span_input(const std::vector<std::string>& question_tokens,
                                const std::vector<std::string>& chain_tokens,
                                int max_len = kSpanModelMaxLen);

// Rule fallback: the smallest S/SBAR/VP/NP constituent that contains the
// chain's start entity and at least one relation word. Intersection iff
// at least two query-entity chains reach the answer over disjoint first
// edges. Throws DataError("entity-unaligned") when the start entity has
// no mention in the question.
HopSpanPrediction heuristic_span(const TextAnnotations& question_ann,
                                 const ReasoningChain& chain,
                                 const std::vector<ReasoningChain>& all_chains);

// Dispatch: model when provided, else the heuristic when allowed.
// Throws ConfigError when no model is loaded and the fallback is off.
HopSpanPrediction predict_span(const TextAnnotations& question_ann,
                               const ReasoningChain& chain,
                               const std::vector<ReasoningChain>& all_chains,
                               const SpanModel* model, bool allow_fallback = true);

// Complement span for second-hop or both-hop attacks: all question
// tokens minus the hop-1 span, the leading WH phrase with its auxiliary,
// and punctuation. May be empty ("2nd hop" is then unavailable).
std::vector<int> hop2_span(const TextAnnotations& question_ann,
                           const HopSpanPrediction& hop1);

// Leading WH phrase plus auxiliary token indices ("What island is ...",
// "Who was ...").
std::vector<int> wh_aux_prefix(const TextAnnotations& question_ann);

// Human span labels (char offsets into the question) as JSON lines:
// {"id": ..., "span_start": ..., "span_end": ..., "type": ...}.
struct SpanLabel {
  std::string id;
  int char_start = 0;
  int char_end = 0;
  ReasoningType type = ReasoningType::Bridging;
};

std::vector<SpanLabel> load_span_labels(const std::string& path);

// Smallest token range covering [char_start, char_end); nullopt when no
// token overlaps.
std::optional<std::pair<int, int>> char_span_to_token_span(const TextAnnotations& ann,
                                                           int char_start, int char_end);

}  // namespace hopadv
