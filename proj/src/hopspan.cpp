#include "hopadv/hopspan.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "hopadv/builtin_annotator.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/span_model.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

SpanModelInput build_span_input(const std::vector<std::string>& question_tokens,
                                const std::vector<std::string>& chain_tokens, int max_len) {
  SpanModelInput input;
  input.query_length = static_cast<int>(question_tokens.size());
  input.tokens.push_back("[CLS]");
  for (const auto& t : question_tokens) input.tokens.push_back(text::lower(t));
  input.tokens.push_back("[SEP]");
  for (const auto& t : chain_tokens) input.tokens.push_back(t);
  input.tokens.push_back("[SEP]");

  if (static_cast<int>(input.tokens.size()) > max_len) {
    // truncate the chain tail, keeping the final separator
    input.tokens.resize(max_len - 1);
    input.tokens.push_back("[SEP]");
  }
  input.query_mask.assign(input.tokens.size(), false);
  for (int i = 1; i <= input.query_length && i + 1 < static_cast<int>(input.tokens.size()); ++i)
    input.query_mask[i] = true;
  return input;
}

namespace {

bool is_relation_word(const TextAnnotations& ann, int token_index) {
  const TokenAnn& t = ann.tokens[token_index];
  PosClass c = pos_class(t.pos);
  if (c != PosClass::Noun && c != PosClass::Verb && c != PosClass::Adjective) return false;
  if (is_auxiliary_or_modal(t.surface, t.pos)) return false;
  return !ann.mention_at(token_index).has_value();
}

struct SpanCandidate {
  int first = 0;
  int last = 0;
  bool valid = false;
};

void collect_candidates(const ConstituencyNode& node, const TextAnnotations& ann,
                        int mention_first, int mention_last, bool is_root,
                        SpanCandidate* best) {
  auto [lo, hi] = node.token_range();
  if (lo < 0 || lo > mention_first || hi < mention_last) return;
  static const std::set<std::string> allowed = {"S", "SBAR", "VP", "NP"};
  if (!is_root && allowed.count(node.label)) {
    bool has_relation_word = false;
    for (int k = lo; k <= hi; ++k)
      if (is_relation_word(ann, k)) has_relation_word = true;
    if (has_relation_word) {
      int width = hi - lo;
      if (!best->valid || width < best->last - best->first ||
          (width == best->last - best->first && lo < best->first)) {
        best->first = lo;
        best->last = hi;
        best->valid = true;
      }
    }
  }
  for (const auto& c : node.children)
    collect_candidates(c, ann, mention_first, mention_last, false, best);
}

// When no proper constituent qualifies, take the subject mention plus
// the predicate that follows it, stopping before coordination or a
// relative clause.
SpanCandidate subject_predicate_span(const TextAnnotations& ann, int mention_first,
                                     int mention_last) {
  SpanCandidate span;
  span.first = mention_first;
  span.last = mention_last;
  span.valid = true;
  const int n = static_cast<int>(ann.tokens.size());
  bool saw_relation = false;
  for (int k = mention_last + 1; k < n; ++k) {
    const std::string& pos = ann.tokens[k].pos;
    if (pos == "CC" || is_wh_tag(pos) || pos == "." || pos == ",") break;
    span.last = k;
    if (is_relation_word(ann, k)) saw_relation = true;
  }
  if (!saw_relation) {
    // extend left instead ("the author of X wrote ...")
    for (int k = mention_first - 1; k >= 0; --k) {
      const std::string& pos = ann.tokens[k].pos;
      if (pos == "CC" || is_wh_tag(pos) || pos == "." || pos == ",") break;
      span.first = k;
    }
  }
  return span;
}

}  // namespace

HopSpanPrediction heuristic_span(const TextAnnotations& question_ann,
                                 const ReasoningChain& chain,
                                 const std::vector<ReasoningChain>& all_chains) {
  // locate the chain start among the question mentions
  int mention_first = -1, mention_last = -1;
  for (const auto& m : question_ann.entities) {
    if (normalize_entity(m.surface) == chain.start) {
      mention_first = m.first_token;
      mention_last = m.last_token;
      break;
    }
  }
  if (mention_first < 0) throw DataError("entity-unaligned");

  SpanCandidate best;
  collect_candidates(question_ann.tree, question_ann, mention_first, mention_last,
                     /*is_root=*/true, &best);
  if (!best.valid) best = subject_predicate_span(question_ann, mention_first, mention_last);

  HopSpanPrediction pred;
  pred.start_index = best.first;
  pred.end_index = best.last;
  pred.source = PredictionSource::Fallback;
  pred.joint_probability = 1.0;

  // Intersection when two query entities reach the answer over different
  // first edges.
  std::set<std::pair<std::string, std::string>> first_edges;
  for (const auto& c : all_chains) {
    if (!c.reaches_answer || c.hops.empty()) continue;
    std::string a = c.hops[0].from_entity, b = c.hops[0].to_entity;
    if (b < a) std::swap(a, b);
    first_edges.insert({a, b});
  }
  pred.bridge_type =
      first_edges.size() >= 2 ? ReasoningType::Intersection : ReasoningType::Bridging;
  return pred;
}

HopSpanPrediction predict_span(const TextAnnotations& question_ann, const ReasoningChain& chain,
                               const std::vector<ReasoningChain>& all_chains,
                               const SpanModel* model, bool allow_fallback) {
  if (model) {
    std::vector<std::string> question_tokens;
    for (const auto& t : question_ann.tokens) question_tokens.push_back(t.surface);
    return model->predict(question_tokens, serialize_chain(chain));
  }
  if (!allow_fallback)
    throw ConfigError("no span model loaded and the rule fallback is disabled");
  return heuristic_span(question_ann, chain, all_chains);
}

std::vector<int> wh_aux_prefix(const TextAnnotations& ann) {
  std::vector<int> prefix;
  const int n = static_cast<int>(ann.tokens.size());
  if (n == 0 || !is_wh_tag(ann.tokens[0].pos)) return prefix;
  prefix.push_back(0);
  int i = 1;
  // bare noun run attached to the WH word ("what island", "which band")
  while (i < n && !ann.mention_at(i) &&
         (pos_class(ann.tokens[i].pos) == PosClass::Noun ||
          pos_class(ann.tokens[i].pos) == PosClass::Adjective))
    prefix.push_back(i++);
  // inversion auxiliary; "have/has" is usually a main verb here, so only
  // be/do forms join the prefix
  static const std::set<std::string> inversion_aux = {"is",  "are", "was", "were",
                                                      "did", "does", "do"};
  if (i < n && inversion_aux.count(text::lower(ann.tokens[i].surface))) prefix.push_back(i);
  return prefix;
}

std::vector<int> hop2_span(const TextAnnotations& question_ann, const HopSpanPrediction& hop1) {
  std::vector<bool> excluded(question_ann.tokens.size(), false);
  for (int k = hop1.start_index; k <= hop1.end_index; ++k)
    if (k >= 0 && k < static_cast<int>(excluded.size())) excluded[k] = true;
  for (int k : wh_aux_prefix(question_ann)) excluded[k] = true;

  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(question_ann.tokens.size()); ++k) {
    if (excluded[k]) continue;
    const std::string& pos = question_ann.tokens[k].pos;
    if (pos == "." || pos == "," || pos == ":" || pos == "''" || pos == "SYM") continue;
    out.push_back(k);
  }
  return out;
}

std::vector<SpanLabel> load_span_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open span label file: " + path);
  std::vector<SpanLabel> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("span labels line " + std::to_string(lineno) + ": " + e.what());
    }
    SpanLabel label;
    label.id = j.at("id").get<std::string>();
    label.char_start = j.at("span_start").get<int>();
    label.char_end = j.at("span_end").get<int>();
    std::string type = j.at("type").get<std::string>();
    if (type == "intersection")
      label.type = ReasoningType::Intersection;
    else if (type == "bridging")
      label.type = ReasoningType::Bridging;
    else
      throw DataError("span labels line " + std::to_string(lineno) +
                      ": unknown type \"" + type + "\"");
    out.push_back(std::move(label));
  }
  return out;
}

std::optional<std::pair<int, int>> char_span_to_token_span(const TextAnnotations& ann,
                                                           int char_start, int char_end) {
  int first = -1, last = -1;
  for (int i = 0; i < static_cast<int>(ann.tokens.size()); ++i) {
    const TokenAnn& t = ann.tokens[i];
    bool overlaps = t.char_end > char_start && t.char_start < char_end;
    if (!overlaps) continue;
    if (first < 0) first = i;
    last = i;
  }
  if (first < 0) return std::nullopt;
  return std::make_pair(first, last);
}

}  // namespace hopadv
