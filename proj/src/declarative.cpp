#include "hopadv/declarative.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "hopadv/builtin_annotator.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

namespace {

const std::set<std::string>& known_rules() {
  static const std::set<std::string> s = {
      "wh-subject-copula", "wh-subject-verb", "wh-object-aux",
      "wh-adverb-place-time", "comparative-competitor", "yesno-polarity"};
  return s;
}

bool is_copula(const std::string& surface) {
  static const std::set<std::string> cop = {"is", "are", "was", "were", "am"};
  return cop.count(text::lower(surface)) > 0;
}

bool is_inversion_aux(const std::string& surface) {
  static const std::set<std::string> aux = {"is",  "are",  "was", "were", "am",
                                            "do",  "does", "did", "has",  "have",
                                            "had", "can",  "could", "will", "would"};
  return aux.count(text::lower(surface)) > 0;
}

bool is_punct_pos(const std::string& pos) {
  return pos == "." || pos == "," || pos == ":" || pos == "''" || pos == "SYM" ||
         pos == "-LRB-" || pos == "-RRB-";
}

// Realizes a token index sequence using the mutated surfaces, dropping
// question marks, then capitalizes and terminates with a period.
std::string realize(const std::vector<std::string>& pieces) {
  std::vector<std::string> tokens;
  for (const auto& p : pieces)
    if (!p.empty()) tokens.push_back(p);
  while (!tokens.empty() && (tokens.back() == "?" || tokens.back() == "." || tokens.back() == ","))
    tokens.pop_back();
  tokens.push_back(".");
  return text::capitalize_first(text::detokenize(tokens));
}

int count_token_boundary(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return 0;
  std::string h = text::lower(haystack), n = text::lower(needle);
  int count = 0;
  size_t pos = 0;
  while ((pos = h.find(n, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !text::is_ascii_alnum(h[pos - 1]);
    size_t end = pos + n.size();
    bool right_ok = end == h.size() || !text::is_ascii_alnum(h[end]);
    if (left_ok && right_ok) ++count;
    ++pos;
  }
  return count;
}

StatementResult finish(const std::string& sentence, const std::string& rule,
                       const std::string& fake_answer) {
  StatementResult res;
  res.rule = rule;
  res.sentence = sentence;
  if (!fake_answer.empty() && count_token_boundary(sentence, fake_answer) != 1) {
    res.ok = false;
    res.reason = "fake-collision";
    return res;
  }
  res.ok = true;
  return res;
}

struct QuestionShape {
  std::vector<int> wh;          // WHNP token indices (WH word plus bare noun run)
  int wh_noun = -1;             // noun inside the WH phrase, if any
  int aux = -1;                 // auxiliary directly after the WH phrase
  int first = -1;               // first non-punct token
};

QuestionShape analyze(const TextAnnotations& ann) {
  QuestionShape shape;
  const int n = static_cast<int>(ann.tokens.size());
  for (int i = 0; i < n; ++i) {
    if (!is_punct_pos(ann.tokens[i].pos)) {
      shape.first = i;
      break;
    }
  }
  if (shape.first < 0 || !is_wh_tag(ann.tokens[shape.first].pos)) return shape;
  shape.wh.push_back(shape.first);
  int i = shape.first + 1;
  while (i < n && !ann.mention_at(i) &&
         (pos_class(ann.tokens[i].pos) == PosClass::Noun ||
          pos_class(ann.tokens[i].pos) == PosClass::Adjective) &&
         ann.tokens[i].pos != "NNP") {
    shape.wh.push_back(i);
    if (pos_class(ann.tokens[i].pos) == PosClass::Noun) shape.wh_noun = i;
    ++i;
  }
  if (i < n && is_inversion_aux(ann.tokens[i].surface)) shape.aux = i;
  return shape;
}

}  // namespace

ConversionRuleSet ConversionRuleSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open conversion rule file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed conversion rule file: ") + e.what());
  }
  ConversionRuleSet rules;
  rules.version = doc.value("version", 0);
  for (const auto& r : doc.at("rules")) {
    std::string name = r.at("name").get<std::string>();
    if (!known_rules().count(name))
      throw ConfigError("unknown conversion rule in data file: " + name);
    if (r.value("enabled", true)) rules.rule_order.push_back(name);
  }
  return rules;
}

bool ConversionRuleSet::enabled(const std::string& name) const {
  return std::find(rule_order.begin(), rule_order.end(), name) != rule_order.end();
}

StatementResult to_statement(const TextAnnotations& question_ann,
                             const std::vector<std::string>& mutated_tokens,
                             const std::string& fake_answer, const ConversionRuleSet& rules) {
  StatementResult fail;
  fail.reason = "no-rule";

  const int n = static_cast<int>(question_ann.tokens.size());
  if (n == 0 || mutated_tokens.size() != static_cast<size_t>(n)) return fail;
  QuestionShape shape = analyze(question_ann);
  if (shape.wh.empty()) return fail;

  const std::string& wh_surface = text::lower(question_ann.tokens[shape.first].surface);
  auto tokens_from = [&](int begin, int end_exclusive) {
    std::vector<std::string> out;
    for (int k = begin; k < end_exclusive && k < n; ++k) out.push_back(mutated_tokens[k]);
    return out;
  };
  auto words_from = [&](int begin, int end_exclusive) {  // punctuation dropped
    std::vector<std::string> out;
    for (int k = begin; k < end_exclusive && k < n; ++k)
      if (!is_punct_pos(question_ann.tokens[k].pos)) out.push_back(mutated_tokens[k]);
    return out;
  };
  // end of the noun phrase that follows the auxiliary (the surface subject)
  auto subject_end_after = [&](int aux) {
    int k = aux + 1;
    while (k < n) {
      const std::string& pos = question_ann.tokens[k].pos;
      bool nominal = pos_class(pos) == PosClass::Noun || pos == "DT" || pos == "PRP" ||
                     pos == "PRP$" || pos_class(pos) == PosClass::Adjective;
      if (!nominal) break;
      ++k;
    }
    return k;
  };
  int after_wh = shape.wh.back() + 1;

  for (const std::string& rule : rules.rule_order) {
    if (rule == "wh-adverb-place-time" && (wh_surface == "where" || wh_surface == "when")) {
      // undo inversion, then place the fake answer prepositionally:
      // "Where was X born?" -> "X was born in FAKE."
      if (shape.aux != after_wh || shape.aux + 1 >= n) continue;
      int subj_end = subject_end_after(shape.aux);
      if (subj_end == shape.aux + 1) continue;
      std::vector<std::string> pieces = words_from(shape.aux + 1, subj_end);
      pieces.push_back(mutated_tokens[shape.aux]);
      auto tail = words_from(subj_end, n);
      pieces.insert(pieces.end(), tail.begin(), tail.end());
      pieces.push_back("in");
      pieces.push_back(fake_answer);
      return finish(realize(pieces), rule, fake_answer);
    }
    if (wh_surface != "who" && wh_surface != "what" && wh_surface != "which" &&
        wh_surface != "whom")
      continue;

    if (rule == "wh-subject-copula" && shape.aux == after_wh &&
        is_copula(question_ann.tokens[shape.aux].surface)) {
      // Object reading ("what was the ship named?") has a verb after the
      // post-copula noun phrase; handled by wh-object-aux below.
      bool verb_after_np = false;
      bool saw_np = false;
      for (int k = shape.aux + 1; k < n; ++k) {
        const std::string& pos = question_ann.tokens[k].pos;
        if (pos == "CC" || pos == ",") break;  // coordinated predicates stay subject-reads
        PosClass c = pos_class(pos);
        if (c == PosClass::Noun) saw_np = true;
        if (saw_np && c == PosClass::Verb &&
            !is_auxiliary_or_modal(question_ann.tokens[k].surface, pos)) {
          verb_after_np = true;
          break;
        }
      }
      if (verb_after_np) continue;
      std::vector<std::string> pieces{fake_answer, mutated_tokens[shape.aux]};
      if (shape.wh_noun >= 0) {
        const std::string& noun = mutated_tokens[shape.wh_noun];
        pieces.push_back(text::starts_with_vowel_sound(noun) ? "an" : "a");
        pieces.push_back(text::lower(noun));
      }
      auto rest = tokens_from(shape.aux + 1, n);
      pieces.insert(pieces.end(), rest.begin(), rest.end());
      return finish(realize(pieces), rule, fake_answer);
    }

    if (rule == "wh-subject-verb" && after_wh < n &&
        pos_class(question_ann.tokens[after_wh].pos) == PosClass::Verb &&
        !is_inversion_aux(question_ann.tokens[after_wh].surface)) {
      std::vector<std::string> pieces{fake_answer};
      auto rest = tokens_from(after_wh, n);
      pieces.insert(pieces.end(), rest.begin(), rest.end());
      return finish(realize(pieces), rule, fake_answer);
    }

    if (rule == "wh-object-aux" && shape.aux == after_wh && shape.aux + 1 < n) {
      // subject + aux + remaining predicate + fake answer:
      // "What was the ship named?" -> "The ship was named FAKE."
      int subj_end = subject_end_after(shape.aux);
      if (subj_end == shape.aux + 1) continue;  // no subject; not an object question
      std::vector<std::string> ordered = words_from(shape.aux + 1, subj_end);
      ordered.push_back(mutated_tokens[shape.aux]);
      auto tail = words_from(subj_end, n);
      ordered.insert(ordered.end(), tail.begin(), tail.end());
      ordered.push_back(fake_answer);
      return finish(realize(ordered), rule, fake_answer);
    }
  }
  return fail;
}

std::vector<CompetitorPair> find_competitors(const TextAnnotations& ann) {
  std::vector<CompetitorPair> out;
  const int n = static_cast<int>(ann.tokens.size());

  // smallest NP-ish unit around a token: the entity mention when there is
  // one, else a noun run extended over a leading determiner
  auto unit_ending_at = [&](int i) -> std::pair<int, int> {
    if (i < 0) return {-1, -1};
    if (auto m = ann.mention_at(i)) {
      int first = ann.entities[*m].first_token;
      if (first > 0 && ann.tokens[first - 1].pos == "DT") --first;
      return {first, ann.entities[*m].last_token};
    }
    if (pos_class(ann.tokens[i].pos) != PosClass::Noun) return {-1, -1};
    int first = i;
    while (first > 0 && pos_class(ann.tokens[first - 1].pos) == PosClass::Noun) --first;
    if (first > 0 && ann.tokens[first - 1].pos == "DT") --first;
    return {first, i};
  };
  auto unit_starting_at = [&](int i) -> std::pair<int, int> {
    if (i >= n) return {-1, -1};
    int start = i;
    if (ann.tokens[start].pos == "DT" && start + 1 < n) ++start;
    if (auto m = ann.mention_at(start)) {
      if (ann.entities[*m].first_token != start) return {-1, -1};
      return {i, ann.entities[*m].last_token};
    }
    if (pos_class(ann.tokens[start].pos) != PosClass::Noun) return {-1, -1};
    int last = start;
    while (last + 1 < n && pos_class(ann.tokens[last + 1].pos) == PosClass::Noun &&
           !ann.mention_at(last + 1))
      ++last;
    return {i, last};
  };

  for (int i = 1; i + 1 < n; ++i) {
    if (ann.tokens[i].pos != "CC") continue;
    std::string cc = text::lower(ann.tokens[i].surface);
    if (cc != "and" && cc != "or") continue;
    auto [lf, ll] = unit_ending_at(i - 1);
    auto [rf, rl] = unit_starting_at(i + 1);
    if (lf < 0 || rf < 0) continue;
    CompetitorPair pair;
    pair.cc_index = i;
    pair.left_first = lf;
    pair.left_last = ll;
    pair.right_first = rf;
    pair.right_last = rl;
    auto join = [&](int b, int e) {
      std::vector<std::string> toks;
      for (int k = b; k <= e; ++k) toks.push_back(ann.tokens[k].surface);
      return text::detokenize(toks);
    };
    pair.left_surface = join(lf, ll);
    pair.right_surface = join(rf, rl);
    out.push_back(std::move(pair));
  }
  return out;
}

StatementResult comparison_statement(const TextAnnotations& question_ann,
                                     const std::vector<std::string>& mutated_tokens,
                                     const CompetitorPair& pair,
                                     const std::string& competitor_surface,
                                     const ConversionRuleSet& rules) {
  StatementResult fail;
  fail.reason = "no-rule";
  if (!rules.enabled("comparative-competitor")) return fail;
  const int n = static_cast<int>(question_ann.tokens.size());
  if (mutated_tokens.size() != static_cast<size_t>(n)) return fail;

  // predicate: everything between the WH phrase and the competitor
  // region, falling back to the tail after the competitors
  std::vector<int> prefix;
  QuestionShape shape = analyze(question_ann);
  int pred_begin = shape.wh.empty() ? 0 : shape.wh.back() + 1;
  int pred_end = std::min(pair.left_first, pair.cc_index);  // exclusive
  std::vector<std::string> predicate;
  for (int k = pred_begin; k < pred_end; ++k) {
    if (is_punct_pos(question_ann.tokens[k].pos)) continue;
    predicate.push_back(mutated_tokens[k]);
  }
  if (predicate.empty()) {
    for (int k = pair.right_last + 1; k < n; ++k) {
      if (is_punct_pos(question_ann.tokens[k].pos)) continue;
      predicate.push_back(mutated_tokens[k]);
    }
  }
  if (predicate.empty()) return fail;

  std::vector<std::string> pieces{competitor_surface};
  if (pos_class(question_ann.tokens[pred_begin].pos) != PosClass::Verb &&
      !is_inversion_aux(question_ann.tokens[pred_begin].surface))
    pieces.push_back("is");
  pieces.insert(pieces.end(), predicate.begin(), predicate.end());
  return finish(realize(pieces), "comparative-competitor", competitor_surface);
}

StatementResult yesno_statement(const TextAnnotations& question_ann,
                                const std::vector<std::string>& mutated_tokens,
                                const CompetitorPair& pair, bool affirmative,
                                const ConversionRuleSet& rules) {
  StatementResult fail;
  fail.reason = "no-rule";
  if (!rules.enabled("yesno-polarity")) return fail;
  const int n = static_cast<int>(question_ann.tokens.size());
  if (mutated_tokens.size() != static_cast<size_t>(n)) return fail;

  // polar question: leading auxiliary, competitors joined by the
  // coordinator, then the shared predicate
  int first = -1;
  for (int i = 0; i < n; ++i) {
    if (!is_punct_pos(question_ann.tokens[i].pos)) {
      first = i;
      break;
    }
  }
  if (first < 0 || !is_inversion_aux(question_ann.tokens[first].surface)) return fail;
  if (pair.left_first <= first) return fail;

  std::vector<std::string> pieces;
  for (int k = pair.left_first; k <= pair.left_last; ++k) pieces.push_back(mutated_tokens[k]);
  pieces.push_back(text::lower(question_ann.tokens[pair.cc_index].surface));
  for (int k = pair.right_first; k <= pair.right_last; ++k) pieces.push_back(mutated_tokens[k]);
  pieces.push_back(text::lower(question_ann.tokens[first].surface));
  if (!affirmative) pieces.push_back("not");
  for (int k = pair.right_last + 1; k < n; ++k) {
    if (question_ann.tokens[k].pos == "." || question_ann.tokens[k].pos == "''") continue;
    pieces.push_back(mutated_tokens[k]);
  }
  return finish(realize(pieces), "yesno-polarity", "");
}

}  // namespace hopadv
