#include "hopadv/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "hopadv/errors.hpp"
#include "hopadv/hopspan.hpp"
#include "hopadv/span_model.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

std::string hop_choice_name(HopChoice h) {
  switch (h) {
    case HopChoice::First: return "first";
    case HopChoice::Second: return "second";
    case HopChoice::Both: return "both";
    case HopChoice::Random: return "random";
  }
  return "first";
}

std::string placement_name(Placement p) {
  switch (p) {
    case Placement::Random: return "random";
    case Placement::First: return "first";
    case Placement::Last: return "last";
  }
  return "random";
}

std::optional<HopChoice> hop_choice_from_name(const std::string& name) {
  if (name == "first") return HopChoice::First;
  if (name == "second") return HopChoice::Second;
  if (name == "both") return HopChoice::Both;
  if (name == "random") return HopChoice::Random;
  return std::nullopt;
}

std::optional<Placement> placement_from_name(const std::string& name) {
  if (name == "random") return Placement::Random;
  if (name == "first") return Placement::First;
  if (name == "last") return Placement::Last;
  return std::nullopt;
}

std::mt19937_64 example_rng(uint64_t seed, const std::string& example_id) {
  std::string digest = sha256_hex(example_id);
  uint64_t h = std::stoull(digest.substr(0, 16), nullptr, 16);
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(h), static_cast<uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

Example insert_adversary(const Example& ex, const std::vector<size_t>& selected,
                         const std::string& sentence, Placement placement, std::mt19937_64& rng,
                         std::map<std::string, int>* positions) {
  Example out = ex;
  std::map<std::string, int> inserted_at;
  for (size_t pi : selected) {
    Paragraph& p = out.context.at(pi);
    int len = static_cast<int>(p.sentences.size());
    int pos = 0;
    switch (placement) {
      case Placement::First: pos = 0; break;
      case Placement::Last: pos = len; break;
      case Placement::Random: pos = static_cast<int>(rng() % static_cast<uint64_t>(len + 1)); break;
    }
    p.sentences.insert(p.sentences.begin() + pos, sentence);
    inserted_at[p.title] = pos;
  }
  for (auto& [title, idx] : out.supporting_facts) {
    auto it = inserted_at.find(title);
    if (it != inserted_at.end() && idx >= it->second) ++idx;
  }
  if (positions) *positions = inserted_at;
  return out;
}

namespace {

void require_context(const AttackContext& ctx) {
  if (!ctx.provider || !ctx.resources || !ctx.pool || !ctx.typer || !ctx.rules || !ctx.scorer)
    throw ConfigError("attack context is missing a dependency");
}

std::vector<int> span_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool matches_answer(const std::string& competitor, const std::string& answer) {
  if (normalize_entity(competitor) == normalize_entity(answer)) return true;
  return text::contains_token_boundary(competitor, answer) ||
         text::contains_token_boundary(answer, competitor);
}

// Everything that is neither the WH prefix, a competitor, the
// coordinator, the leading polar auxiliary nor punctuation: the property
// region of a comparison question.
std::vector<int> comparison_property_span(const TextAnnotations& ann,
                                          const CompetitorPair& pair) {
  const int n = static_cast<int>(ann.tokens.size());
  std::vector<bool> excluded(n, false);
  for (int k : wh_aux_prefix(ann)) excluded[k] = true;
  for (int k = pair.left_first; k <= pair.left_last; ++k) excluded[k] = true;
  for (int k = pair.right_first; k <= pair.right_last; ++k) excluded[k] = true;
  excluded[pair.cc_index] = true;

  std::vector<int> span;
  bool past_leading_aux = false;
  for (int k = 0; k < n; ++k) {
    const std::string& pos = ann.tokens[k].pos;
    bool punct = pos == "." || pos == "," || pos == ":" || pos == "''" || pos == "SYM";
    if (punct) continue;
    if (!past_leading_aux) {
      past_leading_aux = true;
      if (is_auxiliary_or_modal(ann.tokens[k].surface, pos)) continue;  // "Are A and B ..."
    }
    if (!excluded[k]) span.push_back(k);
  }
  return span;
}

struct PipelineState {
  std::vector<size_t> selected;
  AnnotationBundle bundle;
};

// Entity-substitution pass used by the entity-target ablation: every
// question mention is attempted, relation words are untouched.
PerturbResult perturb_entities(const TextAnnotations& question_ann,
                               const SubstitutionResources& resources,
                               const FakeAnswerPool& pool, std::mt19937_64& rng) {
  PerturbResult result;
  result.tokens = question_ann.token_surfaces();
  for (const auto& mention : question_ann.entities) {
    std::optional<std::string> replacement;
    SubstitutionRecord record;
    record.token_index = mention.first_token;
    if (mention.first_token == mention.last_token) {
      const TokenAnn& tok = question_ann.tokens[mention.first_token];
      replacement =
          substitute_word(tok.surface, tok.pos, mention.ner_type, resources, &record, tok.lemma);
    }
    if (!replacement) {
      auto it = pool.by_type.find(mention.ner_type);
      if (it != pool.by_type.end() && !it->second.empty()) {
        for (int attempt = 0; attempt < 10 && !replacement; ++attempt) {
          const std::string& pick = it->second[rng() % it->second.size()];
          if (text::lower(pick) != text::lower(mention.surface)) replacement = pick;
        }
        if (replacement) {
          record.original = mention.surface;
          record.replacement = *replacement;
          record.rule = "entity-pool";
          record.original_ner = mention.ner_type;
          record.replacement_ner = mention.ner_type;
        }
      }
    }
    if (!replacement) continue;
    result.tokens[mention.first_token] = *replacement;
    for (int k = mention.first_token + 1; k <= mention.last_token; ++k) result.tokens[k].clear();
    result.log.push_back(std::move(record));
  }
  result.ok = !result.log.empty();
  return result;
}

}  // namespace

std::pair<Example, AttackOutcome> attack_example(const Example& ex, const AttackConfig& config,
                                                 const AttackContext& ctx) {
  require_context(ctx);
  if (config.target == TargetWords::Entities) return entity_attack_variant(ex, config, ctx);

  AttackOutcome outcome;
  auto skip = [&](const std::string& reason) {
    outcome.status = "skipped";
    outcome.reason = reason;
    return std::make_pair(ex, outcome);
  };

  std::mt19937_64 rng = example_rng(config.seed, ex.id);

  PipelineState state;
  try {
    state.selected = select_paragraphs(ex, *ctx.scorer, config.relevance_threshold);
    state.bundle = annotate_example(ex, state.selected, *ctx.provider);
  } catch (const DataError&) {
    return skip("annotation-error");
  }
  const TextAnnotations& question = state.bundle.question;

  try {
    if (ex.type_tag == "comparison") {
      ReasoningType type = classify_comparison(ex);
      outcome.reasoning_type = reasoning_type_name(type);
      outcome.attacked_hop = "comparison";

      auto pairs = find_competitors(question);
      if (pairs.empty()) return skip("no-rule");
      const CompetitorPair& pair = type == ReasoningType::YesNo ? pairs.front() : pairs.back();

      std::vector<int> span = comparison_property_span(question, pair);
      PerturbResult perturbed = perturb_span(question, span, *ctx.resources);
      if (!perturbed.ok) return skip("unperturbable");
      outcome.substitutions = perturbed.log;

      StatementResult statement;
      if (type == ReasoningType::Comparatives) {
        const std::string competitor = matches_answer(pair.left_surface, ex.answer)
                                           ? pair.right_surface
                                           : pair.left_surface;
        outcome.fake_answer = competitor;
        statement =
            comparison_statement(question, perturbed.tokens, pair, competitor, *ctx.rules);
      } else {
        bool affirmative = text::lower(ex.answer) == "yes";
        statement = yesno_statement(question, perturbed.tokens, pair, affirmative, *ctx.rules);
      }
      if (!statement.ok) return skip(statement.reason);
      outcome.conversion_rule = statement.rule;
      outcome.adversary_sentence = statement.sentence;
    } else {
      // bridge-tagged: build the graph and the reasoning chain
      std::vector<CleanTriple> triples = clean_all_triples(state.bundle);
      std::vector<EntityMention> context_entities;
      for (const auto& [loc, ann] : state.bundle.sentences)
        for (const auto& m : ann.entities) context_entities.push_back(m);
      EntityGraph graph = build_graph(triples, question, context_entities, ex.answer);
      if (config.debug_dumps) outcome.graph_json = graph_to_json(graph);

      std::vector<ReasoningChain> chains = find_chains(graph);
      ReasoningChain primary;
      try {
        primary = select_primary_chain(chains, graph);
      } catch (const DataError&) {
        return skip("no-chain");
      }

      HopSpanPrediction span_pred;
      try {
        span_pred = predict_span(question, primary, chains, ctx.span_model,
                                 config.allow_span_fallback);
      } catch (const DataError&) {
        return skip("entity-unaligned");
      }
      outcome.reasoning_type = reasoning_type_name(span_pred.bridge_type);
      if (config.debug_dumps) outcome.chain_json = chain_to_json(primary, span_pred.bridge_type);

      std::vector<int> hop1;
      for (int k = span_pred.start_index; k <= span_pred.end_index; ++k) hop1.push_back(k);
      std::vector<int> hop2 = hop2_span(question, span_pred);

      HopChoice strategy = config.hop.value_or(span_pred.bridge_type == ReasoningType::Intersection
                                                   ? HopChoice::Random
                                                   : HopChoice::First);
      std::vector<int> span;
      switch (strategy) {
        case HopChoice::First:
          span = hop1;
          outcome.attacked_hop = "first";
          break;
        case HopChoice::Second:
          if (hop2.empty()) return skip("empty-hop2");
          span = hop2;
          outcome.attacked_hop = "second";
          break;
        case HopChoice::Both:
          span = span_union(hop1, hop2);
          outcome.attacked_hop = "both";
          break;
        case HopChoice::Random: {
          bool pick_second = !hop2.empty() && (rng() % 2 == 1);
          span = pick_second ? hop2 : hop1;
          outcome.attacked_hop = pick_second ? "second" : "first";
          break;
        }
      }

      PerturbResult perturbed = perturb_span(question, span, *ctx.resources);
      if (!perturbed.ok) return skip("unperturbable");
      outcome.substitutions = perturbed.log;

      std::string folded_answer = text::lower(ex.answer);
      if (folded_answer == "yes" || folded_answer == "no") return skip("non-entity-answer");
      std::optional<std::string> fake =
          make_fake_answer(ex.answer, *ctx.resources, *ctx.pool, *ctx.typer, rng,
                           &outcome.substitutions);
      if (!fake) return skip("no-fake-answer");
      outcome.fake_answer = *fake;

      StatementResult statement = to_statement(question, perturbed.tokens, *fake, *ctx.rules);
      if (!statement.ok) return skip(statement.reason);
      outcome.conversion_rule = statement.rule;
      outcome.adversary_sentence = statement.sentence;
    }
  } catch (const DataError&) {
    return skip("pipeline-error");
  }

  if (text::contains_token_boundary(outcome.adversary_sentence, ex.answer))
    return skip("gold-in-adversary");

  Example attacked =
      insert_adversary(ex, state.selected, outcome.adversary_sentence, config.placement, rng,
                       &outcome.insertions);
  outcome.status = "attacked";
  return {std::move(attacked), std::move(outcome)};
}

std::pair<Example, AttackOutcome> entity_attack_variant(const Example& ex,
                                                        const AttackConfig& config,
                                                        const AttackContext& ctx) {
  require_context(ctx);
  AttackOutcome outcome;
  outcome.attacked_hop = "entities";
  auto skip = [&](const std::string& reason) {
    outcome.status = "skipped";
    outcome.reason = reason;
    return std::make_pair(ex, outcome);
  };

  std::mt19937_64 rng = example_rng(config.seed, ex.id);

  PipelineState state;
  try {
    state.selected = select_paragraphs(ex, *ctx.scorer, config.relevance_threshold);
    state.bundle = annotate_example(ex, state.selected, *ctx.provider);
  } catch (const DataError&) {
    return skip("annotation-error");
  }
  const TextAnnotations& question = state.bundle.question;
  outcome.reasoning_type =
      ex.type_tag == "comparison" ? reasoning_type_name(classify_comparison(ex)) : "bridging";

  if (question.entities.empty()) return skip("no-entities");
  PerturbResult perturbed = perturb_entities(question, *ctx.resources, *ctx.pool, rng);
  if (!perturbed.ok) return skip("unperturbable");
  outcome.substitutions = perturbed.log;

  try {
    std::string folded_answer = text::lower(ex.answer);
    if (folded_answer == "yes" || folded_answer == "no") return skip("non-entity-answer");
    std::optional<std::string> fake = make_fake_answer(ex.answer, *ctx.resources, *ctx.pool,
                                                       *ctx.typer, rng, &outcome.substitutions);
    if (!fake) return skip("no-fake-answer");
    outcome.fake_answer = *fake;

    StatementResult statement = to_statement(question, perturbed.tokens, *fake, *ctx.rules);
    if (!statement.ok) return skip(statement.reason);
    outcome.conversion_rule = statement.rule;
    outcome.adversary_sentence = statement.sentence;
  } catch (const DataError&) {
    return skip("pipeline-error");
  }

  if (text::contains_token_boundary(outcome.adversary_sentence, ex.answer))
    return skip("gold-in-adversary");

  Example attacked =
      insert_adversary(ex, state.selected, outcome.adversary_sentence, config.placement, rng,
                       &outcome.insertions);
  outcome.status = "attacked";
  return {std::move(attacked), std::move(outcome)};
}

std::pair<std::vector<Example>, std::vector<AttackRecord>> attack_dataset(
    const std::vector<Example>& examples, const AttackConfig& config, const AttackContext& ctx,
    int workers) {
  require_context(ctx);
  if (workers < 1) workers = 1;

  std::vector<Example> out(examples.size());
  std::vector<AttackRecord> records(examples.size());
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= examples.size()) break;
      try {
        auto [attacked, outcome] = attack_example(examples[i], config, ctx);
        out[i] = std::move(attacked);
        records[i] = AttackRecord{examples[i].id, std::move(outcome)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return {std::move(out), std::move(records)};
}

AttackStats summarize(const std::vector<AttackRecord>& records) {
  AttackStats stats;
  stats.total = records.size();
  for (const auto& rec : records) {
    if (rec.outcome.status == "attacked") {
      ++stats.attacked;
    } else {
      ++stats.skipped;
      ++stats.by_reason[rec.outcome.reason];
    }
    if (!rec.outcome.reasoning_type.empty()) ++stats.by_type[rec.outcome.reasoning_type];
  }
  return stats;
}

std::vector<Example> mix_retraining_set(const std::vector<Example>& original,
                                        const std::vector<Example>& adversarial, double fraction,
                                        uint64_t seed, bool include_original) {
  if (fraction < 0.0 || fraction > 1.0) throw ConfigError("mix fraction must lie in [0, 1]");
  std::set<std::string> original_ids;
  for (const auto& ex : original) original_ids.insert(ex.id);
  for (const auto& ex : adversarial)
    if (!original_ids.count(ex.id))
      throw DataError("adversarial id not present in original dataset: " + ex.id);

  size_t count = static_cast<size_t>(std::ceil(fraction * static_cast<double>(adversarial.size())));
  count = std::min(count, adversarial.size());

  std::mt19937_64 rng(seed);
  std::vector<size_t> order(adversarial.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    size_t j = i + rng() % (order.size() - i);
    std::swap(order[i], order[j]);
  }

  std::vector<Example> out;
  if (include_original) out = original;
  for (size_t k = 0; k < count; ++k) {
    Example ex = adversarial[order[k]];
    if (include_original) ex.id += "_adv";
    out.push_back(std::move(ex));
  }
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    size_t j = i + rng() % (out.size() - i);
    std::swap(out[i], out[j]);
  }
  return out;
}

namespace {

json record_to_json(const AttackRecord& rec) {
  json subs = json::array();
  for (const auto& s : rec.outcome.substitutions)
    subs.push_back(json{{"token_index", s.token_index},
                        {"original", s.original},
                        {"replacement", s.replacement},
                        {"rule", s.rule},
                        {"original_pos", s.original_pos_class},
                        {"replacement_pos", s.replacement_pos_class},
                        {"original_stem", s.original_stem},
                        {"replacement_stem", s.replacement_stem},
                        {"original_ner", s.original_ner},
                        {"replacement_ner", s.replacement_ner}});
  json insertions = json::object();
  for (const auto& [title, pos] : rec.outcome.insertions) insertions[title] = pos;
  json doc{{"id", rec.id},
           {"status", rec.outcome.status},
           {"reason", rec.outcome.reason},
           {"type", rec.outcome.reasoning_type},
           {"adversary", rec.outcome.adversary_sentence},
           {"fake_answer", rec.outcome.fake_answer},
           {"hop", rec.outcome.attacked_hop},
           {"rule", rec.outcome.conversion_rule},
           {"insertions", std::move(insertions)},
           {"substitutions", std::move(subs)}};
  if (!rec.outcome.graph_json.empty()) doc["graph"] = json::parse(rec.outcome.graph_json);
  if (!rec.outcome.chain_json.empty()) doc["chain"] = json::parse(rec.outcome.chain_json);
  return doc;
}

}  // namespace

std::string manifest_to_jsonl(const std::vector<AttackRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    out += record_to_json(rec).dump();
    out += '\n';
  }
  return out;
}

std::vector<AttackRecord> manifest_from_jsonl(const std::string& textstr) {
  std::vector<AttackRecord> records;
  size_t begin = 0;
  size_t lineno = 0;
  while (begin < textstr.size()) {
    size_t end = textstr.find('\n', begin);
    if (end == std::string::npos) end = textstr.size();
    std::string line = textstr.substr(begin, end - begin);
    begin = end + 1;
    ++lineno;
    if (text::trim(line).empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("manifest line " + std::to_string(lineno) + ": " + e.what());
    }
    AttackRecord rec;
    rec.id = doc.at("id").get<std::string>();
    rec.outcome.status = doc.value("status", "");
    rec.outcome.reason = doc.value("reason", "");
    rec.outcome.reasoning_type = doc.value("type", "");
    rec.outcome.adversary_sentence = doc.value("adversary", "");
    rec.outcome.fake_answer = doc.value("fake_answer", "");
    rec.outcome.attacked_hop = doc.value("hop", "");
    rec.outcome.conversion_rule = doc.value("rule", "");
    if (doc.contains("insertions"))
      for (auto it = doc["insertions"].begin(); it != doc["insertions"].end(); ++it)
        rec.outcome.insertions[it.key()] = it.value().get<int>();
    if (doc.contains("substitutions")) {
      for (const auto& s : doc["substitutions"]) {
        SubstitutionRecord sub;
        sub.token_index = s.value("token_index", -1);
        sub.original = s.value("original", "");
        sub.replacement = s.value("replacement", "");
        sub.rule = s.value("rule", "");
        sub.original_pos_class = s.value("original_pos", "");
        sub.replacement_pos_class = s.value("replacement_pos", "");
        sub.original_stem = s.value("original_stem", "");
        sub.replacement_stem = s.value("replacement_stem", "");
        sub.original_ner = s.value("original_ner", "");
        sub.replacement_ner = s.value("replacement_ner", "");
        rec.outcome.substitutions.push_back(std::move(sub));
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace hopadv
