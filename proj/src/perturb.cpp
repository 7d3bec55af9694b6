#include "hopadv/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open resource file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string match_case(const std::string& replacement, const std::string& original) {
  if (original.empty() || replacement.empty()) return replacement;
  if (original[0] >= 'A' && original[0] <= 'Z') return text::capitalize_first(replacement);
  return replacement;
}

}  // namespace

SubstitutionResources SubstitutionResources::load(const std::string& dir) {
  SubstitutionResources res;
  auto path = [&](const char* name) { return dir + "/" + name; };

  std::string antonyms_text = read_file(path("antonyms.json"));
  res.file_hashes[path("antonyms.json")] = sha256_hex(antonyms_text);
  json antonyms_doc;
  try {
    antonyms_doc = json::parse(antonyms_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed antonyms.json: ") + e.what());
  }
  for (auto it = antonyms_doc.begin(); it != antonyms_doc.end(); ++it) {
    std::vector<std::string> list;
    if (it.value().is_string()) {
      list.push_back(it.value().get<std::string>());
    } else {
      for (const auto& a : it.value()) list.push_back(a.get<std::string>());
    }
    res.antonyms[it.key()] = std::move(list);
  }

  std::string vec_text = read_file(path("vectors.txt"));
  res.file_hashes[path("vectors.txt")] = sha256_hex(vec_text);
  std::istringstream vec_in(vec_text);
  std::string line;
  while (std::getline(vec_in, line)) {
    if (text::trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<float> v;
    float x;
    while (ls >> x) v.push_back(x);
    if (v.empty()) throw ConfigError("vectors.txt line with no values: " + word);
    double norm = 0.0;
    for (float f : v) norm += static_cast<double>(f) * f;
    norm = std::sqrt(norm);
    if (norm > 0)
      for (float& f : v) f = static_cast<float>(f / norm);
    res.vector_index[word] = res.vector_words.size();
    res.vector_words.push_back(word);
    res.vectors.push_back(std::move(v));
  }

  res.lexicons = Lexicons::load(path("pos_lexicon.json"), path("ner_lexicon.json"));
  res.file_hashes[path("pos_lexicon.json")] = sha256_hex(read_file(path("pos_lexicon.json")));
  res.file_hashes[path("ner_lexicon.json")] = sha256_hex(read_file(path("ner_lexicon.json")));

  std::string stop_text = read_file(path("stopwords.txt"));
  res.file_hashes[path("stopwords.txt")] = sha256_hex(stop_text);
  for (auto& w : text::split_ws(stop_text)) res.stopwords.insert(text::lower(w));
  return res;
}

void SubstitutionResources::absorb_pos(const TextAnnotations& ann) {
  for (const auto& t : ann.tokens) {
    auto& tags = lexicons.pos[text::lower(t.surface)];
    if (std::find(tags.begin(), tags.end(), t.pos) == tags.end()) tags.push_back(t.pos);
  }
}

std::string SubstitutionResources::ner_class_of(const std::string& word) const {
  auto it = lexicons.ner.find(text::lower(word));
  if (it != lexicons.ner.end()) return it->second;
  if (text::is_number_token(word)) return "NUMBER";
  return "";
}

bool SubstitutionResources::pos_class_allowed(const std::string& word, PosClass cls) const {
  if (cls == PosClass::Number && text::is_number_token(word)) return true;
  auto it = lexicons.pos.find(text::lower(word));
  if (it == lexicons.pos.end()) return false;
  for (const auto& tag : it->second)
    if (pos_class(tag) == cls) return true;
  return false;
}

std::optional<std::string> substitute_word(const std::string& word, const std::string& penn_pos,
                                           const std::string& ner_type,
                                           const SubstitutionResources& resources,
                                           SubstitutionRecord* record,
                                           const std::string& lemma_hint) {
  const PosClass cls = pos_class(penn_pos);
  const std::string folded = text::lower(word);
  const std::string stem = text::porter_stem(folded);

  auto ner_compatible = [&](const std::string& candidate) {
    std::string cand_type = resources.ner_class_of(candidate);
    return cand_type == ner_type || (cand_type.empty() && ner_type.empty());
  };

  auto admissible = [&](const std::string& candidate) {
    if (text::lower(candidate) == folded) return false;
    if (text::porter_stem(text::lower(candidate)) == stem) return false;
    if (!resources.pos_class_allowed(candidate, cls)) return false;
    return ner_compatible(candidate);
  };

  auto fill_record = [&](const std::string& replacement, const char* rule) {
    if (!record) return;
    record->original = word;
    record->replacement = replacement;
    record->rule = rule;
    record->original_pos_class = pos_class_name(cls);
    record->replacement_pos_class = pos_class_name(cls);
    record->original_stem = stem;
    record->replacement_stem = text::porter_stem(text::lower(replacement));
    record->original_ner = ner_type;
    record->replacement_ner = resources.ner_class_of(replacement);
  };

  // antonym lexicon first, keyed by lemma
  for (const std::string& key : {lemma_hint.empty() ? folded : text::lower(lemma_hint), folded}) {
    auto it = resources.antonyms.find(key);
    if (it == resources.antonyms.end()) continue;
    for (const auto& antonym : it->second) {
      if (!admissible(antonym)) continue;
      std::string replacement = match_case(antonym, word);
      fill_record(replacement, "antonym");
      return replacement;
    }
    break;
  }

  // nearest embedding neighbors; exact surface lookup, no stem fallback
  auto vit = resources.vector_index.find(word);
  if (vit == resources.vector_index.end()) vit = resources.vector_index.find(folded);
  if (vit == resources.vector_index.end()) return std::nullopt;
  const std::vector<float>& query = resources.vectors[vit->second];

  std::vector<std::pair<double, std::string>> scored;
  for (size_t i = 0; i < resources.vector_words.size(); ++i) {
    if (i == vit->second) continue;
    const auto& v = resources.vectors[i];
    if (v.size() != query.size()) continue;
    double dot = 0.0;
    for (size_t k = 0; k < v.size(); ++k) dot += static_cast<double>(v[k]) * query[k];
    scored.emplace_back(dot, resources.vector_words[i]);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  int considered = 0;
  for (const auto& [sim, candidate] : scored) {
    if (++considered > resources.neighbor_top_k) break;
    if (!admissible(candidate)) continue;
    std::string replacement = match_case(candidate, word);
    fill_record(replacement, "embedding");
    return replacement;
  }
  return std::nullopt;
}

PerturbResult perturb_span(const TextAnnotations& question_ann, const std::vector<int>& span,
                           const SubstitutionResources& resources) {
  PerturbResult result;
  result.tokens = question_ann.token_surfaces();

  for (int idx : span) {
    if (idx < 0 || idx >= static_cast<int>(question_ann.tokens.size())) continue;
    const TokenAnn& tok = question_ann.tokens[idx];
    if (question_ann.mention_at(idx)) continue;  // named entities stay
    PosClass cls = pos_class(tok.pos);
    bool common_noun = tok.pos == "NN" || tok.pos == "NNS";
    bool target = common_noun || cls == PosClass::Adjective ||
                  (cls == PosClass::Verb && !is_auxiliary_or_modal(tok.surface, tok.pos));
    if (!target) continue;
    if (resources.stopwords.count(text::lower(tok.surface))) continue;

    SubstitutionRecord record;
    record.token_index = idx;
    auto replacement = substitute_word(tok.surface, tok.pos, /*ner_type=*/"", resources, &record,
                                       tok.lemma);
    if (!replacement) continue;
    result.tokens[idx] = *replacement;
    result.log.push_back(std::move(record));
  }
  result.ok = !result.log.empty();
  return result;
}

FakeAnswerPool build_fake_answer_pool(const std::vector<Example>& training,
                                      const BuiltinAnnotator& typer) {
  FakeAnswerPool pool;
  std::map<std::string, std::set<std::string>> collected;
  for (const auto& ex : training) {
    std::string folded = text::lower(ex.answer);
    if (folded == "yes" || folded == "no" || ex.answer.empty()) continue;
    std::string type = typer.classify_phrase(ex.answer);
    if (type.empty()) continue;
    collected[type].insert(ex.answer);
  }
  for (auto& [type, answers] : collected)
    pool.by_type[type] = std::vector<std::string>(answers.begin(), answers.end());
  return pool;
}

std::optional<std::string> make_fake_answer(const std::string& answer,
                                            const SubstitutionResources& resources,
                                            const FakeAnswerPool& pool,
                                            const BuiltinAnnotator& typer, std::mt19937_64& rng,
                                            std::vector<SubstitutionRecord>* log) {
  const std::string folded_answer = text::lower(answer);
  if (folded_answer == "yes" || folded_answer == "no")
    throw DataError("make_fake_answer called on a yes/no answer");

  std::vector<TokenAnn> tokens = typer.tokenize(answer);
  typer.tag_pos(tokens);

  bool all_substituted = !tokens.empty();
  std::vector<std::string> surfaces;
  std::vector<SubstitutionRecord> records;
  for (const auto& tok : tokens) {
    if (resources.stopwords.count(text::lower(tok.surface)) ||
        pos_class(tok.pos) == PosClass::Other) {
      surfaces.push_back(tok.surface);
      continue;
    }
    SubstitutionRecord record;
    auto replacement = substitute_word(tok.surface, tok.pos, resources.ner_class_of(tok.surface),
                                       resources, &record, tok.lemma);
    if (!replacement) {
      all_substituted = false;
      break;
    }
    surfaces.push_back(*replacement);
    records.push_back(std::move(record));
  }

  if (all_substituted && !records.empty()) {
    std::string fake = text::detokenize(surfaces);
    if (text::lower(fake) != folded_answer) {
      if (log) log->insert(log->end(), records.begin(), records.end());
      return fake;
    }
  }

  // pool fallback, same NER type
  std::string type = typer.classify_phrase(answer);
  if (type.empty()) return std::nullopt;
  auto it = pool.by_type.find(type);
  if (it == pool.by_type.end() || it->second.empty()) return std::nullopt;
  const auto& candidates = it->second;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const std::string& pick = candidates[rng() % candidates.size()];
    if (text::lower(pick) == folded_answer) continue;
    if (log) {
      SubstitutionRecord record;
      record.original = answer;
      record.replacement = pick;
      record.rule = "entity-pool";
      record.original_ner = type;
      record.replacement_ner = type;
      log->push_back(std::move(record));
    }
    return pick;
  }
  return std::nullopt;
}

}  // namespace hopadv
