#include "hopadv/fixture_store.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json span_to_json(const TripleSpan& s) {
  return json{{"text", s.surface}, {"start", s.char_start}, {"end", s.char_end}};
}

TripleSpan span_from_json(const json& j) {
  TripleSpan s;
  s.surface = j.at("text").get<std::string>();
  s.char_start = j.at("start").get<int>();
  s.char_end = j.at("end").get<int>();
  return s;
}

json entry_to_json(const TextAnnotations& ann) {
  json tokens = json::array();
  for (const auto& t : ann.tokens)
    tokens.push_back(json{{"surface", t.surface},
                          {"start", t.char_start},
                          {"end", t.char_end},
                          {"pos", t.pos},
                          {"lemma", t.lemma}});
  json entities = json::array();
  for (const auto& m : ann.entities)
    entities.push_back(json{{"surface", m.surface},
                            {"ner", m.ner_type},
                            {"first", m.first_token},
                            {"last", m.last_token}});
  json triples = json::array();
  for (const auto& t : ann.triples)
    triples.push_back(json{{"subject", span_to_json(t.subject)},
                           {"relation", span_to_json(t.relation)},
                           {"object", span_to_json(t.object)},
                           {"confidence", t.confidence}});
  return json{{"text", ann.text},
              {"tokens", std::move(tokens)},
              {"entities", std::move(entities)},
              {"parse", tree_to_bracketed(ann.tree, ann.tokens)},
              {"triples", std::move(triples)}};
}

TextAnnotations entry_from_json(const json& j) {
  TextAnnotations ann;
  ann.text = j.at("text").get<std::string>();
  for (const auto& t : j.at("tokens")) {
    TokenAnn tok;
    tok.surface = t.at("surface").get<std::string>();
    tok.char_start = t.at("start").get<int>();
    tok.char_end = t.at("end").get<int>();
    tok.pos = t.at("pos").get<std::string>();
    tok.lemma = t.at("lemma").get<std::string>();
    ann.tokens.push_back(std::move(tok));
  }
  for (const auto& e : j.at("entities")) {
    EntityMention m;
    m.surface = e.at("surface").get<std::string>();
    m.ner_type = e.at("ner").get<std::string>();
    m.first_token = e.at("first").get<int>();
    m.last_token = e.at("last").get<int>();
    ann.entities.push_back(std::move(m));
  }
  ann.tree = tree_from_bracketed(j.at("parse").get<std::string>(), ann.tokens);
  for (const auto& t : j.at("triples")) {
    RawTriple tr;
    tr.subject = span_from_json(t.at("subject"));
    tr.relation = span_from_json(t.at("relation"));
    tr.object = span_from_json(t.at("object"));
    tr.confidence = t.at("confidence").get<double>();
    ann.triples.push_back(std::move(tr));
  }
  return ann;
}

}  // namespace

std::string annotations_to_json(const TextAnnotations& ann) {
  return entry_to_json(ann).dump();
}

TextAnnotations annotations_from_json(const std::string& json_text) {
  try {
    return entry_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed annotation entry: ") + e.what());
  }
}

FixtureStore FixtureStore::load(const std::string& dir) {
  FixtureStore store;
  if (!fs::is_directory(dir)) throw ConfigError("fixture directory not found: " + dir);
  std::vector<fs::path> shards;
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (name.rfind("shard-", 0) == 0 && entry.path().extension() == ".json")
      shards.push_back(entry.path());
  }
  std::sort(shards.begin(), shards.end());
  for (const auto& shard : shards) {
    std::ifstream in(shard);
    json doc;
    try {
      in >> doc;
    } catch (const json::parse_error& e) {
      throw DataError("malformed fixture shard " + shard.string() + ": " + e.what());
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      try {
        store.entries_[it.key()] = entry_from_json(it.value());
      } catch (const json::exception& e) {
        throw DataError("malformed fixture entry " + it.key() + ": " + e.what());
      }
    }
  }
  return store;
}

void FixtureStore::save(const std::string& dir) const {
  fs::create_directories(dir);
  const char* hexdigits = "0123456789abcdef";
  for (int shard = 0; shard < 16; ++shard) {
    json doc = json::object();
    for (const auto& [key, ann] : entries_)
      if (!key.empty() && key[0] == hexdigits[shard]) doc[key] = entry_to_json(ann);
    if (doc.empty()) continue;
    fs::path path = fs::path(dir) / (std::string("shard-") + hexdigits[shard] + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write fixture shard: " + path.string());
    out << doc.dump(1) << "\n";
  }
}

void FixtureStore::put(const TextAnnotations& ann) {
  entries_[sha256_hex(ann.text)] = ann;
}

bool FixtureStore::contains(const std::string& textstr) const {
  return entries_.count(sha256_hex(textstr)) > 0;
}

TextAnnotations FixtureStore::get(const std::string& textstr) const {
  auto it = entries_.find(sha256_hex(textstr));
  if (it == entries_.end())
    throw DataError("no stored annotations for text: " +
                    (textstr.size() > 60 ? textstr.substr(0, 60) + "..." : textstr));
  return it->second;
}

TextAnnotations FixtureProvider::annotate(const std::string& textstr) const {
  if (text::trim(textstr).empty()) throw DataError("annotate: empty text");
  return store_.get(textstr);
}

}  // namespace hopadv
