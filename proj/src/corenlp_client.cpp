#include "hopadv/corenlp_client.hpp"

#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

namespace {

std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
  }
  return out;
}

std::string map_ner(const std::string& corenlp_tag) {
  if (corenlp_tag == "PERSON") return "PERSON";
  if (corenlp_tag == "ORGANIZATION") return "ORG";
  if (corenlp_tag == "LOCATION" || corenlp_tag == "CITY" || corenlp_tag == "COUNTRY" ||
      corenlp_tag == "STATE_OR_PROVINCE")
    return "LOC";
  if (corenlp_tag == "DATE" || corenlp_tag == "TIME") return "DATE";
  if (corenlp_tag == "NUMBER" || corenlp_tag == "ORDINAL" || corenlp_tag == "PERCENT" ||
      corenlp_tag == "MONEY")
    return "NUMBER";
  return "MISC";
}

}  // namespace

CoreNlpClient::CoreNlpClient(std::string base_url, int timeout_seconds)
    : timeout_seconds_(timeout_seconds) {
  std::string url = std::move(base_url);
  if (url.rfind("http://", 0) == 0) url = url.substr(7);
  auto colon = url.find(':');
  if (colon == std::string::npos) {
    host_ = url;
  } else {
    host_ = url.substr(0, colon);
    port_ = std::stoi(url.substr(colon + 1));
  }
}

TextAnnotations CoreNlpClient::parse_response(const std::string& body,
                                              const std::string& source_text) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("corenlp: malformed response: ") + e.what());
  }
  if (!doc.contains("sentences") || doc["sentences"].empty())
    throw DataError("corenlp: response carries no sentences");
  const json& sent = doc["sentences"][0];

  TextAnnotations ann;
  ann.text = source_text;
  for (const auto& t : sent.at("tokens")) {
    TokenAnn tok;
    tok.surface = t.contains("originalText") ? t["originalText"].get<std::string>()
                                             : t.at("word").get<std::string>();
    tok.char_start = t.at("characterOffsetBegin").get<int>();
    tok.char_end = t.at("characterOffsetEnd").get<int>();
    tok.pos = t.at("pos").get<std::string>();
    tok.lemma = t.value("lemma", text::lower(tok.surface));
    ann.tokens.push_back(std::move(tok));
  }

  if (sent.contains("entitymentions")) {
    for (const auto& m : sent["entitymentions"]) {
      EntityMention ent;
      ent.surface = m.at("text").get<std::string>();
      ent.ner_type = map_ner(m.value("ner", "MISC"));
      ent.first_token = m.at("tokenBegin").get<int>();
      ent.last_token = m.at("tokenEnd").get<int>() - 1;  // corenlp end is exclusive
      ann.entities.push_back(std::move(ent));
    }
  }

  if (sent.contains("parse")) {
    std::string bracketed = text::collapse_whitespace(sent["parse"].get<std::string>());
    try {
      ann.tree = tree_from_bracketed(bracketed, ann.tokens);
    } catch (const DataError&) {
      ann.tree = ConstituencyNode{};  // token normalization mismatch; flat fallback below
    }
  }
  if (ann.tree.children.empty() && !ann.tokens.empty()) {
    ann.tree.label = "S";
    for (int i = 0; i < static_cast<int>(ann.tokens.size()); ++i) {
      ConstituencyNode leaf;
      leaf.leaf_token = i;
      leaf.label = ann.tokens[i].pos;
      ann.tree.children.push_back(std::move(leaf));
    }
  }

  if (sent.contains("openie")) {
    auto span_of = [&](const json& arr) {
      TripleSpan s;
      int first = arr[0].get<int>();
      int last = arr[1].get<int>() - 1;
      s.char_start = ann.tokens.at(first).char_start;
      s.char_end = ann.tokens.at(last).char_end;
      s.surface = source_text.substr(s.char_start, s.char_end - s.char_start);
      return s;
    };
    for (const auto& t : sent["openie"]) {
      RawTriple triple;
      triple.subject = span_of(t.at("subjectSpan"));
      triple.relation = span_of(t.at("relationSpan"));
      triple.object = span_of(t.at("objectSpan"));
      triple.confidence = 1.0;
      ann.triples.push_back(std::move(triple));
    }
  }
  return ann;
}

TextAnnotations CoreNlpClient::annotate(const std::string& textstr) const {
  if (text::trim(textstr).empty()) throw DataError("annotate: empty text");

  httplib::Client client(host_, port_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);

  const char* props =
      "{\"annotators\":\"tokenize,ssplit,pos,lemma,ner,parse,openie\","
      "\"outputFormat\":\"json\",\"ssplit.isOneSentence\":\"true\"}";
  auto res = client.Post("/?properties=" + url_encode(props), textstr, "text/plain");
  if (!res)
    throw ConfigError("corenlp: annotation server unreachable at " + host_ + ":" +
                      std::to_string(port_));
  if (res->status != 200)
    throw DataError("corenlp: server returned status " + std::to_string(res->status));
  return parse_response(res->body, textstr);
}

}  // namespace hopadv
