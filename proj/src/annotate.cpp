#include "hopadv/annotate.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "hopadv/errors.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

std::pair<int, int> ConstituencyNode::token_range() const {
  if (is_leaf()) return {leaf_token, leaf_token};
  int lo = -1, hi = -1;
  for (const auto& c : children) {
    auto [clo, chi] = c.token_range();
    if (clo < 0) continue;
    if (lo < 0 || clo < lo) lo = clo;
    if (chi > hi) hi = chi;
  }
  return {lo, hi};
}

std::vector<std::string> TextAnnotations::token_surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::optional<size_t> TextAnnotations::mention_at(int token_index) const {
  for (size_t i = 0; i < entities.size(); ++i)
    if (entities[i].first_token <= token_index && token_index <= entities[i].last_token)
      return i;
  return std::nullopt;
}

std::vector<RawTriple> extract_triples(const TextAnnotations& ann) {
  const int n = static_cast<int>(ann.text.size());
  auto check = [&](const TripleSpan& s, const char* field) {
    if (s.char_start < 0 || s.char_end > n || s.char_start > s.char_end)
      throw DataError(std::string("triple ") + field + " span out of sentence bounds");
  };
  for (const auto& t : ann.triples) {
    check(t.subject, "subject");
    check(t.relation, "relation");
    check(t.object, "object");
  }
  return ann.triples;
}

AnnotationBundle annotate_example(const Example& ex, const std::vector<size_t>& selected,
                                  const AnnotationProvider& provider) {
  AnnotationBundle bundle;
  bundle.question = provider.annotate(ex.question);
  for (size_t pi : selected) {
    const Paragraph& p = ex.context.at(pi);
    for (size_t si = 0; si < p.sentences.size(); ++si) {
      TextAnnotations ann = provider.annotate(p.sentences[si]);
      for (auto& t : ann.triples) {
        t.locator_title = p.title;
        t.locator_sentence = static_cast<int>(si);
      }
      bundle.sentences.emplace(std::make_pair(p.title, static_cast<int>(si)), std::move(ann));
    }
  }
  return bundle;
}

Lexicons Lexicons::load(const std::string& pos_path, const std::string& ner_path) {
  Lexicons lex;
  auto read_json = [](const std::string& path) -> json {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon file: " + path);
    json doc;
    try {
      in >> doc;
    } catch (const json::parse_error& e) {
      throw ConfigError("malformed lexicon file " + path + ": " + e.what());
    }
    return doc;
  };

  json pos_doc = read_json(pos_path);
  for (auto it = pos_doc.begin(); it != pos_doc.end(); ++it) {
    std::vector<std::string> tags;
    if (it.value().is_string()) {
      tags.push_back(it.value().get<std::string>());
    } else {
      for (const auto& t : it.value()) tags.push_back(t.get<std::string>());
    }
    lex.pos[it.key()] = std::move(tags);
  }

  json ner_doc = read_json(ner_path);
  if (ner_doc.contains("tag_set")) {
    lex.ner_tag_set.clear();
    for (const auto& t : ner_doc["tag_set"]) lex.ner_tag_set.insert(t.get<std::string>());
  }
  const json& entries = ner_doc.contains("entries") ? ner_doc["entries"] : ner_doc;
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (!it.value().is_string()) continue;
    std::string tag = it.value().get<std::string>();
    if (!lex.ner_tag_set.count(tag))
      throw ConfigError("NER lexicon entry \"" + it.key() + "\" uses tag outside the tag set: " + tag);
    lex.ner[it.key()] = std::move(tag);
  }
  return lex;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

// Penn conventions for brackets inside tokens.
std::string escape_leaf(const std::string& s) {
  if (s == "(") return "-LRB-";
  if (s == ")") return "-RRB-";
  return s;
}

std::string unescape_leaf(const std::string& s) {
  if (s == "-LRB-") return "(";
  if (s == "-RRB-") return ")";
  return s;
}

void write_node(const ConstituencyNode& node, const std::vector<TokenAnn>& tokens,
                std::string& out) {
  if (node.is_leaf()) {
    out += escape_leaf(tokens.at(node.leaf_token).surface);
    return;
  }
  out += '(';
  out += node.label.empty() ? "X" : node.label;
  for (const auto& c : node.children) {
    out += ' ';
    write_node(c, tokens, out);
  }
  out += ')';
}

struct BracketParser {
  const std::string& s;
  size_t pos = 0;
  int next_leaf = 0;
  const std::vector<TokenAnn>& tokens;

  void skip_ws() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }

  ConstituencyNode parse_node() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '(') throw DataError("bad bracketed parse: expected '('");
    ++pos;
    ConstituencyNode node;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '(' && s[pos] != ')')
      node.label += s[pos++];
    skip_ws();
    while (pos < s.size() && s[pos] != ')') {
      if (s[pos] == '(') {
        node.children.push_back(parse_node());
      } else {
        std::string word;
        while (pos < s.size() && s[pos] != ' ' && s[pos] != ')') word += s[pos++];
        ConstituencyNode leaf;
        leaf.leaf_token = next_leaf;
        if (next_leaf >= static_cast<int>(tokens.size()) ||
            unescape_leaf(word) != tokens[next_leaf].surface)
          throw DataError("bracketed parse leaves do not match the token list");
        leaf.label = tokens[next_leaf].pos;
        ++next_leaf;
        node.children.push_back(std::move(leaf));
      }
      skip_ws();
    }
    if (pos >= s.size()) throw DataError("bad bracketed parse: unbalanced brackets");
    ++pos;  // ')'
    return node;
  }
};

}  // namespace

std::string tree_to_bracketed(const ConstituencyNode& node,
                              const std::vector<TokenAnn>& tokens) {
  std::string out;
  write_node(node, tokens, out);
  return out;
}

ConstituencyNode tree_from_bracketed(const std::string& bracketed,
                                     const std::vector<TokenAnn>& tokens) {
  BracketParser parser{bracketed, 0, 0, tokens};
  ConstituencyNode root = parser.parse_node();
  if (parser.next_leaf != static_cast<int>(tokens.size()))
    throw DataError("bracketed parse covers " + std::to_string(parser.next_leaf) + " of " +
                    std::to_string(tokens.size()) + " tokens");
  return root;
}

}  // namespace hopadv
