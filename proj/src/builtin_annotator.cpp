#include "hopadv/builtin_annotator.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"

namespace hopadv {

namespace {

using text::is_ascii_alnum;
using text::is_ascii_alpha;
using text::is_ascii_digit;
using text::lower;

const std::unordered_map<std::string, std::string>& closed_class() {
  static const std::unordered_map<std::string, std::string> m = {
      {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"this", "DT"}, {"that", "DT"},
      {"these", "DT"}, {"those", "DT"}, {"both", "DT"}, {"each", "DT"},
      {"every", "DT"}, {"some", "DT"}, {"any", "DT"}, {"no", "DT"},
      {"of", "IN"}, {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"by", "IN"},
      {"from", "IN"}, {"with", "IN"}, {"about", "IN"}, {"as", "IN"},
      {"into", "IN"}, {"through", "IN"}, {"during", "IN"}, {"between", "IN"},
      {"after", "IN"}, {"before", "IN"}, {"under", "IN"}, {"over", "IN"},
      {"near", "IN"}, {"against", "IN"}, {"than", "IN"}, {"for", "IN"},
      {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"},
      {"is", "VBZ"}, {"are", "VBP"}, {"was", "VBD"}, {"were", "VBD"},
      {"be", "VB"}, {"been", "VBN"}, {"being", "VBG"}, {"am", "VBP"},
      {"do", "VBP"}, {"does", "VBZ"}, {"did", "VBD"},
      {"have", "VBP"}, {"has", "VBZ"}, {"had", "VBD"},
      {"will", "MD"}, {"would", "MD"}, {"can", "MD"}, {"could", "MD"},
      {"may", "MD"}, {"might", "MD"}, {"must", "MD"}, {"shall", "MD"},
      {"should", "MD"},
      {"not", "RB"}, {"also", "RB"}, {"only", "RB"}, {"very", "RB"}, {"too", "RB"},
      {"to", "TO"},
      {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"}, {"they", "PRP"},
      {"we", "PRP"}, {"i", "PRP"}, {"you", "PRP"}, {"him", "PRP"},
      {"her", "PRP"}, {"them", "PRP"}, {"us", "PRP"}, {"me", "PRP"},
      {"his", "PRP$"}, {"its", "PRP$"}, {"their", "PRP$"}, {"my", "PRP$"},
      {"your", "PRP$"}, {"our", "PRP$"},
      {"who", "WP"}, {"whom", "WP"}, {"what", "WP"}, {"which", "WDT"},
      {"whose", "WP$"}, {"where", "WRB"}, {"when", "WRB"}, {"why", "WRB"},
      {"how", "WRB"},
      {"there", "EX"},
  };
  return m;
}

bool is_capitalized(const std::string& s) {
  return !s.empty() && s[0] >= 'A' && s[0] <= 'Z';
}

bool is_punct_token(const std::string& s) {
  return s.size() == 1 && !is_ascii_alnum(s[0]);
}

std::string punct_tag(const std::string& s) {
  if (s == "," ) return ",";
  if (s == "." || s == "?" || s == "!") return ".";
  if (s == ":" || s == ";") return ":";
  if (s == "(") return "-LRB-";
  if (s == ")") return "-RRB-";
  if (s == "\"" || s == "'" ) return "''";
  return "SYM";
}

bool ends_with(const std::string& s, const char* suf) {
  size_t n = std::char_traits<char>::length(suf);
  return s.size() >= n && s.compare(s.size() - n, n, suf) == 0;
}

}  // namespace

BuiltinAnnotator::BuiltinAnnotator(Lexicons lexicons) : lexicons_(std::move(lexicons)) {}

std::vector<TokenAnn> BuiltinAnnotator::tokenize(const std::string& textstr) const {
  std::vector<TokenAnn> out;
  const int n = static_cast<int>(textstr.size());
  int i = 0;
  auto push = [&](int b, int e) {
    if (e <= b) return;
    TokenAnn t;
    t.surface = textstr.substr(b, e - b);
    t.char_start = b;
    t.char_end = e;
    out.push_back(std::move(t));
  };
  while (i < n) {
    char c = textstr[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (!is_ascii_alnum(c) && static_cast<unsigned char>(c) < 0x80) {
      push(i, i + 1);
      ++i;
      continue;
    }
    int j = i;
    while (j < n) {
      char d = textstr[j];
      unsigned char ud = static_cast<unsigned char>(d);
      if (std::isspace(ud)) break;
      if (is_ascii_alnum(d) || ud >= 0x80) {
        ++j;
        continue;
      }
      // Word-internal marks stay inside the token when flanked by
      // alphanumerics: hyphens, slashes, apostrophes, commas and periods
      // inside numbers ("l/s", "90.4", "7,405", "O'Neil").
      bool internal = j + 1 < n && j > i && is_ascii_alnum(textstr[j + 1]) &&
                      (d == '-' || d == '/' || d == '\'' || ((d == '.' || d == ',') &&
                        is_ascii_digit(textstr[j - 1]) && is_ascii_digit(textstr[j + 1])));
      if (!internal) break;
      ++j;
    }
    // Trailing period splits ("Hawaii." -> "Hawaii" "."), already ensured
    // because '.' is only consumed between digits.
    push(i, j);
    i = j;
  }
  return out;
}

void BuiltinAnnotator::tag_pos(std::vector<TokenAnn>& tokens) const {
  const auto& closed = closed_class();
  for (size_t i = 0; i < tokens.size(); ++i) {
    TokenAnn& t = tokens[i];
    std::string low = lower(t.surface);
    t.lemma = low;

    if (is_punct_token(t.surface)) {
      t.pos = punct_tag(t.surface);
      continue;
    }
    if (text::is_number_token(t.surface)) {
      t.pos = "CD";
      continue;
    }
    if (auto it = closed.find(low); it != closed.end()) {
      t.pos = it->second;
      continue;
    }
    if (auto it = lexicons_.pos.find(low); it != lexicons_.pos.end() && !it->second.empty()) {
      t.pos = it->second.front();
    } else if (is_capitalized(t.surface) && i > 0) {
      t.pos = "NNP";
    } else if (ends_with(low, "ly")) {
      t.pos = "RB";
    } else if (ends_with(low, "ing") && low.size() > 4) {
      t.pos = "VBG";
    } else if (ends_with(low, "ed") && low.size() > 3) {
      // participle after an auxiliary, simple past otherwise
      bool after_aux = false;
      for (size_t k = i; k-- > 0;) {
        const std::string& p = tokens[k].pos;
        if (p == "VBZ" || p == "VBD" || p == "VBP" || p == "VB" || p == "MD") {
          after_aux = true;
          break;
        }
        if (p == "," || p == "CC" || p == ".") break;
      }
      t.pos = after_aux ? "VBN" : "VBD";
    } else if (ends_with(low, "est") && low.size() > 4) {
      t.pos = "JJS";
    } else if (ends_with(low, "s") && !ends_with(low, "ss") && low.size() > 3) {
      t.pos = "NNS";
    } else if (is_capitalized(t.surface)) {
      t.pos = "NNP";
    } else {
      t.pos = "NN";
    }

    // crude lemma for regular inflection
    if (t.pos == "NNS" && ends_with(low, "s") && !ends_with(low, "ss"))
      t.lemma = low.substr(0, low.size() - 1);
  }

  // Post pass: a VBD directly following a plain noun phrase with a later
  // main verb is usually a participle ("the poet married to X wrote...").
  for (size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].pos == "VBD" && tokens[i - 1].pos == "VBD") tokens[i].pos = "VBN";
  }
}

std::vector<EntityMention> BuiltinAnnotator::find_entities(
    const std::vector<TokenAnn>& tokens) const {
  std::vector<EntityMention> out;
  const size_t n = tokens.size();
  std::vector<bool> used(n, false);

  auto surfaces_join = [&](size_t b, size_t e) {
    std::string s;
    for (size_t k = b; k <= e; ++k) {
      if (!s.empty()) s += ' ';
      s += tokens[k].surface;
    }
    return s;
  };

  // Gazetteer pass, longest match first.
  for (size_t len = std::min<size_t>(n, 5); len >= 1; --len) {
    for (size_t b = 0; b + len <= n; ++b) {
      size_t e = b + len - 1;
      bool overlap = false;
      for (size_t k = b; k <= e; ++k)
        if (used[k]) overlap = true;
      if (overlap) continue;
      std::string key = lower(surfaces_join(b, e));
      auto it = lexicons_.ner.find(key);
      if (it == lexicons_.ner.end()) continue;
      EntityMention m;
      m.surface = surfaces_join(b, e);
      m.ner_type = it->second;
      m.first_token = static_cast<int>(b);
      m.last_token = static_cast<int>(e);
      out.push_back(std::move(m));
      for (size_t k = b; k <= e; ++k) used[k] = true;
    }
    if (len == 1) break;
  }

  // Numbers.
  for (size_t i = 0; i < n; ++i) {
    if (used[i] || tokens[i].pos != "CD") continue;
    EntityMention m;
    m.surface = tokens[i].surface;
    m.ner_type = "NUMBER";
    m.first_token = m.last_token = static_cast<int>(i);
    out.push_back(std::move(m));
    used[i] = true;
  }

  // Runs of capitalized noun-tagged tokens not otherwise typed; lexicon
  // adjectives ("French") and sentence-initial function words stay out.
  size_t i = 0;
  auto run_eligible = [&](size_t k) {
    return !used[k] && is_capitalized(tokens[k].surface) && !is_punct_token(tokens[k].surface) &&
           tokens[k].pos.rfind("NN", 0) == 0;
  };
  while (i < n) {
    if (!run_eligible(i) || (i == 0 && lexicons_.pos.count(lower(tokens[i].surface)))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n && run_eligible(j + 1)) ++j;
    EntityMention m;
    m.surface = surfaces_join(i, j);
    m.ner_type = "MISC";
    m.first_token = static_cast<int>(i);
    m.last_token = static_cast<int>(j);
    out.push_back(std::move(m));
    for (size_t k = i; k <= j; ++k) used[k] = true;
    i = j + 1;
  }

  std::sort(out.begin(), out.end(),
            [](const EntityMention& a, const EntityMention& b) {
              return a.first_token < b.first_token;
            });
  return out;
}

std::string BuiltinAnnotator::classify_phrase(const std::string& phrase) const {
  std::string key = lower(text::collapse_whitespace(phrase));
  if (auto it = lexicons_.ner.find(key); it != lexicons_.ner.end()) return it->second;
  if (text::is_number_token(key)) return "NUMBER";
  auto words = text::split_ws(phrase);
  if (words.empty()) return "";
  bool all_cap = true;
  for (const auto& w : words)
    if (!is_capitalized(w)) all_cap = false;
  if (all_cap) {
    // single-token gazetteer hits inside a longer phrase vote for the type
    for (const auto& w : words) {
      auto it = lexicons_.ner.find(lower(w));
      if (it != lexicons_.ner.end()) return it->second;
    }
    return words.size() >= 2 ? "PERSON" : "MISC";
  }
  return "";
}

// ---- shallow constituency cascade ----

namespace {

struct Chunker {
  const std::vector<TokenAnn>& toks;
  const std::vector<EntityMention>& ents;
  std::vector<bool> in_entity;

  explicit Chunker(const TextAnnotations& ann)
      : toks(ann.tokens), ents(ann.entities), in_entity(ann.tokens.size(), false) {
    for (const auto& m : ents)
      for (int k = m.first_token; k <= m.last_token; ++k) in_entity[k] = true;
  }

  static ConstituencyNode leaf(int i, const std::string& pos) {
    ConstituencyNode n;
    n.leaf_token = i;
    n.label = pos;
    return n;
  }

  bool noun_tag(int i) const {
    const std::string& p = toks[i].pos;
    return p == "NN" || p == "NNS" || p == "NNP" || p == "NNPS" || p == "CD";
  }
  bool adj_tag(int i) const {
    const std::string& p = toks[i].pos;
    return p == "JJ" || p == "JJR" || p == "JJS";
  }
  bool verb_tag(int i) const { return toks[i].pos.rfind("VB", 0) == 0; }

  const EntityMention* entity_starting(int i) const {
    for (const auto& m : ents)
      if (m.first_token == i) return &m;
    return nullptr;
  }

  // Base NP starting at i: determiner/possessive, premodifiers, then a
  // noun head run. Entity mentions are kept whole (they may begin with
  // their own determiner, as book titles do). Returns one past the end,
  // or i if no NP starts here.
  int base_np_end(int i) const {
    const int n = static_cast<int>(toks.size());
    if (i >= n) return i;

    auto consume_heads = [&](int j) {
      while (j < n) {
        if (const EntityMention* m = entity_starting(j)) {
          j = m->last_token + 1;
          continue;
        }
        if (in_entity[j]) break;  // middle of a mention
        if (!noun_tag(j)) break;
        ++j;
      }
      return j;
    };

    if (entity_starting(i)) return consume_heads(i);

    int j = i;
    if (toks[j].pos == "DT" || toks[j].pos == "PRP$") ++j;
    while (j < n && !in_entity[j] &&
           (adj_tag(j) || toks[j].pos == "RBS" || toks[j].pos == "RBR" || toks[j].pos == "CD"))
      ++j;
    int head_start = j;
    j = consume_heads(j);
    if (j == head_start) {
      if (head_start == i && toks[i].pos == "PRP") return i + 1;
      return i;  // no noun head
    }
    return j;
  }

  ConstituencyNode make_np(int b, int e) const {  // [b, e)
    ConstituencyNode np;
    np.label = "NP";
    for (int k = b; k < e; ++k) np.children.push_back(leaf(k, toks[k].pos));
    return np;
  }

  // NP with trailing "of"-style PP attachments: NP (IN NP)*
  ConstituencyNode np_with_pps(int i, int* end_out) const {
    int e = base_np_end(i);
    ConstituencyNode np = make_np(i, e);
    const int n = static_cast<int>(toks.size());
    while (e < n && toks[e].pos == "IN") {
      int after = base_np_end(e + 1);
      if (after == e + 1) break;
      ConstituencyNode pp;
      pp.label = "PP";
      pp.children.push_back(leaf(e, toks[e].pos));
      int sub_end = 0;
      pp.children.push_back(np_with_pps(e + 1, &sub_end));
      e = sub_end;
      ConstituencyNode outer;
      outer.label = "NP";
      outer.children.push_back(std::move(np));
      outer.children.push_back(std::move(pp));
      np = std::move(outer);
    }
    *end_out = e;
    return np;
  }
};

}  // namespace

TextAnnotations BuiltinAnnotator::annotate(const std::string& textstr) const {
  if (text::trim(textstr).empty())
    throw DataError("annotate: empty text");

  TextAnnotations ann;
  ann.text = textstr;
  ann.tokens = tokenize(textstr);
  tag_pos(ann.tokens);
  ann.entities = find_entities(ann.tokens);

  // cascade parse
  Chunker ch(ann);
  const int n = static_cast<int>(ann.tokens.size());
  ConstituencyNode root;
  root.label = "S";

  int i = 0;
  // Leading WH phrase: WH word plus an immediate bare noun run ("what
  // island", "which band").
  if (n > 0 && is_wh_tag(ann.tokens[0].pos)) {
    ConstituencyNode whnp;
    whnp.label = ann.tokens[0].pos == "WRB" ? "WHADVP" : "WHNP";
    whnp.children.push_back(Chunker::leaf(0, ann.tokens[0].pos));
    i = 1;
    if (whnp.label == "WHNP") {
      while (i < n && (ch.noun_tag(i) || ch.adj_tag(i)) && !ch.in_entity[i]) {
        whnp.children.push_back(Chunker::leaf(i, ann.tokens[i].pos));
        ++i;
      }
    }
    root.children.push_back(std::move(whnp));
  }

  while (i < n) {
    const std::string& pos = ann.tokens[i].pos;
    if (pos.rfind("VB", 0) == 0 || pos == "MD") {
      // VP: verb group then complements until a clause boundary
      ConstituencyNode vp;
      vp.label = "VP";
      while (i < n && (ann.tokens[i].pos.rfind("VB", 0) == 0 || ann.tokens[i].pos == "MD" ||
                       (ann.tokens[i].pos == "RB" && i + 1 < n &&
                        ann.tokens[i + 1].pos.rfind("VB", 0) == 0))) {
        vp.children.push_back(Chunker::leaf(i, ann.tokens[i].pos));
        ++i;
      }
      while (i < n) {
        const std::string& p = ann.tokens[i].pos;
        if (p == "CC" || p == "." || p == "," || is_wh_tag(p)) break;
        if (p == "IN") {
          int end = 0;
          ConstituencyNode obj = ch.np_with_pps(i + 1, &end);
          if (end == i + 1) {  // stranded preposition
            vp.children.push_back(Chunker::leaf(i, p));
            ++i;
            continue;
          }
          ConstituencyNode pp;
          pp.label = "PP";
          pp.children.push_back(Chunker::leaf(i, p));
          pp.children.push_back(std::move(obj));
          vp.children.push_back(std::move(pp));
          i = end;
          continue;
        }
        int end = 0;
        ConstituencyNode np = ch.np_with_pps(i, &end);
        if (end > i) {
          vp.children.push_back(std::move(np));
          i = end;
          continue;
        }
        vp.children.push_back(Chunker::leaf(i, p));
        ++i;
      }
      root.children.push_back(std::move(vp));
      continue;
    }
    if (is_wh_tag(pos)) {
      // relative clause: WH + following VP grouped under SBAR
      ConstituencyNode sbar;
      sbar.label = "SBAR";
      ConstituencyNode wh;
      wh.label = pos == "WRB" ? "WHADVP" : "WHNP";
      wh.children.push_back(Chunker::leaf(i, pos));
      sbar.children.push_back(std::move(wh));
      ++i;
      root.children.push_back(std::move(sbar));
      continue;
    }
    {
      int end = 0;
      ConstituencyNode np = ch.np_with_pps(i, &end);
      if (end > i) {
        root.children.push_back(std::move(np));
        i = end;
        continue;
      }
    }
    root.children.push_back(Chunker::leaf(i, pos));
    ++i;
  }

  ann.tree = std::move(root);

  // ---- relation triples over the chunked sentence ----
  // Clause pattern: subject NP, then for each verb-initiated stretch up
  // to a coordinator, relation text from subject end to the final NP.
  struct Seg {
    int vp_begin;  // token index of first verb
    int obj_first, obj_last;  // final NP token range, -1 if none
  };

  auto token_char_span = [&](int first, int last) {
    TripleSpan s;
    s.char_start = ann.tokens[first].char_start;
    s.char_end = ann.tokens[last].char_end;
    s.surface = textstr.substr(s.char_start, s.char_end - s.char_start);
    return s;
  };

  // locate subject: first NP (or pronoun) before the first verb
  int first_verb = -1;
  for (int k = 0; k < n; ++k)
    if (ch.verb_tag(k)) {
      first_verb = k;
      break;
    }
  if (first_verb > 0) {
    int subj_first = -1, subj_last = -1;
    if (auto m = ann.mention_at(first_verb - 1)) {
      subj_first = ann.entities[*m].first_token;
      subj_last = ann.entities[*m].last_token;
    } else {
      int k = first_verb - 1;
      while (k >= 0 && (ch.noun_tag(k) || ann.tokens[k].pos == "PRP")) --k;
      subj_first = k + 1;
      subj_last = first_verb - 1;
      if (subj_first > subj_last && ann.tokens[first_verb - 1].pos == "PRP")
        subj_first = subj_last = first_verb - 1;
    }
    if (subj_first >= 0 && subj_first <= subj_last) {
      // split the remainder into coordinated predicate segments
      std::vector<std::pair<int, int>> segments;  // [begin, end) token ranges
      int seg_begin = first_verb;
      for (int k = first_verb; k < n; ++k) {
        if (ann.tokens[k].pos == "CC" && k + 1 < n && ch.verb_tag(k + 1)) {
          segments.emplace_back(seg_begin, k);
          seg_begin = k + 1;
        }
      }
      segments.emplace_back(seg_begin, n);

      for (auto [b, e] : segments) {
        while (e > b && (ann.tokens[e - 1].pos == "." || ann.tokens[e - 1].pos == "," ||
                         ann.tokens[e - 1].pos == ":"))
          --e;
        if (e <= b || !ch.verb_tag(b)) continue;
        // object = last NP-ish run in [b, e)
        int obj_last = -1, obj_first = -1;
        for (int k = e - 1; k >= b; --k) {
          if (ch.noun_tag(k)) {
            obj_last = k;
            if (auto m = ann.mention_at(k)) {
              obj_first = ann.entities[*m].first_token;
              obj_last = ann.entities[*m].last_token;
            } else {
              int kk = k;
              while (kk >= b && ch.noun_tag(kk) && !ch.in_entity[kk]) --kk;
              obj_first = kk + 1;
              // include a leading determiner/adjectives
              while (obj_first - 1 >= b &&
                     (ch.adj_tag(obj_first - 1) || ann.tokens[obj_first - 1].pos == "DT"))
                --obj_first;
            }
            break;
          }
        }
        if (obj_last < 0 || obj_first <= static_cast<int>(subj_last)) continue;
        if (obj_first <= b) continue;  // no relation text at all
        RawTriple t;
        t.subject = token_char_span(subj_first, subj_last);
        t.relation = token_char_span(b, obj_first - 1);
        t.object = token_char_span(obj_first, obj_last);
        t.confidence = 0.9;
        ann.triples.push_back(std::move(t));
      }
    }
  }

  return ann;
}

PosClass pos_class(const std::string& tag) {
  if (tag.rfind("NN", 0) == 0) return PosClass::Noun;
  if (tag.rfind("VB", 0) == 0) return PosClass::Verb;
  if (tag.rfind("JJ", 0) == 0) return PosClass::Adjective;
  if (tag.rfind("RB", 0) == 0) return PosClass::Adverb;
  if (tag == "CD") return PosClass::Number;
  return PosClass::Other;
}

std::string pos_class_name(PosClass c) {
  switch (c) {
    case PosClass::Noun: return "NOUN";
    case PosClass::Verb: return "VERB";
    case PosClass::Adjective: return "ADJ";
    case PosClass::Adverb: return "ADV";
    case PosClass::Number: return "NUM";
    default: return "OTHER";
  }
}

bool is_auxiliary_or_modal(const std::string& surface, const std::string& penn_tag) {
  if (penn_tag == "MD" || penn_tag == "TO") return true;
  static const std::unordered_set<std::string> aux = {
      "is", "am", "are", "was", "were", "be", "been", "being",
      "do", "does", "did", "have", "has", "had"};
  return aux.count(text::lower(surface)) > 0;
}

bool is_wh_tag(const std::string& tag) {
  return tag == "WP" || tag == "WDT" || tag == "WRB" || tag == "WP$";
}

}  // namespace hopadv
