#include "hopadv/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hopadv/errors.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

const Paragraph* Example::find_paragraph(const std::string& title) const {
  for (const auto& p : context)
    if (p.title == title) return &p;
  return nullptr;
}

namespace {

Example parse_record(const json& rec, size_t index) {
  auto fail = [&](const std::string& what) -> void {
    throw DataError("record " + std::to_string(index) + ": " + what);
  };

  if (!rec.is_object()) fail("expected an object");
  Example ex;
  if (!rec.contains("_id") || !rec["_id"].is_string()) fail("missing string field \"_id\"");
  ex.id = rec["_id"].get<std::string>();
  if (!rec.contains("question") || !rec["question"].is_string())
    fail("missing string field \"question\"");
  ex.question = rec["question"].get<std::string>();
  if (!rec.contains("answer") || !rec["answer"].is_string())
    fail("missing string field \"answer\"");
  ex.answer = rec["answer"].get<std::string>();
  ex.type_tag = rec.value("type", "");
  ex.level_tag = rec.value("level", "");

  if (!rec.contains("context") || !rec["context"].is_array())
    fail("missing array field \"context\"");
  for (const auto& entry : rec["context"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_array())
      fail("context entries must be [title, [sentence, ...]] pairs");
    Paragraph p;
    p.title = entry[0].get<std::string>();
    for (const auto& s : entry[1]) {
      if (!s.is_string()) fail("sentence must be a string in paragraph \"" + p.title + "\"");
      p.sentences.push_back(s.get<std::string>());
    }
    ex.context.push_back(std::move(p));
  }

  if (!rec.contains("supporting_facts") || !rec["supporting_facts"].is_array())
    fail("missing array field \"supporting_facts\"");
  for (const auto& sf : rec["supporting_facts"]) {
    if (!sf.is_array() || sf.size() != 2 || !sf[0].is_string() || !sf[1].is_number_integer())
      fail("supporting_facts entries must be [title, sentence_index] pairs");
    ex.supporting_facts.emplace_back(sf[0].get<std::string>(), sf[1].get<int>());
  }
  return ex;
}

}  // namespace

std::vector<Example> parse_dataset(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("expected a top-level JSON array");

  std::vector<Example> out;
  out.reserve(doc.size());
  for (size_t i = 0; i < doc.size(); ++i) {
    Example ex = parse_record(doc[i], i);
    auto violations = validate_example(ex);
    if (!violations.empty())
      throw DataError("record " + std::to_string(i) + " (id " + ex.id +
                      "): " + violations.front());
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<Example> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string serialize_dataset(const std::vector<Example>& examples) {
  json arr = json::array();
  for (const auto& ex : examples) {
    json rec;
    rec["_id"] = ex.id;
    rec["question"] = ex.question;
    rec["answer"] = ex.answer;
    rec["type"] = ex.type_tag;
    rec["level"] = ex.level_tag;
    json sfs = json::array();
    for (const auto& [title, idx] : ex.supporting_facts) sfs.push_back(json::array({title, idx}));
    rec["supporting_facts"] = std::move(sfs);
    json ctx = json::array();
    for (const auto& p : ex.context) ctx.push_back(json::array({p.title, p.sentences}));
    rec["context"] = std::move(ctx);
    arr.push_back(std::move(rec));
  }
  return arr.dump();
}

void write_dataset(const std::vector<Example>& examples, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open output file for writing: " + path);
  out << serialize_dataset(examples);
  if (!out) throw DataError("write failed: " + path);
}

std::vector<std::string> validate_example(const Example& ex) {
  std::vector<std::string> violations;

  if (ex.answer.empty()) violations.push_back("answer is empty");

  std::unordered_map<std::string, size_t> title_to_size;
  std::unordered_set<std::string> dup_seen;
  for (const auto& p : ex.context) {
    if (title_to_size.count(p.title)) {
      if (dup_seen.insert(p.title).second)
        violations.push_back("duplicate paragraph title \"" + p.title +
                             "\" makes supporting facts ambiguous");
    } else {
      title_to_size[p.title] = p.sentences.size();
    }
    if (p.sentences.empty())
      violations.push_back("paragraph \"" + p.title + "\" has no sentences");
  }

  for (const auto& [title, idx] : ex.supporting_facts) {
    auto it = title_to_size.find(title);
    if (it == title_to_size.end()) {
      violations.push_back("supporting fact cites absent paragraph \"" + title + "\"");
    } else if (idx < 0 || static_cast<size_t>(idx) >= it->second) {
      violations.push_back("supporting fact index " + std::to_string(idx) +
                           " out of range for paragraph \"" + title + "\" (" +
                           std::to_string(it->second) + " sentences)");
    }
  }
  return violations;
}

}  // namespace hopadv
