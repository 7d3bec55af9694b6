#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hopadv/annotate.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"

namespace hopadv {

namespace {

// Function words carry no relevance signal under uniform weights.
const std::unordered_set<std::string>& function_words() {
  static const std::unordered_set<std::string> s = {
      "the", "a",  "an", "of", "in", "on", "at", "by", "to", "and", "or",
      "is", "are", "was", "were", "be", "been", "did", "do", "does", "that",
      "this", "it", "as", "for", "with", "which", "who", "what", "whom",
      "where", "when", "how", "why", "has", "have", "had", "s"};
  return s;
}

std::vector<std::string> content_terms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (text::is_ascii_alnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      if (!function_words().count(cur)) out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty() && !function_words().count(cur)) out.push_back(cur);
  return out;
}

std::string paragraph_text(const Paragraph& p) {
  std::string all = p.title;
  for (const auto& s : p.sentences) {
    all += ' ';
    all += s;
  }
  return all;
}

}  // namespace

LexicalOverlapScorer LexicalOverlapScorer::fit(const std::vector<Example>& corpus) {
  LexicalOverlapScorer scorer;
  std::unordered_map<std::string, double> df;
  double n_paragraphs = 0;
  for (const auto& ex : corpus) {
    for (const auto& p : ex.context) {
      ++n_paragraphs;
      std::unordered_set<std::string> seen;
      for (auto& term : content_terms(paragraph_text(p))) seen.insert(std::move(term));
      for (const auto& term : seen) df[term] += 1.0;
    }
  }
  if (n_paragraphs == 0) return scorer;
  for (auto& [term, count] : df)
    scorer.idf_[term] = std::log((1.0 + n_paragraphs) / (1.0 + count)) + 1.0;
  scorer.unseen_idf_ = std::log(1.0 + n_paragraphs) + 1.0;
  return scorer;
}

double LexicalOverlapScorer::score(const std::string& question,
                                   const Paragraph& paragraph) const {
  auto q_terms = content_terms(question);
  if (q_terms.empty()) return 0.0;

  std::unordered_set<std::string> p_terms;
  for (auto& t : content_terms(paragraph_text(paragraph))) p_terms.insert(std::move(t));

  auto weight = [&](const std::string& term) {
    auto it = idf_.find(term);
    return it != idf_.end() ? it->second : unseen_idf_;
  };

  std::unordered_set<std::string> q_seen;
  double covered = 0.0, total = 0.0;
  for (const auto& term : q_terms) {
    if (!q_seen.insert(term).second) continue;
    double w = weight(term);
    total += w;
    if (p_terms.count(term)) covered += w;
  }
  // additive smoothing keeps every score strictly positive, so a zero
  // threshold admits every paragraph
  constexpr double alpha = 0.01;
  return (covered + alpha) / (total + alpha);
}

std::vector<size_t> select_paragraphs(const Example& ex, const RelevanceScorer& scorer,
                                      double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw ConfigError("relevance threshold must lie in [0, 1]");

  std::vector<double> scores(ex.context.size());
  for (size_t i = 0; i < ex.context.size(); ++i)
    scores[i] = scorer.score(ex.question, ex.context[i]);

  std::vector<size_t> picked;
  for (size_t i = 0; i < ex.context.size(); ++i)
    if (scores[i] > threshold) picked.push_back(i);

  size_t floor = std::min<size_t>(2, ex.context.size());
  if (picked.size() < floor) {
    // top-2 by score; ties keep original paragraph order
    std::vector<size_t> order(ex.context.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    picked.assign(order.begin(), order.begin() + floor);
    std::sort(picked.begin(), picked.end());
  }
  return picked;
}

}  // namespace hopadv
