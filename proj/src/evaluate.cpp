#include "hopadv/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hopadv/attack.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

PredictionFile PredictionFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open prediction file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed prediction file: ") + e.what());
  }
  PredictionFile pred;
  if (doc.contains("answer"))
    for (auto it = doc["answer"].begin(); it != doc["answer"].end(); ++it)
      pred.answers[it.key()] = it.value().get<std::string>();
  if (doc.contains("sp")) {
    for (auto it = doc["sp"].begin(); it != doc["sp"].end(); ++it) {
      std::vector<SupportingFact> facts;
      for (const auto& f : it.value())
        facts.emplace_back(f.at(0).get<std::string>(), f.at(1).get<int>());
      pred.sp[it.key()] = std::move(facts);
    }
  }
  return pred;
}

void PredictionFile::save(const std::string& path) const {
  json answer = json::object();
  for (const auto& [id, a] : answers) answer[id] = a;
  json sp_obj = json::object();
  for (const auto& [id, facts] : sp) {
    json list = json::array();
    for (const auto& [title, idx] : facts) list.push_back(json::array({title, idx}));
    sp_obj[id] = std::move(list);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write prediction file: " + path);
  out << json{{"answer", std::move(answer)}, {"sp", std::move(sp_obj)}}.dump();
}

std::string normalize_answer(const std::string& s) {
  // lowercase, strip punctuation, drop articles, collapse whitespace
  std::string lowered = text::lower(s);
  std::string no_punct;
  no_punct.reserve(lowered.size());
  static const std::string punct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
  for (char c : lowered)
    if (punct.find(c) == std::string::npos) no_punct.push_back(c);

  std::vector<std::string> words = text::split_ws(no_punct);
  std::string out;
  for (const auto& w : words) {
    if (w == "a" || w == "an" || w == "the") continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

AnswerScore answer_metrics(const std::string& prediction, const std::string& gold) {
  AnswerScore score;
  std::string norm_pred = normalize_answer(prediction);
  std::string norm_gold = normalize_answer(gold);
  score.em = norm_pred == norm_gold ? 1.0 : 0.0;

  auto is_polar = [](const std::string& s) { return s == "yes" || s == "no" || s == "noanswer"; };
  if ((is_polar(norm_pred) || is_polar(norm_gold)) && norm_pred != norm_gold) return score;

  std::vector<std::string> pred_tokens = text::split_ws(norm_pred);
  std::vector<std::string> gold_tokens = text::split_ws(norm_gold);
  if (pred_tokens.empty() || gold_tokens.empty()) {
    // both empty: em already covers it; f1 stays 0 as in the reference
    return score;
  }
  std::unordered_map<std::string, int> gold_counts;
  for (const auto& t : gold_tokens) ++gold_counts[t];
  int common = 0;
  for (const auto& t : pred_tokens) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      ++common;
      --it->second;
    }
  }
  if (common == 0) return score;
  score.precision = static_cast<double>(common) / pred_tokens.size();
  score.recall = static_cast<double>(common) / gold_tokens.size();
  score.f1 = 2 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

AnswerScore supporting_metrics(const std::vector<SupportingFact>& prediction,
                               const std::vector<SupportingFact>& gold) {
  std::set<SupportingFact> pred_set(prediction.begin(), prediction.end());
  std::set<SupportingFact> gold_set(gold.begin(), gold.end());
  double tp = 0, fp = 0, fn = 0;
  for (const auto& f : pred_set)
    gold_set.count(f) ? ++tp : ++fp;
  for (const auto& f : gold_set)
    if (!pred_set.count(f)) ++fn;

  AnswerScore score;
  score.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  score.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  score.f1 = score.precision + score.recall > 0
                 ? 2 * score.precision * score.recall / (score.precision + score.recall)
                 : 0.0;
  score.em = (fp + fn == 0) ? 1.0 : 0.0;
  return score;
}

namespace {

MetricBlock evaluate_subset(const PredictionFile& pred, const std::vector<Example>& gold,
                            const std::set<std::string>* id_filter) {
  MetricBlock block;
  size_t n = 0;
  std::vector<std::string> missing;
  for (const auto& ex : gold) {
    if (id_filter && !id_filter->count(ex.id)) continue;
    ++n;
    auto ans_it = pred.answers.find(ex.id);
    auto sp_it = pred.sp.find(ex.id);
    if (ans_it == pred.answers.end() || sp_it == pred.sp.end()) {
      missing.push_back(ex.id);
      continue;
    }
    AnswerScore ans = answer_metrics(ans_it->second, ex.answer);
    AnswerScore sp = supporting_metrics(sp_it->second, ex.supporting_facts);

    block.ans_em += ans.em;
    block.ans_f1 += ans.f1;
    block.supp_em += sp.em;
    block.supp_f1 += sp.f1;

    double joint_prec = ans.precision * sp.precision;
    double joint_recall = ans.recall * sp.recall;
    double joint_f1 =
        joint_prec + joint_recall > 0 ? 2 * joint_prec * joint_recall / (joint_prec + joint_recall)
                                      : 0.0;
    block.joint_em += ans.em * sp.em;
    block.joint_f1 += joint_f1;
  }
  if (!missing.empty()) {
    std::string ids;
    for (size_t i = 0; i < missing.size() && i < 10; ++i) ids += (i ? ", " : "") + missing[i];
    throw DataError("predictions missing for " + std::to_string(missing.size()) +
                    " example ids: " + ids);
  }
  if (n > 0) {
    double scale = 100.0 / static_cast<double>(n);
    block.ans_em *= scale;
    block.ans_f1 *= scale;
    block.supp_em *= scale;
    block.supp_f1 *= scale;
    block.joint_em *= scale;
    block.joint_f1 *= scale;
  }
  return block;
}

}  // namespace

MetricBlock evaluate_predictions(const PredictionFile& pred, const std::vector<Example>& gold) {
  return evaluate_subset(pred, gold, nullptr);
}

MetricReport robustness_report(const PredictionFile& original_pred,
                               const PredictionFile& adversarial_pred,
                               const std::vector<Example>& original_gold,
                               const std::vector<Example>& adversarial_gold,
                               const std::vector<AttackRecord>& manifest) {
  std::set<std::string> ori_ids, adv_ids;
  for (const auto& ex : original_gold) ori_ids.insert(ex.id);
  for (const auto& ex : adversarial_gold) adv_ids.insert(ex.id);
  if (ori_ids != adv_ids) {
    std::string diff;
    int shown = 0;
    for (const auto& id : ori_ids)
      if (!adv_ids.count(id) && shown++ < 10) diff += id + " ";
    for (const auto& id : adv_ids)
      if (!ori_ids.count(id) && shown++ < 10) diff += id + " ";
    throw DataError("original and adversarial datasets are not id-aligned: " + diff);
  }

  MetricReport report;
  report.original = evaluate_subset(original_pred, original_gold, nullptr);
  report.adversarial = evaluate_subset(adversarial_pred, adversarial_gold, nullptr);
  auto sub = [](const MetricBlock& a, const MetricBlock& b) {
    MetricBlock d;
    d.ans_em = a.ans_em - b.ans_em;
    d.ans_f1 = a.ans_f1 - b.ans_f1;
    d.supp_em = a.supp_em - b.supp_em;
    d.supp_f1 = a.supp_f1 - b.supp_f1;
    d.joint_em = a.joint_em - b.joint_em;
    d.joint_f1 = a.joint_f1 - b.joint_f1;
    return d;
  };
  report.delta = sub(report.adversarial, report.original);

  // per-type breakdown from the manifest's predicted reasoning types
  std::map<std::string, std::set<std::string>> ids_by_type;
  std::unordered_map<std::string, const AttackRecord*> record_by_id;
  for (const auto& rec : manifest) {
    std::string type = rec.outcome.reasoning_type.empty() ? "unknown" : rec.outcome.reasoning_type;
    ids_by_type[type].insert(rec.id);
    record_by_id[rec.id] = &rec;
  }
  for (const auto& [type, ids] : ids_by_type) {
    report.per_type_original[type] = evaluate_subset(original_pred, original_gold, &ids);
    report.per_type_adversarial[type] = evaluate_subset(adversarial_pred, adversarial_gold, &ids);
  }

  // distraction analyses over attacked examples
  size_t wrong = 0, wrong_as_fake = 0;
  size_t attacked = 0, sp_hits = 0;
  for (const auto& ex : adversarial_gold) {
    auto rit = record_by_id.find(ex.id);
    if (rit == record_by_id.end() || rit->second->outcome.status != "attacked") continue;
    const AttackOutcome& outcome = rit->second->outcome;
    ++attacked;

    auto ans_it = adversarial_pred.answers.find(ex.id);
    if (ans_it != adversarial_pred.answers.end() && !outcome.fake_answer.empty()) {
      std::string norm_pred = normalize_answer(ans_it->second);
      if (norm_pred != normalize_answer(ex.answer)) {
        ++wrong;
        if (norm_pred == normalize_answer(outcome.fake_answer)) ++wrong_as_fake;
      }
    }
    auto sp_it = adversarial_pred.sp.find(ex.id);
    if (sp_it != adversarial_pred.sp.end()) {
      bool hit = false;
      for (const auto& [title, idx] : sp_it->second) {
        auto ins = outcome.insertions.find(title);
        if (ins != outcome.insertions.end() && ins->second == idx) hit = true;
      }
      if (hit) ++sp_hits;
    }
  }
  report.fake_answer_rate = wrong > 0 ? 100.0 * wrong_as_fake / wrong : 0.0;
  report.adversary_support_rate = attacked > 0 ? 100.0 * sp_hits / attacked : 0.0;
  return report;
}

namespace {

json block_json(const MetricBlock& b) {
  return json{{"ans_em", b.ans_em},   {"ans_f1", b.ans_f1},     {"supp_em", b.supp_em},
              {"supp_f1", b.supp_f1}, {"joint_em", b.joint_em}, {"joint_f1", b.joint_f1}};
}

}  // namespace

std::string metrics_to_json(const MetricBlock& block) { return block_json(block).dump(); }

std::string report_to_json(const MetricReport& report) {
  json per_type = json::object();
  for (const auto& [type, block] : report.per_type_original)
    per_type[type] = json{{"original", block_json(block)},
                          {"adversarial", block_json(report.per_type_adversarial.at(type))}};
  return json{{"original", block_json(report.original)},
              {"adversarial", block_json(report.adversarial)},
              {"delta", block_json(report.delta)},
              {"per_type", std::move(per_type)},
              {"fake_answer_rate", report.fake_answer_rate},
              {"adversary_support_rate", report.adversary_support_rate}}
      .dump(2);
}

std::string report_to_table(const MetricReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  auto row = [&](const std::string& name, const MetricBlock& b) {
    out << std::left << std::setw(14) << name << std::right << std::setw(9) << b.ans_em
        << std::setw(9) << b.ans_f1 << std::setw(9) << b.supp_em << std::setw(9) << b.supp_f1
        << std::setw(10) << b.joint_em << std::setw(10) << b.joint_f1 << "\n";
  };
  out << std::left << std::setw(14) << "" << std::right << std::setw(9) << "Ans EM" << std::setw(9)
      << "Ans F1" << std::setw(9) << "Supp EM" << std::setw(9) << "Supp F1" << std::setw(10)
      << "Joint EM" << std::setw(10) << "Joint F1" << "\n";
  row("original", report.original);
  row("adversarial", report.adversarial);
  row("delta", report.delta);
  for (const auto& [type, block] : report.per_type_original) {
    row(type + " ori", block);
    row(type + " adv", report.per_type_adversarial.at(type));
  }
  out << "fake_answer_rate: " << report.fake_answer_rate << "%\n";
  out << "adversary_support_rate: " << report.adversary_support_rate << "%\n";
  return out.str();
}

}  // namespace hopadv
