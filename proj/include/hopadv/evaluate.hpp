#pragma once
// Answer / supporting-fact / joint EM-F1 with the official evaluation
// semantics (normalization, yes-no zeroing, per-example joint products),
// plus robustness deltas and the distraction-rate analyses.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hopadv/corpus.hpp"

namespace hopadv {

struct AttackRecord;  // defined in attack.hpp

struct PredictionFile {
  std::map<std::string, std::string> answers;                    // id -> answer text
  std::map<std::string, std::vector<SupportingFact>> sp;         // id -> predicted facts

  static PredictionFile load(const std::string& path);
  void save(const std::string& path) const;
};

// Official normalization: lowercase, strip punctuation, drop articles,
// collapse whitespace.
std::string normalize_answer(const std::string& s);

struct AnswerScore {
  double em = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

AnswerScore answer_metrics(const std::string& prediction, const std::string& gold);

AnswerScore supporting_metrics(const std::vector<SupportingFact>& prediction,
                               const std::vector<SupportingFact>& gold);

struct MetricBlock {
  double ans_em = 0.0, ans_f1 = 0.0;
  double supp_em = 0.0, supp_f1 = 0.0;
  double joint_em = 0.0, joint_f1 = 0.0;
};

// Aggregate metrics over id-aligned predictions; percentages in [0,100].
// Throws DataError listing missing ids when predictions do not cover the
// gold examples.
MetricBlock evaluate_predictions(const PredictionFile& pred, const std::vector<Example>& gold);

struct MetricReport {
  MetricBlock original;
  MetricBlock adversarial;
  MetricBlock delta;  // adversarial minus original
  std::map<std::string, MetricBlock> per_type_original;      // reasoning type name -> block
  std::map<std::string, MetricBlock> per_type_adversarial;
  double fake_answer_rate = 0.0;       // wrong adv answers equal to the fake answer, %
  double adversary_support_rate = 0.0; // adv sp predictions touching an inserted sentence, %
};

MetricReport robustness_report(const PredictionFile& original_pred,
                               const PredictionFile& adversarial_pred,
                               const std::vector<Example>& original_gold,
                               const std::vector<Example>& adversarial_gold,
                               const std::vector<AttackRecord>& manifest);

std::string report_to_json(const MetricReport& report);
std::string report_to_table(const MetricReport& report);  // aligned plain text

std::string metrics_to_json(const MetricBlock& block);

}  // namespace hopadv
