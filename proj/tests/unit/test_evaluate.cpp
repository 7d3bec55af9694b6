#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hopadv/attack.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/evaluate.hpp"
#include "json.hpp"

using namespace hopadv;
using nlohmann::json;

namespace {

std::string data_path(const char* name) {
  return std::string(HOPADV_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("answer normalization matches the official recipe") {
  CHECK(normalize_answer("The Answer") == "answer");
  CHECK(normalize_answer("U.S.A.") == "usa");
  CHECK(normalize_answer("a  An the") == "");
  CHECK(normalize_answer("1,998 miles") == "1998 miles");
  CHECK(normalize_answer("Laysan!") == "laysan");
}

TEST_CASE("answer metrics on the worked cases") {
  auto exact = answer_metrics("Laysan", "Laysan");
  CHECK(exact.em == 1.0);
  CHECK(exact.f1 == 1.0);

  auto partial = answer_metrics("Obama", "Barack Obama");
  CHECK(partial.em == 0.0);
  CHECK(partial.f1 == doctest::Approx(2.0 / 3.0));

  auto empty = answer_metrics("", "yes");
  CHECK(empty.em == 0.0);
  CHECK(empty.f1 == 0.0);

  // polar zeroing also applies when the prediction is polar
  auto polar = answer_metrics("yes", "Laysan");
  CHECK(polar.f1 == 0.0);

  // multiset token overlap
  auto dup = answer_metrics("the cat cat", "cat");
  CHECK(dup.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("supporting metrics on the worked cases") {
  std::vector<SupportingFact> gold{{"A", 0}, {"B", 1}};
  auto equal = supporting_metrics(gold, gold);
  CHECK(equal.em == 1.0);
  CHECK(equal.f1 == 1.0);

  std::vector<SupportingFact> extra{{"A", 0}, {"B", 1}, {"C", 2}};
  auto loose = supporting_metrics(extra, gold);
  CHECK(loose.em == 0.0);
  CHECK(loose.f1 == doctest::Approx(0.8));

  auto disjoint = supporting_metrics({{"X", 0}}, gold);
  CHECK(disjoint.em == 0.0);
  CHECK(disjoint.f1 == 0.0);
}

TEST_CASE("aggregate metrics equal the frozen oracle values to 1e-6") {
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  MetricBlock block = evaluate_predictions(pred, gold);

  std::ifstream in(data_path("metric_fixture/expected.json"));
  REQUIRE(in.good());
  json expected;
  in >> expected;
  CHECK(block.ans_em == doctest::Approx(expected["ans_em"].get<double>()).epsilon(1e-9));
  CHECK(block.ans_f1 == doctest::Approx(expected["ans_f1"].get<double>()).epsilon(1e-9));
  CHECK(block.supp_em == doctest::Approx(expected["supp_em"].get<double>()).epsilon(1e-9));
  CHECK(block.supp_f1 == doctest::Approx(expected["supp_f1"].get<double>()).epsilon(1e-9));
  CHECK(block.joint_em == doctest::Approx(expected["joint_em"].get<double>()).epsilon(1e-9));
  CHECK(block.joint_f1 == doctest::Approx(expected["joint_f1"].get<double>()).epsilon(1e-9));
}

TEST_CASE("joint measures never exceed their components") {
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  MetricBlock block = evaluate_predictions(pred, gold);
  CHECK(block.joint_em <= std::min(block.ans_em, block.supp_em) + 1e-9);
  CHECK(block.joint_f1 <= std::min(block.ans_f1, block.supp_f1) + 1e-9);
}

TEST_CASE("missing ids are an error listing the ids") {
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  pred.answers.erase("m07");
  CHECK_THROWS_WITH_AS(evaluate_predictions(pred, gold), doctest::Contains("m07"), DataError);
}

TEST_CASE("report symmetry under permutation of the gold order") {
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  auto shuffled = gold;
  std::mt19937_64 rng(4);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  MetricBlock a = evaluate_predictions(pred, gold);
  MetricBlock b = evaluate_predictions(pred, shuffled);
  CHECK(a.ans_f1 == doctest::Approx(b.ans_f1).epsilon(1e-12));
  CHECK(a.joint_f1 == doctest::Approx(b.joint_f1).epsilon(1e-12));
}

TEST_CASE("robustness report: identical predictions give zero deltas") {
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));

  std::vector<AttackRecord> manifest;
  for (const auto& ex : gold) {
    AttackRecord rec;
    rec.id = ex.id;
    rec.outcome.status = "attacked";
    rec.outcome.reasoning_type = "bridging";
    rec.outcome.fake_answer = "Guangzhou";
    manifest.push_back(rec);
  }
  MetricReport report = robustness_report(pred, pred, gold, gold, manifest);
  CHECK(report.delta.ans_em == doctest::Approx(0.0));
  CHECK(report.delta.joint_f1 == doctest::Approx(0.0));
  CHECK(report.per_type_original.count("bridging"));
}

TEST_CASE("fake answer rate is 100% for an all-fake predictor") {
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  PredictionFile honest;
  PredictionFile all_fake;
  std::vector<AttackRecord> manifest;
  for (const auto& ex : gold) {
    honest.answers[ex.id] = ex.answer;
    honest.sp[ex.id] = ex.supporting_facts;
    all_fake.answers[ex.id] = "Guangzhou";
    all_fake.sp[ex.id] = {{ex.context.front().title, 0}};
    AttackRecord rec;
    rec.id = ex.id;
    rec.outcome.status = "attacked";
    rec.outcome.reasoning_type = "bridging";
    rec.outcome.fake_answer = "Guangzhou";
    rec.outcome.insertions[ex.context.front().title] = 0;
    manifest.push_back(rec);
  }
  MetricReport report = robustness_report(honest, all_fake, gold, gold, manifest);
  CHECK(report.fake_answer_rate == doctest::Approx(100.0));
  CHECK(report.adversary_support_rate == doctest::Approx(100.0));

  // and 0% when the adversarial predictions are gold
  MetricReport clean = robustness_report(honest, honest, gold, gold, manifest);
  CHECK(clean.fake_answer_rate == doctest::Approx(0.0));
}

TEST_CASE("id misalignment is an error") {
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  auto fewer = gold;
  fewer.pop_back();
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  CHECK_THROWS_AS(robustness_report(pred, pred, gold, fewer, {}), DataError);
}

TEST_CASE("prediction file save/load round trip") {
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  auto path = (std::filesystem::temp_directory_path() / "hopadv_pred.json").string();
  pred.save(path);
  PredictionFile loaded = PredictionFile::load(path);
  CHECK(loaded.answers == pred.answers);
  CHECK(loaded.sp == pred.sp);
  std::filesystem::remove(path);
}

TEST_CASE("report serialization has both layouts") {
  auto gold = load_dataset(data_path("metric_fixture/gold.json"));
  PredictionFile pred = PredictionFile::load(data_path("metric_fixture/pred.json"));
  MetricReport report = robustness_report(pred, pred, gold, gold, {});
  std::string as_json = report_to_json(report);
  CHECK(json::parse(as_json).contains("delta"));
  std::string table = report_to_table(report);
  CHECK(table.find("Ans EM") != std::string::npos);
  CHECK(table.find("adversarial") != std::string::npos);
}
