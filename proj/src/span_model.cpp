#include "hopadv/span_model.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

namespace {

constexpr const char* kPad = "[PAD]";
constexpr const char* kUnk = "[UNK]";
constexpr float kMaskedLogit = -1e9f;

Eigen::VectorXf masked_softmax(const Eigen::VectorXf& logits, const std::vector<bool>& mask) {
  Eigen::VectorXf masked = logits;
  for (int i = 0; i < masked.size(); ++i)
    if (i >= static_cast<int>(mask.size()) || !mask[i]) masked[i] = kMaskedLogit;
  float max_logit = masked.maxCoeff();
  Eigen::VectorXf exps = (masked.array() - max_logit).exp();
  float denom = exps.sum();
  return exps / denom;
}

Eigen::VectorXf softmax_row(const Eigen::RowVectorXf& logits) {
  Eigen::VectorXf v = logits.transpose();
  float max_logit = v.maxCoeff();
  Eigen::VectorXf exps = (v.array() - max_logit).exp();
  return exps / exps.sum();
}

// Adam state for one parameter matrix.
struct AdamState {
  Eigen::MatrixXf m, v;
  void init(const Eigen::MatrixXf& p) {
    m = Eigen::MatrixXf::Zero(p.rows(), p.cols());
    v = Eigen::MatrixXf::Zero(p.rows(), p.cols());
  }
  void step(Eigen::MatrixXf& param, const Eigen::MatrixXf& grad, float lr, int t) {
    constexpr float beta1 = 0.9f, beta2 = 0.999f, eps = 1e-8f;
    m = beta1 * m + (1 - beta1) * grad;
    v = beta2 * v + (1 - beta2) * grad.array().square().matrix();
    float bias1 = 1 - std::pow(beta1, static_cast<float>(t));
    float bias2 = 1 - std::pow(beta2, static_cast<float>(t));
    Eigen::ArrayXXf mhat = m.array() / bias1;
    Eigen::ArrayXXf vhat = v.array() / bias2;
    param.array() -= lr * mhat / (vhat.sqrt() + eps);
  }
};

json matrix_to_json(const Eigen::MatrixXf& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXf matrix_from_json(const json& j) {
  if (j.empty()) return {};
  Eigen::MatrixXf m(j.size(), j[0].size());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) m(r, c) = j[r][c].get<float>();
  return m;
}

double span_overlap_f1(int pred_start, int pred_end, int gold_start, int gold_end) {
  int overlap = std::min(pred_end, gold_end) - std::max(pred_start, gold_start) + 1;
  if (overlap <= 0) return 0.0;
  double precision = static_cast<double>(overlap) / (pred_end - pred_start + 1);
  double recall = static_cast<double>(overlap) / (gold_end - gold_start + 1);
  return 2 * precision * recall / (precision + recall);
}

}  // namespace

SpanArgmax masked_span_argmax(const Eigen::MatrixXf& span_logits,
                              const std::vector<bool>& query_mask) {
  Eigen::VectorXf p_start = masked_softmax(span_logits.col(0), query_mask);
  Eigen::VectorXf p_end = masked_softmax(span_logits.col(1), query_mask);

  SpanArgmax best;
  double best_prob = -1.0;
  const int n = static_cast<int>(p_start.size());
  for (int i = 0; i < n; ++i) {
    if (i >= static_cast<int>(query_mask.size()) || !query_mask[i]) continue;
    for (int j = i; j < n; ++j) {
      if (j >= static_cast<int>(query_mask.size()) || !query_mask[j]) continue;
      double prob = static_cast<double>(p_start[i]) * static_cast<double>(p_end[j]);
      if (prob > best_prob) {
        best_prob = prob;
        best.start = i;
        best.end = j;
      }
    }
  }
  best.joint_probability = best_prob < 0 ? 0.0 : best_prob;
  return best;
}

SpanModel SpanModel::init(const std::vector<SpanTrainingExample>& examples, int hidden_size,
                          uint64_t seed) {
  SpanModel model;
  model.vocab_[kPad] = 0;
  model.vocab_[kUnk] = 1;
  auto add_word = [&](const std::string& w) {
    std::string key = text::lower(w);
    if (!model.vocab_.count(key)) {
      int id = static_cast<int>(model.vocab_.size());
      model.vocab_[key] = id;
    }
  };
  add_word("[CLS]");
  add_word("[SEP]");
  add_word(kHop1Marker);
  add_word(kHop2Marker);
  for (const auto& ex : examples) {
    for (const auto& t : ex.question_tokens) add_word(t);
    for (const auto& t : ex.chain_tokens) add_word(t);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<float> dist(0.0f, 0.1f);
  auto randn = [&](int rows, int cols) {
    Eigen::MatrixXf m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
    return m;
  };
  model.embeddings_ = randn(static_cast<int>(model.vocab_.size()), hidden_size);
  model.positions_ = randn(kSpanModelMaxLen, hidden_size);
  model.w_span_ = randn(hidden_size, 2);
  model.w_type_ = randn(hidden_size, 2);
  return model;
}

std::vector<int> SpanModel::ids_for(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto it = vocab_.find(text::lower(t));
    ids.push_back(it != vocab_.end() ? it->second : vocab_.at(kUnk));
  }
  return ids;
}

Eigen::MatrixXf SpanModel::encode_ids(const std::vector<int>& ids) const {
  Eigen::MatrixXf states(ids.size(), hidden_size());
  for (int i = 0; i < static_cast<int>(ids.size()); ++i)
    states.row(i) = embeddings_.row(ids[i]) + positions_.row(i % positions_.rows());
  return states;
}

HopSpanPrediction SpanModel::predict(const std::vector<std::string>& question_tokens,
                                     const std::vector<std::string>& chain_tokens) const {
  SpanModelInput input = build_span_input(question_tokens, chain_tokens);
  Eigen::MatrixXf states = encode_ids(ids_for(input.tokens));
  Eigen::MatrixXf span_logits = states * w_span_;
  SpanArgmax argmax = masked_span_argmax(span_logits, input.query_mask);

  Eigen::VectorXf p_type = softmax_row(states.row(0) * w_type_);
  HopSpanPrediction pred;
  pred.start_index = argmax.start - 1;  // input position 1 is question token 0
  pred.end_index = argmax.end - 1;
  pred.joint_probability = argmax.joint_probability;
  pred.bridge_type = p_type[1] > p_type[0] ? ReasoningType::Intersection : ReasoningType::Bridging;
  pred.source = PredictionSource::Model;
  return pred;
}

SpanEvalReport SpanModel::train(const std::vector<SpanTrainingExample>& examples,
                                const SpanTrainOptions& options) {
  if (examples.empty()) throw ConfigError("span model training requires examples");
  std::set<int> classes;
  for (const auto& ex : examples) classes.insert(ex.type_label);
  if (classes.size() < 2)
    throw ConfigError("span model training requires both type classes to be present");

  AdamState adam_emb, adam_pos, adam_span, adam_type;
  adam_emb.init(embeddings_);
  adam_pos.init(positions_);
  adam_span.init(w_span_);
  adam_type.init(w_type_);

  int step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (const auto& ex : examples) {
      SpanModelInput input = build_span_input(ex.question_tokens, ex.chain_tokens);
      std::vector<int> ids = ids_for(input.tokens);
      const int n = static_cast<int>(ids.size());
      int gold_start = ex.span_start + 1;  // shift past [CLS]
      int gold_end = ex.span_end + 1;
      if (gold_start >= n || gold_end >= n) continue;  // truncated away

      Eigen::MatrixXf states = encode_ids(ids);
      Eigen::MatrixXf span_logits = states * w_span_;
      Eigen::VectorXf p_start = masked_softmax(span_logits.col(0), input.query_mask);
      Eigen::VectorXf p_end = masked_softmax(span_logits.col(1), input.query_mask);
      Eigen::VectorXf p_type = softmax_row(states.row(0) * w_type_);

      // d(logit) of cross entropy under softmax: p - onehot
      Eigen::MatrixXf d_span = Eigen::MatrixXf::Zero(n, 2);
      d_span.col(0) = p_start;
      d_span.col(1) = p_end;
      d_span(gold_start, 0) -= 1.0f;
      d_span(gold_end, 1) -= 1.0f;

      Eigen::VectorXf d_type = p_type;
      d_type[ex.type_label] -= 1.0f;

      Eigen::MatrixXf d_states = d_span * w_span_.transpose();
      d_states.row(0) += options.lambda * (w_type_ * d_type).transpose();

      Eigen::MatrixXf grad_span = states.transpose() * d_span;
      Eigen::MatrixXf grad_type = options.lambda * (states.row(0).transpose() * d_type.transpose());

      Eigen::MatrixXf grad_emb = Eigen::MatrixXf::Zero(embeddings_.rows(), embeddings_.cols());
      Eigen::MatrixXf grad_pos = Eigen::MatrixXf::Zero(positions_.rows(), positions_.cols());
      for (int i = 0; i < n; ++i) {
        grad_emb.row(ids[i]) += d_states.row(i);
        grad_pos.row(i % positions_.rows()) += d_states.row(i);
      }

      ++step;
      adam_span.step(w_span_, grad_span, options.learning_rate, step);
      adam_type.step(w_type_, grad_type, options.learning_rate, step);
      adam_emb.step(embeddings_, grad_emb, options.learning_rate, step);
      adam_pos.step(positions_, grad_pos, options.learning_rate, step);
    }
  }
  return evaluate(examples);
}

SpanEvalReport SpanModel::evaluate(const std::vector<SpanTrainingExample>& examples) const {
  std::vector<HopSpanPrediction> preds;
  preds.reserve(examples.size());
  for (const auto& ex : examples) preds.push_back(predict(ex.question_tokens, ex.chain_tokens));
  return evaluate_span_predictions(examples, preds);
}

SpanEvalReport evaluate_span_predictions(const std::vector<SpanTrainingExample>& examples,
                                         const std::vector<HopSpanPrediction>& predictions) {
  SpanEvalReport report;
  if (examples.empty()) return report;
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    const auto& pred = predictions.at(i);
    double f1 = span_overlap_f1(pred.start_index, pred.end_index, ex.span_start, ex.span_end);
    report.span_f1 += f1;
    int pred_type = pred.bridge_type == ReasoningType::Intersection ? 1 : 0;
    bool type_ok = pred_type == ex.type_label;
    report.type_accuracy += type_ok ? 1.0 : 0.0;
    bool exact = pred.start_index == ex.span_start && pred.end_index == ex.span_end;
    report.joint_em += (exact && type_ok) ? 1.0 : 0.0;
  }
  report.span_f1 /= examples.size();
  report.type_accuracy /= examples.size();
  report.joint_em /= examples.size();
  return report;
}

void SpanModel::save(const std::string& path) const {
  json vocab = json::object();
  for (const auto& [word, id] : vocab_) vocab[word] = id;
  json doc{{"hidden", hidden_size()},
           {"vocab", std::move(vocab)},
           {"embeddings", matrix_to_json(embeddings_)},
           {"positions", matrix_to_json(positions_)},
           {"w_span", matrix_to_json(w_span_)},
           {"w_type", matrix_to_json(w_type_)}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write span model artifact: " + path);
  out << doc.dump();
}

SpanModel SpanModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open span model artifact: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed span model artifact: ") + e.what());
  }
  SpanModel model;
  for (auto it = doc.at("vocab").begin(); it != doc.at("vocab").end(); ++it)
    model.vocab_[it.key()] = it.value().get<int>();
  model.embeddings_ = matrix_from_json(doc.at("embeddings"));
  model.positions_ = matrix_from_json(doc.at("positions"));
  model.w_span_ = matrix_from_json(doc.at("w_span"));
  model.w_type_ = matrix_from_json(doc.at("w_type"));
  return model;
}

}  // namespace hopadv
