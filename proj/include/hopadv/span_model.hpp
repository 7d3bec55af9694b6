#pragma once
// Trainable span/type predictor. The encoder is a contract: anything
// producing one hidden state per input token works, and a pretrained
// checkpoint can be plugged behind it via configuration. The shipped
// implementation is a trainable token+position embedding encoder, which
// is enough to fit the span and type heads at desk scale.

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hopadv/hopspan.hpp"

namespace hopadv {

class TextEncoder {
 public:
  virtual ~TextEncoder() = default;
  virtual int hidden_size() const = 0;
  // One row of hidden states per token id.
  virtual Eigen::MatrixXf encode(const std::vector<int>& token_ids) const = 0;
};

struct SpanArgmax {
  int start = 0;  // input positions
  int end = 0;
  double joint_probability = 0.0;
};

// Masked softmax over the start and end columns, then argmax of
// P_start[i] * P_end[j] over masked pairs i <= j.
SpanArgmax masked_span_argmax(const Eigen::MatrixXf& span_logits,
                              const std::vector<bool>& query_mask);

struct SpanTrainOptions {
  int epochs = 300;
  float learning_rate = 0.05f;
  float lambda = 1.0f;  // weight of the type loss
  uint64_t seed = 13;
};

struct SpanTrainingExample {
  std::vector<std::string> question_tokens;
  std::vector<std::string> chain_tokens;
  int span_start = 0;  // question-token indices, inclusive
  int span_end = 0;
  int type_label = 0;  // 0 bridging, 1 intersection
};

struct SpanEvalReport {
  double span_f1 = 0.0;       // token-overlap F1 averaged over examples
  double joint_em = 0.0;      // exact span and type
  double type_accuracy = 0.0;
};

class SpanModel {
 public:
  SpanModel() = default;

  // Fresh model over the vocabulary of the training examples.
  static SpanModel init(const std::vector<SpanTrainingExample>& examples, int hidden_size,
                        uint64_t seed);

  HopSpanPrediction predict(const std::vector<std::string>& question_tokens,
                            const std::vector<std::string>& chain_tokens) const;

  // Joint cross-entropy on start, end and (weighted by lambda) type.
  // Throws ConfigError when fewer than two type classes are present.
  SpanEvalReport train(const std::vector<SpanTrainingExample>& examples,
                       const SpanTrainOptions& options);

  SpanEvalReport evaluate(const std::vector<SpanTrainingExample>& examples) const;

  void save(const std::string& path) const;
  static SpanModel load(const std::string& path);

  int hidden_size() const { return static_cast<int>(embeddings_.cols()); }
  const Eigen::MatrixXf& type_head() const { return w_type_; }

 private:
  std::vector<int> ids_for(const std::vector<std::string>& tokens) const;
  Eigen::MatrixXf encode_ids(const std::vector<int>& ids) const;

  std::unordered_map<std::string, int> vocab_;
  Eigen::MatrixXf embeddings_;  // V x h
  Eigen::MatrixXf positions_;   // max_len x h
  Eigen::MatrixXf w_span_;      // h x 2
  Eigen::MatrixXf w_type_;      // h x 2
};

SpanEvalReport evaluate_span_predictions(const std::vector<SpanTrainingExample>& examples,
                                         const std::vector<HopSpanPrediction>& predictions);

}  // namespace hopadv
