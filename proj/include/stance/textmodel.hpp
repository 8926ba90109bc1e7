#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stance/types.hpp"

namespace stance::text {

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_urls = true;
  bool strip_mentions = true;
  // Empty set means the built-in English list.
  std::unordered_set<std::string> stopword_list;
  bool use_default_stopwords = true;
  int min_token_len = 2;
};

const std::unordered_set<std::string>& default_stopwords();

// Rule order: lowercase, strip urls/mentions, split on non-alphanumeric
// runs, stopword filter, minimum length filter.
std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& cfg);

struct SparseVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;          // > 0, same length

  double dot_dense(const std::vector<double>& w) const;
};

class Vocabulary {
 public:
  // Token ids in first-seen order over the training documents.
  static Vocabulary build(const std::vector<std::vector<std::string>>& docs);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  // -1 when out of vocabulary.
  std::int64_t id_of(const std::string& token) const;

  static Vocabulary from_tokens(std::vector<std::string> tokens);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Unigram counts over the vocabulary; OOV tokens are dropped.
SparseVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab);

enum class SamplingMethod { Random, Stratified };

struct SamplingPlan {
  SamplingMethod method = SamplingMethod::Stratified;
  std::size_t total = 0;
  std::uint64_t seed = 0;
};

struct SampleReport {
  std::array<std::size_t, kNumClasses> requested{};
  std::array<std::size_t, kNumClasses> taken{};
  bool shortfall = false;
};

// floor(total/3) per class, uniform without replacement; classes with fewer
// items are exhausted and flagged, never rebalanced. Selected indices are
// returned in ascending (corpus) order.
std::pair<std::vector<std::size_t>, SampleReport> stratified_sample(
    const std::vector<StanceLabel>& labels, const SamplingPlan& plan);

// Uniform without replacement; result order is the shuffled draw order.
std::vector<std::size_t> random_sample(std::size_t n, const SamplingPlan& plan);

// Disjoint, exhaustive, sizes floor(f*n) / n - floor(f*n).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_test(
    std::size_t n, double train_fraction, std::uint64_t seed);

struct Example {
  SparseVector x;
  StanceLabel y = StanceLabel::NonOpinionated;
};

struct Prediction {
  StanceLabel label = StanceLabel::NonOpinionated;
  std::array<double, kNumClasses> scores{};
};

// Shared inference contract so another classifier backend can be slotted in.
class TextClassifier {
 public:
  virtual ~TextClassifier() = default;
  virtual Prediction classify(const SparseVector& x) const = 0;
  virtual std::string kind() const = 0;
};

class NBModel final : public TextClassifier {
 public:
  // Multinomial NB with Laplace smoothing. Requires alpha >= 0 and at least
  // two classes present in the training data.
  static NBModel train(const std::vector<Example>& train, double alpha, const Vocabulary& vocab);

  // Argmax of log prior + sum count * log likelihood; scores are posterior
  // probabilities normalized to sum 1. Ties take the first class in the
  // fixed order. With alpha = 0, scoring a token unseen in some present
  // class is rejected.
  Prediction classify(const SparseVector& x) const override;
  std::string kind() const override { return "nb"; }

  double alpha() const { return alpha_; }
  const std::array<double, kNumClasses>& class_priors() const { return priors_; }
  // log P(token | class); kNeverSeen for classes absent from training.
  double token_log_likelihood(int class_idx, std::uint32_t token_id) const;
  const Vocabulary& vocab() const { return vocab_; }

  void save(const std::string& path) const;
  static NBModel load(const std::string& path);

 private:
  friend struct ModelCodec;
  NBModel() = default;
  double alpha_ = 1.0;
  std::array<bool, kNumClasses> present_{};
  std::array<double, kNumClasses> priors_{};
  std::array<std::vector<double>, kNumClasses> log_likelihood_;
  std::array<bool, kNumClasses> has_zero_count_{};
  Vocabulary vocab_;
};

struct LinearTrainConfig {
  int epochs = 5;
  double lambda = 1e-4;
  std::uint64_t seed = 0;
};

class LinearModel final : public TextClassifier {
 public:
  // One-vs-rest hinge loss trained with a stochastic subgradient schedule
  // (step 1/(lambda*t), L2 decay on weights, unregularized bias).
  static LinearModel train(const std::vector<Example>& train, const LinearTrainConfig& cfg,
                           const Vocabulary& vocab);

  Prediction classify(const SparseVector& x) const override;
  std::string kind() const override { return "linear"; }

  const std::vector<double>& weights(int class_idx) const { return weights_[class_idx]; }
  double bias(int class_idx) const { return bias_[class_idx]; }
  const LinearTrainConfig& config() const { return cfg_; }
  const Vocabulary& vocab() const { return vocab_; }

  void save(const std::string& path) const;
  static LinearModel load(const std::string& path);

 private:
  friend struct ModelCodec;
  LinearModel() = default;
  LinearTrainConfig cfg_;
  std::array<bool, kNumClasses> present_{};
  std::array<std::vector<double>, kNumClasses> weights_;
  std::array<double, kNumClasses> bias_{};
  Vocabulary vocab_;
};

// Loads either model kind behind the shared interface.
std::unique_ptr<TextClassifier> load_classifier(const std::string& path);

struct EvalReport {
  // Rows gold, columns predicted, fixed class order.
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
  std::array<double, kNumClasses> per_class_f1{};
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t n = 0;

  std::string to_text() const;
};

EvalReport evaluate(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& predicted);

// Report from a prefilled confusion matrix (gold x predicted).
EvalReport evaluate_confusion(
    const std::array<std::array<std::size_t, kNumClasses>, kNumClasses>& confusion);

}  // namespace stance::text
