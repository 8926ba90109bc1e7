#include "stance/textmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stance/rng.hpp"

namespace stance::text {

using nlohmann::json;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_url_token(const std::string& tok) {
  return tok.rfind("http://", 0) == 0 || tok.rfind("https://", 0) == 0 ||
         tok.rfind("www.", 0) == 0;
}

bool is_mention_token(const std::string& tok) {
  return tok.size() >= 2 && tok[0] == '@' &&
         (is_alnum(tok[1]) || tok[1] == '_');
}

std::string to_hex(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double from_hex(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

json doubles_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(to_hex(x));
  return arr;
}

std::vector<double> doubles_from_json(const json& arr) {
  std::vector<double> v;
  v.reserve(arr.size());
  for (const auto& x : arr) v.push_back(from_hex(x.get<std::string>()));
  return v;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& cfg) {
  if (cfg.min_token_len < 1) throw std::invalid_argument("min_token_len must be >= 1");
  std::string work = text;
  if (cfg.lowercase) {
    for (char& c : work)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }

  if (cfg.strip_urls || cfg.strip_mentions) {
    std::string filtered;
    filtered.reserve(work.size());
    std::size_t i = 0;
    while (i < work.size()) {
      if (is_space(work[i])) {
        filtered += work[i++];
        continue;
      }
      std::size_t j = i;
      while (j < work.size() && !is_space(work[j])) ++j;
      std::string tok = work.substr(i, j - i);
      bool drop = (cfg.strip_urls && is_url_token(tok)) ||
                  (cfg.strip_mentions && is_mention_token(tok));
      if (!drop) filtered += tok;
      i = j;
    }
    work = std::move(filtered);
  }

  const std::unordered_set<std::string>* stops = &cfg.stopword_list;
  if (cfg.stopword_list.empty() && cfg.use_default_stopwords) stops = &default_stopwords();

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < work.size()) {
    if (!is_alnum(work[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < work.size() && is_alnum(work[j])) ++j;
    std::string tok = work.substr(i, j - i);
    i = j;
    if (static_cast<int>(tok.size()) < cfg.min_token_len) continue;
    if (stops->count(tok)) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

double SparseVector::dot_dense(const std::vector<double>& w) const {
  double s = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < w.size()) s += values[k] * w[indices[k]];
  }
  return s;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& docs) {
  Vocabulary v;
  for (const auto& doc : docs) {
    for (const auto& tok : doc) {
      auto [it, inserted] = v.ids_.try_emplace(tok, static_cast<std::uint32_t>(v.tokens_.size()));
      if (inserted) v.tokens_.push_back(tok);
    }
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  for (std::uint32_t i = 0; i < v.tokens_.size(); ++i) v.ids_[v.tokens_[i]] = i;
  return v;
}

std::int64_t Vocabulary::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

SparseVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& tok : tokens) {
    std::int64_t id = vocab.id_of(tok);
    if (id >= 0) counts[static_cast<std::uint32_t>(id)] += 1.0;
  }
  SparseVector v;
  v.indices.reserve(counts.size());
  for (const auto& [id, _] : counts) v.indices.push_back(id);
  std::sort(v.indices.begin(), v.indices.end());
  v.values.reserve(counts.size());
  for (auto id : v.indices) v.values.push_back(counts.at(id));
  return v;
}

std::pair<std::vector<std::size_t>, SampleReport> stratified_sample(
    const std::vector<StanceLabel>& labels, const SamplingPlan& plan) {
  if (plan.method != SamplingMethod::Stratified)
    throw std::invalid_argument("stratified_sample: plan method is not stratified");
  if (plan.total < 3)
    throw std::invalid_argument("stratified_sample: total must be >= 3");

  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[class_index(labels[i])].push_back(i);
  for (int c = 0; c < kNumClasses; ++c) {
    if (by_class[c].empty())
      throw std::invalid_argument(std::string("stratified_sample: empty class ") +
                                  to_string(kClassOrder[c]));
  }

  const std::size_t per_class = plan.total / kNumClasses;
  Rng rng(splitmix64(plan.seed));
  SampleReport report;
  std::vector<std::size_t> selected;
  for (int c = 0; c < kNumClasses; ++c) {
    report.requested[c] = per_class;
    std::size_t take = std::min(per_class, by_class[c].size());
    report.taken[c] = take;
    if (take < per_class) report.shortfall = true;
    auto pick = rng.sample_without_replacement(by_class[c].size(), take);
    for (auto p : pick) selected.push_back(by_class[c][p]);
  }
  std::sort(selected.begin(), selected.end());
  return {std::move(selected), report};
}

std::vector<std::size_t> random_sample(std::size_t n, const SamplingPlan& plan) {
  if (plan.total > n) throw std::invalid_argument("random_sample: total exceeds input size");
  Rng rng(splitmix64(plan.seed));
  return rng.sample_without_replacement(n, plan.total);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_test(
    std::size_t n, double train_fraction, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("split_train_test: empty input");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw std::invalid_argument("split_train_test: fraction must be in [0, 1]");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(splitmix64(seed));
  rng.shuffle(idx);
  std::size_t n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  std::vector<std::size_t> train(idx.begin(), idx.begin() + n_train);
  std::vector<std::size_t> test(idx.begin() + n_train, idx.end());
  return {std::move(train), std::move(test)};
}

NBModel NBModel::train(const std::vector<Example>& train, double alpha, const Vocabulary& vocab) {
  if (alpha < 0.0) throw std::invalid_argument("train_nb: alpha must be >= 0");
  if (train.empty()) throw std::invalid_argument("train_nb: empty training set");

  NBModel model;
  model.alpha_ = alpha;
  model.vocab_ = vocab;
  const std::size_t v = vocab.size();

  std::array<std::size_t, kNumClasses> class_counts{};
  std::array<std::vector<double>, kNumClasses> token_counts;
  for (auto& t : token_counts) t.assign(v, 0.0);
  std::array<double, kNumClasses> token_totals{};

  for (const auto& ex : train) {
    int c = class_index(ex.y);
    ++class_counts[c];
    for (std::size_t k = 0; k < ex.x.indices.size(); ++k) {
      if (ex.x.indices[k] >= v)
        throw std::invalid_argument("train_nb: feature index outside vocabulary");
      token_counts[c][ex.x.indices[k]] += ex.x.values[k];
      token_totals[c] += ex.x.values[k];
    }
  }

  int present = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    model.present_[c] = class_counts[c] > 0;
    if (model.present_[c]) ++present;
  }
  if (present < 2) throw std::invalid_argument("train_nb: need at least two classes present");

  for (int c = 0; c < kNumClasses; ++c) {
    model.priors_[c] =
        static_cast<double>(class_counts[c]) / static_cast<double>(train.size());
    model.log_likelihood_[c].assign(v, kNegInf);
    if (!model.present_[c]) continue;
    const double denom = token_totals[c] + alpha * static_cast<double>(v);
    for (std::size_t t = 0; t < v; ++t) {
      double num = token_counts[c][t] + alpha;
      model.log_likelihood_[c][t] = denom > 0.0 && num > 0.0 ? std::log(num / denom) : kNegInf;
      if (num <= 0.0) model.has_zero_count_[c] = true;
    }
  }
  return model;
}

double NBModel::token_log_likelihood(int class_idx, std::uint32_t token_id) const {
  return log_likelihood_[class_idx].at(token_id);
}

Prediction NBModel::classify(const SparseVector& x) const {
  std::array<double, kNumClasses> log_scores;
  log_scores.fill(kNegInf);
  for (int c = 0; c < kNumClasses; ++c) {
    if (!present_[c]) continue;
    double s = std::log(priors_[c]);
    for (std::size_t k = 0; k < x.indices.size(); ++k) {
      if (x.indices[k] >= vocab_.size())
        throw std::invalid_argument("classify: feature index outside vocabulary");
      double ll = log_likelihood_[c][x.indices[k]];
      if (ll == kNegInf)
        throw std::invalid_argument(
            "classify: zero-probability token under alpha=0; cannot score");
      s += x.values[k] * ll;
    }
    log_scores[c] = s;
  }

  // Posterior by log-sum-exp; absent classes get probability 0.
  double max_log = kNegInf;
  for (double s : log_scores) max_log = std::max(max_log, s);
  double z = 0.0;
  Prediction pred;
  for (int c = 0; c < kNumClasses; ++c) {
    pred.scores[c] = log_scores[c] == kNegInf ? 0.0 : std::exp(log_scores[c] - max_log);
    z += pred.scores[c];
  }
  for (double& s : pred.scores) s /= z;

  int best = 0;
  for (int c = 1; c < kNumClasses; ++c)
    if (log_scores[c] > log_scores[best]) best = c;
  pred.label = kClassOrder[best];
  return pred;
}

LinearModel LinearModel::train(const std::vector<Example>& train, const LinearTrainConfig& cfg,
                               const Vocabulary& vocab) {
  if (train.empty()) throw std::invalid_argument("train_linear: empty training set");
  if (cfg.lambda <= 0.0) throw std::invalid_argument("train_linear: lambda must be > 0");
  if (cfg.epochs < 1) throw std::invalid_argument("train_linear: epochs must be >= 1");

  LinearModel model;
  model.cfg_ = cfg;
  model.vocab_ = vocab;
  const std::size_t v = vocab.size();

  std::array<std::size_t, kNumClasses> class_counts{};
  for (const auto& ex : train) ++class_counts[class_index(ex.y)];
  int present = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    model.present_[c] = class_counts[c] > 0;
    if (model.present_[c]) ++present;
  }
  if (present < 2) throw std::invalid_argument("train_linear: need at least two classes present");

  std::vector<double> x_norm2(train.size(), 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    for (std::size_t k = 0; k < train[i].x.indices.size(); ++k) {
      if (train[i].x.indices[k] >= v)
        throw std::invalid_argument("train_linear: feature index outside vocabulary");
      x_norm2[i] += train[i].x.values[k] * train[i].x.values[k];
    }
  }

  const double radius = 1.0 / std::sqrt(cfg.lambda);

  for (int c = 0; c < kNumClasses; ++c) {
    model.weights_[c].assign(v, 0.0);
    model.bias_[c] = 0.0;
    if (!model.present_[c]) continue;

    // Scaled weight representation: w = scale * dense. Decay touches only
    // the scale, updates touch only the active features.
    std::vector<double> dense(v, 0.0);
    double scale = 1.0;
    double norm2 = 0.0;
    double bias = 0.0;

    Rng rng(splitmix64(cfg.seed ^ (0x9e37ULL + static_cast<std::uint64_t>(c))));
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::uint64_t t = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      rng.shuffle(order);
      for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const Example& ex = train[order[oi]];
        ++t;
        const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
        const double y = ex.y == kClassOrder[c] ? 1.0 : -1.0;

        double wx = 0.0;
        for (std::size_t k = 0; k < ex.x.indices.size(); ++k)
          wx += ex.x.values[k] * dense[ex.x.indices[k]];
        wx *= scale;

        const double decay = 1.0 - eta * cfg.lambda;
        bool violated = y * (wx + bias) < 1.0;

        norm2 *= decay * decay;
        scale *= decay;
        if (violated) {
          norm2 += 2.0 * eta * y * wx * decay + eta * eta * x_norm2[order[oi]];
          const double add = eta * y / scale;
          for (std::size_t k = 0; k < ex.x.indices.size(); ++k)
            dense[ex.x.indices[k]] += add * ex.x.values[k];
          bias += eta * y;
        }
        // Project onto the ball of radius 1/sqrt(lambda).
        if (norm2 > radius * radius) {
          const double shrink = radius / std::sqrt(norm2);
          scale *= shrink;
          norm2 = radius * radius;
        }
        if (std::abs(scale) < 1e-100 && scale != 0.0) {
          for (auto& d : dense) d *= scale;
          norm2 = 0.0;
          for (double d : dense) norm2 += d * d;
          scale = 1.0;
        }
      }
    }
    for (std::size_t k = 0; k < v; ++k) model.weights_[c][k] = scale * dense[k];
    model.bias_[c] = bias;
  }
  return model;
}

Prediction LinearModel::classify(const SparseVector& x) const {
  Prediction pred;
  std::array<double, kNumClasses> margins;
  margins.fill(kNegInf);
  for (int c = 0; c < kNumClasses; ++c) {
    if (!present_[c]) continue;
    for (std::size_t k = 0; k < x.indices.size(); ++k)
      if (x.indices[k] >= vocab_.size())
        throw std::invalid_argument("classify: feature index outside vocabulary");
    margins[c] = x.dot_dense(weights_[c]) + bias_[c];
  }
  pred.scores = margins;
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c)
    if (margins[c] > margins[best]) best = c;
  pred.label = kClassOrder[best];
  return pred;
}

// --- serialization -------------------------------------------------------

struct ModelCodec {
  static json nb_to_json(const NBModel& m) {
    json root;
    root["format"] = "stance-textmodel";
    root["version"] = 1;
    root["kind"] = "nb";
    root["alpha"] = to_hex(m.alpha_);
    root["present"] = m.present_;
    root["priors"] = doubles_to_json({m.priors_.begin(), m.priors_.end()});
    json ll = json::array();
    for (const auto& v : m.log_likelihood_) ll.push_back(doubles_to_json(v));
    root["log_likelihood"] = std::move(ll);
    root["has_zero_count"] = m.has_zero_count_;
    root["vocab"] = m.vocab_.tokens();
    return root;
  }

  static NBModel nb_from_json(const json& root) {
    NBModel m;
    m.alpha_ = from_hex(root.at("alpha").get<std::string>());
    auto present = root.at("present").get<std::vector<bool>>();
    auto priors = doubles_from_json(root.at("priors"));
    auto zero = root.at("has_zero_count").get<std::vector<bool>>();
    for (int c = 0; c < kNumClasses; ++c) {
      m.present_[c] = present.at(c);
      m.priors_[c] = priors.at(c);
      m.has_zero_count_[c] = zero.at(c);
      m.log_likelihood_[c] = doubles_from_json(root.at("log_likelihood").at(c));
    }
    m.vocab_ = Vocabulary::from_tokens(root.at("vocab").get<std::vector<std::string>>());
    return m;
  }

  static json linear_to_json(const LinearModel& m) {
    json root;
    root["format"] = "stance-textmodel";
    root["version"] = 1;
    root["kind"] = "linear";
    root["epochs"] = m.cfg_.epochs;
    root["lambda"] = to_hex(m.cfg_.lambda);
    root["seed"] = m.cfg_.seed;
    root["present"] = m.present_;
    json w = json::array();
    for (const auto& v : m.weights_) w.push_back(doubles_to_json(v));
    root["weights"] = std::move(w);
    root["bias"] = doubles_to_json({m.bias_.begin(), m.bias_.end()});
    root["vocab"] = m.vocab_.tokens();
    return root;
  }

  static LinearModel linear_from_json(const json& root) {
    LinearModel m;
    m.cfg_.epochs = root.at("epochs").get<int>();
    m.cfg_.lambda = from_hex(root.at("lambda").get<std::string>());
    m.cfg_.seed = root.at("seed").get<std::uint64_t>();
    auto present = root.at("present").get<std::vector<bool>>();
    auto bias = doubles_from_json(root.at("bias"));
    for (int c = 0; c < kNumClasses; ++c) {
      m.present_[c] = present.at(c);
      m.bias_[c] = bias.at(c);
      m.weights_[c] = doubles_from_json(root.at("weights").at(c));
    }
    m.vocab_ = Vocabulary::from_tokens(root.at("vocab").get<std::vector<std::string>>());
    return m;
  }

  static json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json root = json::parse(in, nullptr, false);
    if (root.is_discarded()) throw std::runtime_error("model file is not valid JSON: " + path);
    if (root.value("format", "") != "stance-textmodel" || root.value("version", 0) != 1)
      throw std::runtime_error("unsupported model format in " + path);
    return root;
  }

  static void write_file(const std::string& path, const json& root) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << root.dump() << '\n';
  }
};

void NBModel::save(const std::string& path) const {
  ModelCodec::write_file(path, ModelCodec::nb_to_json(*this));
}

NBModel NBModel::load(const std::string& path) {
  json root = ModelCodec::read_file(path);
  if (root.value("kind", "") != "nb") throw std::runtime_error("model in " + path + " is not nb");
  return ModelCodec::nb_from_json(root);
}

void LinearModel::save(const std::string& path) const {
  ModelCodec::write_file(path, ModelCodec::linear_to_json(*this));
}

LinearModel LinearModel::load(const std::string& path) {
  json root = ModelCodec::read_file(path);
  if (root.value("kind", "") != "linear")
    throw std::runtime_error("model in " + path + " is not linear");
  return ModelCodec::linear_from_json(root);
}

std::unique_ptr<TextClassifier> load_classifier(const std::string& path) {
  json root = ModelCodec::read_file(path);
  const std::string kind = root.value("kind", "");
  if (kind == "nb") return std::make_unique<NBModel>(ModelCodec::nb_from_json(root));
  if (kind == "linear") return std::make_unique<LinearModel>(ModelCodec::linear_from_json(root));
  throw std::runtime_error("unknown model kind '" + kind + "' in " + path);
}

// --- evaluation ----------------------------------------------------------

EvalReport evaluate_confusion(
    const std::array<std::array<std::size_t, kNumClasses>, kNumClasses>& confusion) {
  EvalReport report;
  report.confusion = confusion;
  std::size_t total = 0, correct = 0;
  for (int g = 0; g < kNumClasses; ++g)
    for (int p = 0; p < kNumClasses; ++p) {
      total += confusion[g][p];
      if (g == p) correct += confusion[g][p];
    }
  report.n = total;

  double f1_sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::size_t tp = confusion[c][c], fp = 0, fn = 0;
    for (int o = 0; o < kNumClasses; ++o) {
      if (o == c) continue;
      fp += confusion[o][c];
      fn += confusion[c][o];
    }
    double precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    double recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    double f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    report.per_class_f1[c] = f1;
    f1_sum += f1;
  }
  report.macro_f1 = f1_sum / kNumClasses;
  report.accuracy = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  return report;
}

EvalReport evaluate(const std::vector<StanceLabel>& gold,
                    const std::vector<StanceLabel>& predicted) {
  if (gold.size() != predicted.size())
    throw std::invalid_argument("evaluate: gold and predicted lengths differ");
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
  for (std::size_t i = 0; i < gold.size(); ++i)
    ++confusion[class_index(gold[i])][class_index(predicted[i])];
  return evaluate_confusion(confusion);
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", macro_f1);
  os << "macro_f1\t" << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.6f", accuracy);
  os << "accuracy\t" << buf << '\n';
  for (int c = 0; c < kNumClasses; ++c) {
    std::snprintf(buf, sizeof(buf), "%.6f", per_class_f1[c]);
    os << "f1_" << to_string(kClassOrder[c]) << '\t' << buf << '\n';
  }
  os << "n\t" << n << '\n';
  os << "confusion\tgold\\pred";
  for (int c = 0; c < kNumClasses; ++c) os << '\t' << to_string(kClassOrder[c]);
  os << '\n';
  for (int g = 0; g < kNumClasses; ++g) {
    os << "confusion\t" << to_string(kClassOrder[g]);
    for (int p = 0; p < kNumClasses; ++p) os << '\t' << confusion[g][p];
    os << '\n';
  }
  return os.str();
}

}  // namespace stance::text
