#include "stance/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stance/rng.hpp"

namespace stance::corpus {

using nlohmann::json;

void SyntheticSpec::validate() const {
  if (n_users < 1) throw std::invalid_argument("SyntheticSpec: n_users must be >= 1");
  if (topics.empty()) throw std::invalid_argument("SyntheticSpec: no topics");
  if (tweets_per_user_range[0] < 1 || tweets_per_user_range[1] < tweets_per_user_range[0])
    throw std::invalid_argument("SyntheticSpec: bad tweets_per_user_range");
  if (words_per_tweet_range[0] < 1 || words_per_tweet_range[1] < words_per_tweet_range[0])
    throw std::invalid_argument("SyntheticSpec: bad words_per_tweet_range");
  if (!(hashtag_emission_rate >= 0.0 && hashtag_emission_rate <= 1.0))
    throw std::invalid_argument("SyntheticSpec: hashtag_emission_rate must be in [0, 1]");
  if (!(neutral_filler_rate >= 0.0 && neutral_filler_rate <= 1.0))
    throw std::invalid_argument("SyntheticSpec: neutral_filler_rate must be in [0, 1]");
  if (stance_noise < 0.0) throw std::invalid_argument("SyntheticSpec: stance_noise must be >= 0");
  const std::size_t k = topics.size();
  if (ideology_coupling.size() != k)
    throw std::invalid_argument("SyntheticSpec: coupling matrix size != number of topics");
  for (std::size_t i = 0; i < k; ++i) {
    if (ideology_coupling[i].size() != k)
      throw std::invalid_argument("SyntheticSpec: coupling matrix is not square");
    if (std::abs(ideology_coupling[i][i] - 1.0) > 1e-12)
      throw std::invalid_argument("SyntheticSpec: coupling diagonal must be 1");
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(ideology_coupling[i][j] - ideology_coupling[j][i]) > 1e-12)
        throw std::invalid_argument("SyntheticSpec: coupling matrix not symmetric");
      if (std::abs(ideology_coupling[i][j]) > 1.0 + 1e-12)
        throw std::invalid_argument("SyntheticSpec: coupling entries must be in [-1, 1]");
    }
  }
  for (const auto& topic : topics) {
    auto it = vocabulary.find(topic);
    if (it == vocabulary.end())
      throw std::invalid_argument("SyntheticSpec: no vocabulary for topic " + topic);
    const auto& v = it->second;
    if (v.support_words.empty() || v.against_words.empty())
      throw std::invalid_argument("SyntheticSpec: empty stance word list for " + topic);
    if (hashtag_emission_rate > 0.0 && (v.support_tags.empty() || v.against_tags.empty()))
      throw std::invalid_argument("SyntheticSpec: empty tag list for " + topic);
  }
  if (historical_tweets_per_user > 0) {
    auto it = vocabulary.find(historical_topic);
    if (it == vocabulary.end() || it->second.neutral_words.empty())
      throw std::invalid_argument("SyntheticSpec: historical topic needs neutral words");
  }
}

std::vector<std::vector<double>> cholesky_psd(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (d < -1e-8) throw std::invalid_argument("coupling matrix is not positive semi-definite");
    l[j][j] = d > 0.0 ? std::sqrt(d) : 0.0;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = l[j][j] > 0.0 ? s / l[j][j] : 0.0;
    }
  }
  return l;
}

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

const std::string& pick(const std::vector<std::string>& words, Rng& rng) {
  return words[rng.uniform_int(words.size())];
}

std::string make_text(const TopicVocabulary& vocab, StanceLabel stance, int n_words, Rng& rng) {
  // Words drawn uniformly from the stance list plus the shared neutral pool;
  // the relative list sizes set how separable the classes are.
  const std::vector<std::string>* stance_words = nullptr;
  switch (stance) {
    case StanceLabel::Support:
      stance_words = &vocab.support_words;
      break;
    case StanceLabel::Against:
      stance_words = &vocab.against_words;
      break;
    case StanceLabel::NonOpinionated:
      stance_words = &vocab.neutral_words;
      break;
  }
  std::string text;
  for (int w = 0; w < n_words; ++w) {
    std::size_t pool = stance_words->size() + vocab.neutral_words.size();
    std::size_t i = pool > 0 ? rng.uniform_int(pool) : 0;
    const std::string& word = i < stance_words->size()
                                  ? (*stance_words)[i]
                                  : vocab.neutral_words[i - stance_words->size()];
    if (!text.empty()) text += ' ';
    text += word;
  }
  return text;
}

}  // namespace

const UserTruth* GroundTruth::find_user(const std::string& user_id) const {
  for (const auto& u : users)
    if (u.user_id == user_id) return &u;
  return nullptr;
}

std::pair<std::vector<Tweet>, GroundTruth> generate_synthetic_corpus(const SyntheticSpec& spec) {
  spec.validate();
  const auto chol = cholesky_psd(spec.ideology_coupling);
  const std::size_t n_topics = spec.topics.size();

  Rng rng(splitmix64(spec.seed));
  std::vector<Tweet> tweets;
  GroundTruth truth;
  truth.users.reserve(spec.n_users);

  const std::int64_t base_time = 1585872000;  // 2020-04-03T00:00:00Z
  std::int64_t tick = 0;

  for (int u = 0; u < spec.n_users; ++u) {
    char uid[32];
    std::snprintf(uid, sizeof(uid), "u%06d", u);
    UserTruth user;
    user.user_id = uid;

    // Account stats are independent of ideology by construction.
    user.stats.followers = rng.uniform_range(0, 20000);
    user.stats.followings = rng.uniform_range(0, 5000);
    user.stats.tweets_posted = rng.uniform_range(1, 50000);
    user.stats.listed = rng.uniform_range(0, 200);
    user.stats.account_age_days = rng.uniform_range(30, 5000);
    user.stats.protected_account = rng.bernoulli(0.05);
    user.stats.verified = rng.bernoulli(0.02);

    // Profile text from the first topic's neutral pool, if any.
    {
      const auto& vocab = spec.vocabulary.at(spec.topics[0]);
      if (!vocab.neutral_words.empty()) {
        for (int w = 0; w < 4; ++w) {
          if (w > 0) user.profile_text += ' ';
          user.profile_text += pick(vocab.neutral_words, rng);
        }
      }
    }

    // Latent ideology with the planted coupling.
    std::vector<double> raw(n_topics);
    for (auto& v : raw) v = rng.normal();
    std::vector<double> latent(n_topics, 0.0);
    for (std::size_t i = 0; i < n_topics; ++i)
      for (std::size_t j = 0; j <= i; ++j) latent[i] += chol[i][j] * raw[j];

    for (std::size_t ti = 0; ti < n_topics; ++ti) {
      const std::string& topic = spec.topics[ti];
      const auto& vocab = spec.vocabulary.at(topic);
      TopicTruth tt;
      tt.latent = latent[ti];
      tt.stance = latent[ti] >= 0.0 ? StanceLabel::Support : StanceLabel::Against;

      const int n_tweets = static_cast<int>(
          rng.uniform_range(spec.tweets_per_user_range[0], spec.tweets_per_user_range[1]));
      for (int k = 0; k < n_tweets; ++k) {
        Tweet tw;
        char tid[64];
        std::snprintf(tid, sizeof(tid), "syn-%s-%06d-%04d", topic.c_str(), u, k);
        tw.tweet_id = tid;
        tw.user_id = user.user_id;
        tw.topic = topic;
        tw.created_at = base_time + 60 * tick++;

        StanceLabel tweet_stance;
        if (rng.bernoulli(spec.neutral_filler_rate)) {
          tweet_stance = StanceLabel::NonOpinionated;
        } else if (spec.stance_noise == 0.0) {
          tweet_stance = tt.stance;
          rng.next_unit();  // keep the draw count independent of the branch
        } else {
          double p_support = std_normal_cdf(latent[ti] / spec.stance_noise);
          tweet_stance = rng.bernoulli(p_support) ? StanceLabel::Support : StanceLabel::Against;
        }

        const int n_words = static_cast<int>(
            rng.uniform_range(spec.words_per_tweet_range[0], spec.words_per_tweet_range[1]));
        tw.text = make_text(vocab, tweet_stance, n_words, rng);

        if (tweet_stance != StanceLabel::NonOpinionated &&
            rng.bernoulli(spec.hashtag_emission_rate)) {
          const auto& tags = tweet_stance == StanceLabel::Support ? vocab.support_tags
                                                                  : vocab.against_tags;
          const std::string& tag = pick(tags, rng);
          tw.text += " #" + tag;
          if (tweet_stance == StanceLabel::Support)
            ++tt.n_support_tagged;
          else
            ++tt.n_against_tagged;
        }
        tw.hashtags = derive_hashtags(tw.text);
        truth.tweet_stance.emplace(tw.tweet_id, tweet_stance);
        tweets.push_back(std::move(tw));
      }
      user.topics.emplace(topic, tt);
    }

    for (int k = 0; k < spec.historical_tweets_per_user; ++k) {
      const auto& vocab = spec.vocabulary.at(spec.historical_topic);
      Tweet tw;
      char tid[64];
      std::snprintf(tid, sizeof(tid), "syn-hist-%06d-%04d", u, k);
      tw.tweet_id = tid;
      tw.user_id = user.user_id;
      tw.topic = spec.historical_topic;
      tw.created_at = base_time + 60 * tick++;
      const int n_words = static_cast<int>(
          rng.uniform_range(spec.words_per_tweet_range[0], spec.words_per_tweet_range[1]));
      tw.text = make_text(vocab, StanceLabel::NonOpinionated, n_words, rng);
      tw.hashtags = derive_hashtags(tw.text);
      truth.tweet_stance.emplace(tw.tweet_id, StanceLabel::NonOpinionated);
      tweets.push_back(std::move(tw));
    }

    truth.users.push_back(std::move(user));
  }

  // Retweet records planted with homophily on the first topic's stance.
  if (spec.n_retweet_records > 0 && spec.n_users >= 2) {
    const std::string& topic = spec.topics[0];
    std::vector<std::size_t> supporters, opponents;
    for (std::size_t i = 0; i < truth.users.size(); ++i) {
      if (truth.users[i].topics.at(topic).stance == StanceLabel::Support)
        supporters.push_back(i);
      else
        opponents.push_back(i);
    }
    if (!supporters.empty() && !opponents.empty()) {
      for (long long r = 0; r < spec.n_retweet_records; ++r) {
        std::size_t a = rng.uniform_int(truth.users.size());
        bool a_support = truth.users[a].topics.at(topic).stance == StanceLabel::Support;
        bool same = rng.bernoulli(spec.retweet_homophily);
        const auto& group = (a_support == same) ? supporters : opponents;
        std::size_t b = group[rng.uniform_int(group.size())];
        for (int attempt = 0; b == a && attempt < 8; ++attempt)
          b = group[rng.uniform_int(group.size())];
        if (b == a) continue;
        truth.retweets.push_back({truth.users[a].user_id, truth.users[b].user_id});
      }
    }
  }

  return {std::move(tweets), std::move(truth)};
}

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec spec;
  spec.topics = {"trump", "mask", "racial"};
  spec.ideology_coupling = {{1.0, -0.85, -0.9}, {-0.85, 1.0, 0.8}, {-0.9, 0.8, 1.0}};
  spec.hashtag_emission_rate = 0.5;
  spec.neutral_filler_rate = 0.3;
  spec.historical_tweets_per_user = 3;

  auto words = [](const char* prefix, int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(std::string(prefix) + std::to_string(i));
    return v;
  };
  for (const auto& topic : spec.topics) {
    TopicVocabulary vocab;
    vocab.support_words = words(("pro" + topic).c_str(), 12);
    vocab.against_words = words(("anti" + topic).c_str(), 12);
    vocab.neutral_words = words(("re" + topic).c_str(), 12);
    vocab.support_tags = words(("yes" + topic).c_str(), 4);
    vocab.against_tags = words(("no" + topic).c_str(), 4);
    spec.vocabulary[topic] = vocab;
  }
  TopicVocabulary hist;
  hist.support_words = {"x"};
  hist.against_words = {"x"};
  hist.neutral_words = words("daily", 20);
  spec.vocabulary[spec.historical_topic] = hist;
  return spec;
}

void write_ground_truth(const std::string& path, const GroundTruth& truth,
                        bool include_tweet_stances) {
  json root;
  json users = json::array();
  for (const auto& u : truth.users) {
    json ju;
    ju["user_id"] = u.user_id;
    ju["profile_text"] = u.profile_text;
    ju["stats"] = {{"followers", u.stats.followers},
                   {"followings", u.stats.followings},
                   {"tweets_posted", u.stats.tweets_posted},
                   {"listed", u.stats.listed},
                   {"account_age_days", u.stats.account_age_days},
                   {"protected", u.stats.protected_account},
                   {"verified", u.stats.verified}};
    json topics;
    for (const auto& [topic, tt] : u.topics) {
      topics[topic] = {{"latent", tt.latent},
                       {"stance", to_string(tt.stance)},
                       {"n_support_tagged", tt.n_support_tagged},
                       {"n_against_tagged", tt.n_against_tagged}};
    }
    ju["topics"] = std::move(topics);
    users.push_back(std::move(ju));
  }
  root["users"] = std::move(users);
  if (include_tweet_stances) {
    json stances;
    std::vector<std::string> ids;
    ids.reserve(truth.tweet_stance.size());
    for (const auto& [id, _] : truth.tweet_stance) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) stances[id] = to_string(truth.tweet_stance.at(id));
    root["tweet_stance"] = std::move(stances);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ground truth file: " + path);
  out << root.dump(2) << '\n';
}

void write_stats_file(const std::string& path, const GroundTruth& truth) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write stats file: " + path);
  for (const auto& u : truth.users) {
    json rec;
    rec["user_id"] = u.user_id;
    rec["followers"] = u.stats.followers;
    rec["followings"] = u.stats.followings;
    rec["tweets_posted"] = u.stats.tweets_posted;
    rec["listed"] = u.stats.listed;
    rec["account_age_days"] = u.stats.account_age_days;
    rec["protected"] = u.stats.protected_account;
    rec["verified"] = u.stats.verified;
    rec["profile_text"] = u.profile_text;
    out << rec.dump() << '\n';
  }
}

void write_retweets_file(const std::string& path, const std::vector<RetweetRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write retweets file: " + path);
  out << "retweeter\tretweeted\n";
  for (const auto& r : records) out << r.retweeter << '\t' << r.retweeted << '\n';
}

std::vector<RetweetRecord> load_retweets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open retweets file: " + path);
  std::vector<RetweetRecord> records;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string a = line.substr(0, tab), b = line.substr(tab + 1);
    if (first && a == "retweeter") {
      first = false;
      continue;
    }
    first = false;
    records.push_back({std::move(a), std::move(b)});
  }
  return records;
}

}  // namespace stance::corpus
