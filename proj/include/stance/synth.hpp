#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/types.hpp"

namespace stance::corpus {

struct TopicVocabulary {
  std::vector<std::string> support_words;
  std::vector<std::string> against_words;
  std::vector<std::string> neutral_words;
  std::vector<std::string> support_tags;
  std::vector<std::string> against_tags;
};

// Desk-scale corpus with known per-user ideology, used as the test oracle
// substrate throughout.
struct SyntheticSpec {
  int n_users = 1000;
  std::array<int, 2> tweets_per_user_range{10, 30};
  std::array<int, 2> words_per_tweet_range{5, 12};
  std::vector<std::string> topics;
  // Symmetric, unit diagonal, entries in [-1, 1]; must be PSD.
  std::vector<std::vector<double>> ideology_coupling;
  double hashtag_emission_rate = 0.5;
  // Probability a tweet is non-opinionated filler: neutral words, no tag.
  double neutral_filler_rate = 0.0;
  // Temperature of per-tweet stance around the user's latent ideology:
  // P(tweet supports | z) = Phi(z / stance_noise). 0 means every tweet
  // follows sign(z) exactly.
  double stance_noise = 1.0;
  std::map<std::string, TopicVocabulary> vocabulary;
  int historical_tweets_per_user = 0;
  std::string historical_topic = "background";
  long long n_retweet_records = 0;
  double retweet_homophily = 0.8;  // planted on the first topic's stance
  std::uint64_t seed = 1;

  void validate() const;
};

struct TopicTruth {
  double latent = 0.0;
  StanceLabel stance = StanceLabel::NonOpinionated;  // Support or Against
  std::int64_t n_support_tagged = 0;  // tweets emitted with a support tag
  std::int64_t n_against_tagged = 0;
};

struct UserTruth {
  std::string user_id;
  TwitterStats stats;
  std::string profile_text;
  std::map<std::string, TopicTruth> topics;
};

struct GroundTruth {
  std::vector<UserTruth> users;
  // Stance of each generated tweet: Support/Against for stanceful tweets,
  // NonOpinionated for filler and historical ones.
  std::unordered_map<std::string, StanceLabel> tweet_stance;
  std::vector<RetweetRecord> retweets;

  const UserTruth* find_user(const std::string& user_id) const;
};

// Cholesky factor of a PSD matrix; semidefinite pivots are clamped to zero.
// Throws if the matrix is not PSD.
std::vector<std::vector<double>> cholesky_psd(const std::vector<std::vector<double>>& a);

std::pair<std::vector<Tweet>, GroundTruth> generate_synthetic_corpus(const SyntheticSpec& spec);

// A spec with three coupled topics and stance-separable vocabularies;
// starting point for CLI runs and tests.
SyntheticSpec default_synthetic_spec();

void write_ground_truth(const std::string& path, const GroundTruth& truth,
                        bool include_tweet_stances = false);
void write_stats_file(const std::string& path, const GroundTruth& truth);
void write_retweets_file(const std::string& path, const std::vector<RetweetRecord>& records);
std::vector<RetweetRecord> load_retweets_file(const std::string& path);

}  // namespace stance::corpus
