#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stance/types.hpp"

namespace stance::corpus {

struct Tweet {
  std::string tweet_id;
  std::string user_id;
  std::string topic;
  std::string text;
  // Lowercase tags without '#', in order of appearance when derived from text.
  std::vector<std::string> hashtags;
  std::int64_t created_at = 0;  // UTC epoch seconds
  bool is_retweet = false;
  std::optional<std::string> retweeted_user_id;  // set iff retweet or quote
};

struct CleaningConfig {
  // Nearest-rank percentile of per-user post counts; users strictly above
  // the threshold value are dropped. Applied to the corpus as loaded,
  // i.e. per topic when corpora are loaded one topic at a time.
  double bot_percentile = 0.95;
  int min_posts_per_topic = 2;
  bool drop_retweets = true;

  void validate() const;
};

struct CleaningReport {
  std::size_t input_tweets = 0;
  std::size_t retweets_removed = 0;
  std::size_t bot_users_removed = 0;
  std::size_t bot_tweets_removed = 0;
  std::size_t low_activity_users_removed = 0;
  std::size_t low_activity_tweets_removed = 0;
  std::size_t output_tweets = 0;
  std::int64_t bot_post_threshold = 0;  // nearest-rank percentile value

  std::string to_text() const;
};

struct CorpusStats {
  std::size_t tweets_total = 0;
  std::size_t users_total = 0;
  std::map<std::string, std::size_t> per_topic_counts;
  std::map<std::string, std::size_t> per_user_post_counts;
  double hashtag_coverage = 0.0;
};

struct LoadResult {
  std::vector<Tweet> tweets;
  std::size_t lines_total = 0;
  std::size_t lines_rejected = 0;
  std::vector<std::string> reject_samples;  // first few reasons, for the report
};

// Hashtag token: '#' preceded by start-of-string or whitespace, followed by
// a maximal run of [A-Za-z0-9_]. Returns [begin, end) byte spans of whole
// tokens including the '#'.
std::vector<std::pair<std::size_t, std::size_t>> find_hashtag_spans(const std::string& text);

// Tags from text per the rule above, lowercased, '#' stripped, in order.
std::vector<std::string> derive_hashtags(const std::string& text);

// RFC 3339 timestamp -> UTC epoch seconds. Accepts 'Z' or +-hh:mm offsets
// and ignores fractional seconds.
std::optional<std::int64_t> parse_rfc3339(const std::string& s);
std::string format_rfc3339(std::int64_t epoch_seconds);

// One JSON object per line. Malformed lines are counted, not fatal;
// throws only when the file is unreadable or no line parses.
LoadResult load_corpus(const std::string& path, const std::string& topic);

// Parse one record; used by load_corpus and by tools that stream stdin.
// Returns std::nullopt and sets `error` on a malformed record.
std::optional<Tweet> parse_tweet_line(const std::string& line, const std::string& topic,
                                      std::string& error);

std::string tweet_to_json_line(const Tweet& tweet);
void write_corpus(const std::string& path, const std::vector<Tweet>& tweets);

// Stages in fixed order: retweets/quotes, bot-percentile users, low-activity
// (user, topic) pairs. Throws if input is empty or nothing survives.
std::pair<std::vector<Tweet>, CleaningReport> clean_corpus(const std::vector<Tweet>& tweets,
                                                           const CleaningConfig& cfg);

CorpusStats corpus_stats(const std::vector<Tweet>& tweets);

// Nearest-rank percentile: value at 1-based index ceil(p * n) of the sorted
// sample. Exposed for tests.
std::int64_t nearest_rank_percentile(std::vector<std::int64_t> values, double p);

}  // namespace stance::corpus
