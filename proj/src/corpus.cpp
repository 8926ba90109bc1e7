#include "stance/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace stance::corpus {

using nlohmann::json;

void CleaningConfig::validate() const {
  if (!(bot_percentile > 0.0 && bot_percentile <= 1.0))
    throw std::invalid_argument("bot_percentile must be in (0, 1]");
  if (min_posts_per_topic < 1)
    throw std::invalid_argument("min_posts_per_topic must be >= 1");
}

namespace {

bool is_tag_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string lower_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> find_hashtag_spans(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (text[i] != '#') continue;
    if (i > 0 && !is_space(text[i - 1])) continue;  // '#' mid-word is not a tag
    std::size_t j = i + 1;
    while (j < n && is_tag_char(text[j])) ++j;
    if (j == i + 1) continue;  // bare '#'
    spans.emplace_back(i, j);
    i = j - 1;
  }
  return spans;
}

std::vector<std::string> derive_hashtags(const std::string& text) {
  std::vector<std::string> tags;
  for (const auto& [b, e] : find_hashtag_spans(text))
    tags.push_back(lower_ascii(text.substr(b + 1, e - b - 1)));
  return tags;
}

std::optional<std::int64_t> parse_rfc3339(const std::string& s) {
  int y, mo, d, h, mi, sec;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &sec,
                  &consumed) != 6)
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) return std::nullopt;

  std::size_t pos = static_cast<std::size_t>(consumed);
  // Skip fractional seconds.
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  std::int64_t offset = 0;
  if (pos >= s.size()) return std::nullopt;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (std::sscanf(s.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2) return std::nullopt;
    offset = (s[pos] == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  // Days from civil date (proleptic Gregorian).
  std::int64_t yy = y;
  yy -= mo <= 2;
  const std::int64_t era = (yy >= 0 ? yy : yy - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(yy - era * 400);
  const unsigned doy = (153u * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t days = era * 146097 + static_cast<std::int64_t>(doe) - 719468;
  return days * 86400 + h * 3600 + mi * 60 + sec - offset;
}

std::string format_rfc3339(std::int64_t t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

std::optional<Tweet> parse_tweet_line(const std::string& line, const std::string& topic,
                                      std::string& error) {
  json rec = json::parse(line, nullptr, false);
  if (rec.is_discarded() || !rec.is_object()) {
    error = "not a JSON object";
    return std::nullopt;
  }
  Tweet t;
  try {
    t.tweet_id = rec.at("tweet_id").get<std::string>();
    t.user_id = rec.at("user_id").get<std::string>();
    t.text = rec.at("text").get<std::string>();
  } catch (const json::exception& e) {
    error = e.what();
    return std::nullopt;
  }
  if (rec.contains("topic")) {
    if (!rec["topic"].is_string()) {
      error = "topic is not a string";
      return std::nullopt;
    }
    t.topic = rec["topic"].get<std::string>();
    if (!topic.empty() && t.topic != topic) {
      error = "topic mismatch: " + t.topic;
      return std::nullopt;
    }
  } else {
    t.topic = topic;
  }
  if (rec.contains("created_at")) {
    if (!rec["created_at"].is_string()) {
      error = "created_at is not a string";
      return std::nullopt;
    }
    auto ts = parse_rfc3339(rec["created_at"].get<std::string>());
    if (!ts) {
      error = "bad created_at: " + rec["created_at"].get<std::string>();
      return std::nullopt;
    }
    t.created_at = *ts;
  } else {
    error = "missing created_at";
    return std::nullopt;
  }
  if (rec.contains("is_retweet")) {
    if (!rec["is_retweet"].is_boolean()) {
      error = "is_retweet is not a boolean";
      return std::nullopt;
    }
    t.is_retweet = rec["is_retweet"].get<bool>();
  }
  if (rec.contains("retweeted_user_id") && rec["retweeted_user_id"].is_string())
    t.retweeted_user_id = rec["retweeted_user_id"].get<std::string>();
  if (rec.contains("hashtags")) {
    if (!rec["hashtags"].is_array()) {
      error = "hashtags is not an array";
      return std::nullopt;
    }
    for (const auto& h : rec["hashtags"]) {
      if (!h.is_string()) {
        error = "hashtag is not a string";
        return std::nullopt;
      }
      std::string tag = lower_ascii(h.get<std::string>());
      if (!tag.empty() && tag[0] == '#') tag.erase(0, 1);
      if (!tag.empty()) t.hashtags.push_back(tag);
    }
  } else {
    t.hashtags = derive_hashtags(t.text);
  }
  return t;
}

LoadResult load_corpus(const std::string& path, const std::string& topic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);

  LoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++result.lines_total;
    std::string error;
    auto t = parse_tweet_line(line, topic, error);
    if (t && !seen_ids.insert(t->tweet_id).second) {
      t.reset();
      error = "duplicate tweet_id: " + line.substr(0, 40);
    }
    if (!t) {
      ++result.lines_rejected;
      if (result.reject_samples.size() < 10)
        result.reject_samples.push_back("line " + std::to_string(line_no) + ": " + error);
      continue;
    }
    result.tweets.push_back(std::move(*t));
  }
  if (result.lines_total == 0) throw std::runtime_error("empty corpus file: " + path);
  if (result.tweets.empty())
    throw std::runtime_error("no parseable records in " + path + " (" +
                             std::to_string(result.lines_rejected) + " rejects)");
  return result;
}

std::string tweet_to_json_line(const Tweet& tweet) {
  json rec;
  rec["tweet_id"] = tweet.tweet_id;
  rec["user_id"] = tweet.user_id;
  rec["topic"] = tweet.topic;
  rec["text"] = tweet.text;
  rec["hashtags"] = tweet.hashtags;
  rec["created_at"] = format_rfc3339(tweet.created_at);
  rec["is_retweet"] = tweet.is_retweet;
  if (tweet.retweeted_user_id) rec["retweeted_user_id"] = *tweet.retweeted_user_id;
  return rec.dump();
}

void write_corpus(const std::string& path, const std::vector<Tweet>& tweets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& t : tweets) out << tweet_to_json_line(t) << '\n';
}

std::int64_t nearest_rank_percentile(std::vector<std::int64_t> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile must be in (0, 1]");
  std::sort(values.begin(), values.end());
  std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

std::pair<std::vector<Tweet>, CleaningReport> clean_corpus(const std::vector<Tweet>& tweets,
                                                           const CleaningConfig& cfg) {
  cfg.validate();
  if (tweets.empty()) throw std::invalid_argument("clean_corpus: empty input");

  CleaningReport report;
  report.input_tweets = tweets.size();

  // Stage 1: retweets and quotes.
  std::vector<Tweet> kept;
  kept.reserve(tweets.size());
  for (const auto& t : tweets) {
    if (cfg.drop_retweets && (t.is_retweet || t.retweeted_user_id)) {
      ++report.retweets_removed;
      continue;
    }
    kept.push_back(t);
  }

  // Stage 2: bot-likely users by nearest-rank percentile of post counts,
  // computed on what stage 1 left.
  if (!kept.empty()) {
    std::unordered_map<std::string, std::int64_t> user_counts;
    for (const auto& t : kept) ++user_counts[t.user_id];
    std::vector<std::int64_t> counts;
    counts.reserve(user_counts.size());
    for (const auto& [_, c] : user_counts) counts.push_back(c);
    report.bot_post_threshold = nearest_rank_percentile(counts, cfg.bot_percentile);

    std::unordered_set<std::string> bots;
    for (const auto& [user, c] : user_counts)
      if (c > report.bot_post_threshold) bots.insert(user);
    report.bot_users_removed = bots.size();

    std::vector<Tweet> next;
    next.reserve(kept.size());
    for (auto& t : kept) {
      if (bots.count(t.user_id)) {
        ++report.bot_tweets_removed;
        continue;
      }
      next.push_back(std::move(t));
    }
    kept = std::move(next);
  }

  // Stage 3: (user, topic) pairs with too few remaining posts.
  if (!kept.empty()) {
    std::map<std::pair<std::string, std::string>, std::int64_t> pair_counts;
    for (const auto& t : kept) ++pair_counts[{t.user_id, t.topic}];
    std::set<std::pair<std::string, std::string>> low;
    for (const auto& [key, c] : pair_counts)
      if (c < cfg.min_posts_per_topic) low.insert(key);
    report.low_activity_users_removed = low.size();

    std::vector<Tweet> next;
    next.reserve(kept.size());
    for (auto& t : kept) {
      if (low.count({t.user_id, t.topic})) {
        ++report.low_activity_tweets_removed;
        continue;
      }
      next.push_back(std::move(t));
    }
    kept = std::move(next);
  }

  if (kept.empty()) throw std::runtime_error("clean_corpus: cleaning removed every tweet");
  report.output_tweets = kept.size();
  return {std::move(kept), report};
}

std::string CleaningReport::to_text() const {
  std::ostringstream os;
  os << "input_tweets\t" << input_tweets << '\n'
     << "retweets_removed\t" << retweets_removed << '\n'
     << "bot_post_threshold\t" << bot_post_threshold << '\n'
     << "bot_users_removed\t" << bot_users_removed << '\n'
     << "bot_tweets_removed\t" << bot_tweets_removed << '\n'
     << "low_activity_users_removed\t" << low_activity_users_removed << '\n'
     << "low_activity_tweets_removed\t" << low_activity_tweets_removed << '\n'
     << "output_tweets\t" << output_tweets << '\n';
  return os.str();
}

CorpusStats corpus_stats(const std::vector<Tweet>& tweets) {
  CorpusStats stats;
  stats.tweets_total = tweets.size();
  std::size_t with_tags = 0;
  for (const auto& t : tweets) {
    ++stats.per_topic_counts[t.topic];
    ++stats.per_user_post_counts[t.user_id];
    if (!t.hashtags.empty()) ++with_tags;
  }
  stats.users_total = stats.per_user_post_counts.size();
  stats.hashtag_coverage =
      tweets.empty() ? 0.0 : static_cast<double>(with_tags) / static_cast<double>(tweets.size());
  return stats;
}

}  // namespace stance::corpus
