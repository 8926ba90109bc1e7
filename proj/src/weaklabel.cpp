#include "stance/weaklabel.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace stance::weaklabel {

using nlohmann::json;

namespace {

std::string normalize_tag(std::string tag) {
  if (!tag.empty() && tag[0] == '#') tag.erase(0, 1);
  for (char& c : tag)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return tag;
}

}  // namespace

StanceLexicon StanceLexicon::make(std::string topic, const std::vector<std::string>& support,
                                  const std::vector<std::string>& against) {
  StanceLexicon lex;
  lex.topic = std::move(topic);
  for (const auto& t : support) {
    std::string tag = normalize_tag(t);
    if (tag.empty()) throw std::invalid_argument("lexicon: empty support tag");
    lex.support_tags.insert(tag);
  }
  for (const auto& t : against) {
    std::string tag = normalize_tag(t);
    if (tag.empty()) throw std::invalid_argument("lexicon: empty against tag");
    if (lex.support_tags.count(tag))
      throw std::invalid_argument("lexicon: tag in both support and against sets: " + tag);
    lex.against_tags.insert(tag);
  }
  return lex;
}

StanceLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw std::runtime_error("lexicon file is not a JSON object: " + path);
  if (!root.contains("topic") || !root.contains("support") || !root.contains("against"))
    throw std::runtime_error("lexicon file needs topic/support/against fields: " + path);
  return StanceLexicon::make(root["topic"].get<std::string>(),
                             root["support"].get<std::vector<std::string>>(),
                             root["against"].get<std::vector<std::string>>());
}

void save_lexicon(const std::string& path, const StanceLexicon& lexicon) {
  std::vector<std::string> support(lexicon.support_tags.begin(), lexicon.support_tags.end());
  std::vector<std::string> against(lexicon.against_tags.begin(), lexicon.against_tags.end());
  std::sort(support.begin(), support.end());
  std::sort(against.begin(), against.end());
  json root = {{"topic", lexicon.topic}, {"support", support}, {"against", against}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write lexicon file: " + path);
  out << root.dump(2) << '\n';
}

std::pair<StanceLabel, int> detect_stance(const corpus::Tweet& tweet,
                                          const StanceLexicon& lexicon) {
  std::unordered_set<std::string> seen;
  int score = 0;
  for (const auto& tag : tweet.hashtags) {
    if (!seen.insert(tag).second) continue;
    if (lexicon.support_tags.count(tag))
      ++score;
    else if (lexicon.against_tags.count(tag))
      --score;
  }
  StanceLabel label = score > 0   ? StanceLabel::Support
                      : score < 0 ? StanceLabel::Against
                                  : StanceLabel::NonOpinionated;
  return {label, score};
}

std::vector<WeakLabeledTweet> label_corpus(const std::vector<corpus::Tweet>& tweets,
                                           const StanceLexicon& lexicon) {
  std::vector<WeakLabeledTweet> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    if (t.topic != lexicon.topic)
      throw std::invalid_argument("label_corpus: tweet topic " + t.topic +
                                  " does not match lexicon topic " + lexicon.topic);
    auto [label, score] = detect_stance(t, lexicon);
    out.push_back({t, label, score, std::nullopt});
  }
  return out;
}

std::map<StanceLabel, std::size_t> label_distribution(
    const std::vector<WeakLabeledTweet>& labeled) {
  std::map<StanceLabel, std::size_t> dist = {{StanceLabel::Against, 0},
                                             {StanceLabel::NonOpinionated, 0},
                                             {StanceLabel::Support, 0}};
  for (const auto& item : labeled) ++dist[item.label];
  return dist;
}

std::string mask_hashtags(const std::string& text) {
  auto spans = corpus::find_hashtag_spans(text);
  std::string stripped;
  stripped.reserve(text.size());
  std::size_t pos = 0;
  for (const auto& [b, e] : spans) {
    stripped.append(text, pos, b - pos);
    pos = e;
  }
  stripped.append(text, pos, std::string::npos);

  // Collapse whitespace runs and trim.
  std::string out;
  out.reserve(stripped.size());
  bool pending_space = false;
  for (char c : stripped) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

std::string labeled_to_json_line(const WeakLabeledTweet& item) {
  json rec = json::parse(corpus::tweet_to_json_line(item.tweet));
  rec["label"] = to_string(item.label);
  rec["score"] = item.score;
  if (item.masked_text) rec["masked_text"] = *item.masked_text;
  return rec.dump();
}

void write_labeled(const std::string& path, const std::vector<WeakLabeledTweet>& labeled) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labeled file: " + path);
  for (const auto& item : labeled) out << labeled_to_json_line(item) << '\n';
}

std::vector<WeakLabeledTweet> load_labeled(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labeled file: " + path);
  std::vector<WeakLabeledTweet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string error;
    auto tweet = corpus::parse_tweet_line(line, "", error);
    if (!tweet)
      throw std::runtime_error("bad labeled record at line " + std::to_string(line_no) + ": " +
                               error);
    json rec = json::parse(line);
    WeakLabeledTweet item;
    item.tweet = std::move(*tweet);
    item.label = stance_from_string(rec.at("label").get<std::string>());
    item.score = rec.value("score", 0);
    if (rec.contains("masked_text")) item.masked_text = rec["masked_text"].get<std::string>();
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace stance::weaklabel
