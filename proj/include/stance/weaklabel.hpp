#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/types.hpp"

namespace stance::weaklabel {

struct StanceLexicon {
  std::string topic;
  std::unordered_set<std::string> support_tags;
  std::unordered_set<std::string> against_tags;

  // Normalizes tags (lowercase, '#' stripped) and rejects empty or
  // overlapping sets.
  static StanceLexicon make(std::string topic, const std::vector<std::string>& support,
                            const std::vector<std::string>& against);
};

StanceLexicon load_lexicon(const std::string& path);
void save_lexicon(const std::string& path, const StanceLexicon& lexicon);

struct WeakLabeledTweet {
  corpus::Tweet tweet;
  StanceLabel label = StanceLabel::NonOpinionated;
  int score = 0;
  std::optional<std::string> masked_text;
};

// score = |distinct tags in Support set| - |distinct tags in Against set|.
// A lexicon tag counts once per tweet no matter how often it repeats.
std::pair<StanceLabel, int> detect_stance(const corpus::Tweet& tweet,
                                          const StanceLexicon& lexicon);

// Elementwise detect_stance, order preserved. Throws on topic mismatch.
std::vector<WeakLabeledTweet> label_corpus(const std::vector<corpus::Tweet>& tweets,
                                           const StanceLexicon& lexicon);

std::map<StanceLabel, std::size_t> label_distribution(const std::vector<WeakLabeledTweet>& labeled);

// Deletes every hashtag token (with its '#') and collapses the remaining
// whitespace. Idempotent; the result derives no hashtags.
std::string mask_hashtags(const std::string& text);

std::string labeled_to_json_line(const WeakLabeledTweet& item);
void write_labeled(const std::string& path, const std::vector<WeakLabeledTweet>& labeled);
std::vector<WeakLabeledTweet> load_labeled(const std::string& path);

}  // namespace stance::weaklabel
