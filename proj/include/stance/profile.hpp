#pragma once

#include <map>
#include <string>
#include <vector>

#include "stance/types.hpp"
#include "stance/weaklabel.hpp"

namespace stance::profile {

enum class UserCategory { Support, Against, Weak };

const char* to_string(UserCategory category);
UserCategory category_from_string(const std::string& s);

struct ThresholdConfig {
  double upper = 0.55;
  double lower = 0.45;

  void validate() const;
};

struct StanceCounts {
  std::int64_t n_support = 0;
  std::int64_t n_against = 0;
};

struct TopicProfile {
  std::int64_t n_support = 0;
  std::int64_t n_against = 0;
  double support_pct = 0.0;
  UserCategory category = UserCategory::Weak;
};

// One row per (user, topic); provenance says which label stream produced it.
struct ProfileTable {
  std::string provenance;  // "weak" or "classifier"
  // user -> topic -> profile; both keys ordered for deterministic output.
  std::map<std::string, std::map<std::string, TopicProfile>> rows;
};

// NonOpinionated labels are excluded; users with no opinionated tweet on the
// topic are omitted.
std::map<std::string, StanceCounts> aggregate_user_stances(
    const std::vector<std::pair<std::string, StanceLabel>>& user_labels);

std::map<std::string, StanceCounts> aggregate_user_stances(
    const std::vector<weaklabel::WeakLabeledTweet>& labeled, const std::string& topic);

// support_pct >= upper -> Support; <= lower -> Against; else Weak.
UserCategory categorize_user(const StanceCounts& counts, const ThresholdConfig& cfg);

TopicProfile make_topic_profile(const StanceCounts& counts, const ThresholdConfig& cfg);

void add_topic_profiles(ProfileTable& table, const std::string& topic,
                        const std::map<std::string, StanceCounts>& counts,
                        const ThresholdConfig& cfg);

// Users with a non-Weak category on every listed topic, ordered by user_id.
std::vector<std::string> opinionated_user_join(const ProfileTable& table,
                                               const std::vector<std::string>& topics);

void write_profile_table(const std::string& path, const ProfileTable& table);
ProfileTable load_profile_table(const std::string& path);

}  // namespace stance::profile
