#include "stance/profile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stance::profile {

const char* to_string(UserCategory category) {
  switch (category) {
    case UserCategory::Support:
      return "Support";
    case UserCategory::Against:
      return "Against";
    case UserCategory::Weak:
      return "Weak";
  }
  return "?";
}

UserCategory category_from_string(const std::string& s) {
  if (s == "Support") return UserCategory::Support;
  if (s == "Against") return UserCategory::Against;
  if (s == "Weak") return UserCategory::Weak;
  throw std::invalid_argument("unknown user category: " + s);
}

void ThresholdConfig::validate() const {
  if (!(0.0 <= lower && lower < upper && upper <= 1.0))
    throw std::invalid_argument("thresholds must satisfy 0 <= lower < upper <= 1");
}

std::map<std::string, StanceCounts> aggregate_user_stances(
    const std::vector<std::pair<std::string, StanceLabel>>& user_labels) {
  std::map<std::string, StanceCounts> counts;
  for (const auto& [user, label] : user_labels) {
    if (label == StanceLabel::NonOpinionated) continue;
    auto& c = counts[user];
    if (label == StanceLabel::Support)
      ++c.n_support;
    else
      ++c.n_against;
  }
  return counts;
}

std::map<std::string, StanceCounts> aggregate_user_stances(
    const std::vector<weaklabel::WeakLabeledTweet>& labeled, const std::string& topic) {
  std::map<std::string, StanceCounts> counts;
  for (const auto& item : labeled) {
    if (item.tweet.topic != topic) continue;
    if (item.label == StanceLabel::NonOpinionated) continue;
    auto& c = counts[item.tweet.user_id];
    if (item.label == StanceLabel::Support)
      ++c.n_support;
    else
      ++c.n_against;
  }
  return counts;
}

UserCategory categorize_user(const StanceCounts& counts, const ThresholdConfig& cfg) {
  cfg.validate();
  const std::int64_t total = counts.n_support + counts.n_against;
  if (total <= 0) throw std::invalid_argument("categorize_user: no opinionated tweets");
  const double pct = static_cast<double>(counts.n_support) / static_cast<double>(total);
  if (pct >= cfg.upper) return UserCategory::Support;
  if (pct <= cfg.lower) return UserCategory::Against;
  return UserCategory::Weak;
}

TopicProfile make_topic_profile(const StanceCounts& counts, const ThresholdConfig& cfg) {
  TopicProfile p;
  p.n_support = counts.n_support;
  p.n_against = counts.n_against;
  p.support_pct = static_cast<double>(counts.n_support) /
                  static_cast<double>(counts.n_support + counts.n_against);
  p.category = categorize_user(counts, cfg);
  return p;
}

void add_topic_profiles(ProfileTable& table, const std::string& topic,
                        const std::map<std::string, StanceCounts>& counts,
                        const ThresholdConfig& cfg) {
  for (const auto& [user, c] : counts) table.rows[user][topic] = make_topic_profile(c, cfg);
}

std::vector<std::string> opinionated_user_join(const ProfileTable& table,
                                               const std::vector<std::string>& topics) {
  if (topics.size() < 2) throw std::invalid_argument("opinionated_user_join: need >= 2 topics");
  std::vector<std::string> joined;
  for (const auto& [user, per_topic] : table.rows) {
    bool ok = true;
    for (const auto& topic : topics) {
      auto it = per_topic.find(topic);
      if (it == per_topic.end() || it->second.category == UserCategory::Weak) {
        ok = false;
        break;
      }
    }
    if (ok) joined.push_back(user);
  }
  return joined;  // std::map iteration is already user_id order
}

void write_profile_table(const std::string& path, const ProfileTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write profile table: " + path);
  out << "# provenance=" << table.provenance << '\n';
  out << "user_id\ttopic\tn_support\tn_against\tsupport_pct\tcategory\n";
  char buf[32];
  for (const auto& [user, per_topic] : table.rows) {
    for (const auto& [topic, p] : per_topic) {
      std::snprintf(buf, sizeof(buf), "%.6f", p.support_pct);
      out << user << '\t' << topic << '\t' << p.n_support << '\t' << p.n_against << '\t' << buf
          << '\t' << to_string(p.category) << '\n';
    }
  }
}

ProfileTable load_profile_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile table: " + path);
  ProfileTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find("provenance=");
      if (eq != std::string::npos) table.provenance = line.substr(eq + 11);
      continue;
    }
    if (line.rfind("user_id\t", 0) == 0) continue;
    std::istringstream ss(line);
    std::string user, topic, category;
    TopicProfile p;
    if (!(ss >> user >> topic >> p.n_support >> p.n_against >> p.support_pct >> category))
      throw std::runtime_error("bad profile row: " + line);
    p.category = category_from_string(category);
    table.rows[user][topic] = p;
  }
  return table;
}

}  // namespace stance::profile
