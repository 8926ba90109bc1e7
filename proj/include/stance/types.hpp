#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace stance {

enum class StanceLabel : int { Against = 0, NonOpinionated = 1, Support = 2 };

// Fixed class order used for confusion matrices and argmax tie breaking.
inline constexpr std::array<StanceLabel, 3> kClassOrder = {
    StanceLabel::Against, StanceLabel::NonOpinionated, StanceLabel::Support};
inline constexpr int kNumClasses = 3;

constexpr int class_index(StanceLabel label) { return static_cast<int>(label); }

const char* to_string(StanceLabel label);
StanceLabel stance_from_string(const std::string& s);

// Content-agnostic per-account counters.
struct TwitterStats {
  std::int64_t followers = 0;
  std::int64_t followings = 0;
  std::int64_t tweets_posted = 0;
  std::int64_t listed = 0;
  std::int64_t account_age_days = 0;
  bool protected_account = false;
  bool verified = false;
};

struct RetweetRecord {
  std::string retweeter;
  std::string retweeted;
};

}  // namespace stance
