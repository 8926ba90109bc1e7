#include "stance/types.hpp"

#include <stdexcept>

namespace stance {

const char* to_string(StanceLabel label) {
  switch (label) {
    case StanceLabel::Against:
      return "Against";
    case StanceLabel::NonOpinionated:
      return "NonOpinionated";
    case StanceLabel::Support:
      return "Support";
  }
  return "?";
}

StanceLabel stance_from_string(const std::string& s) {
  if (s == "Against" || s == "A") return StanceLabel::Against;
  if (s == "NonOpinionated" || s == "N") return StanceLabel::NonOpinionated;
  if (s == "Support" || s == "S") return StanceLabel::Support;
  throw std::invalid_argument("unknown stance label: " + s);
}

}  // namespace stance
