#include "taxorl/config.hpp"

namespace taxorl {

std::string mode_name(Mode m) { return m == Mode::RE ? "RE" : "NR"; }

Mode parse_mode(const std::string& s) {
  if (s == "RE" || s == "re") return Mode::RE;
  if (s == "NR" || s == "nr") return Mode::NR;
  throw std::invalid_argument("unknown mode '" + s + "' (expected RE or NR)");
}

std::string restriction_name(Restriction r) {
  switch (r) {
    case Restriction::NONE: return "none";
    case Restriction::PARTIAL: return "partial";
    case Restriction::FULL: return "full";
  }
  return "none";
}

Restriction parse_restriction(const std::string& s) {
  if (s == "none") return Restriction::NONE;
  if (s == "partial") return Restriction::PARTIAL;
  if (s == "full") return Restriction::FULL;
  throw std::invalid_argument("unknown restriction '" + s +
                              "' (expected none, partial or full)");
}

}  // namespace taxorl
