#ifndef ARDI_ACCESSIBILITY_HPP
#define ARDI_ACCESSIBILITY_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ardi/dialogue.hpp"

// Candidate-antecedent sets under the three accessibility strategies:
// structural (anaphor's adjacency pair + previous pair + enclosing pairs +
// topic), full (everything before the anaphor), and a window of utterances.

namespace ardi {

enum class SpaceKind : std::uint8_t { Structural, Full, Window };

struct SpaceStrategy {
  SpaceKind kind = SpaceKind::Structural;
  int window = 0;  // utterances before the anaphor's own, Window only

  static SpaceStrategy structural() { return {SpaceKind::Structural, 0}; }
  static SpaceStrategy full() { return {SpaceKind::Full, 0}; }
  static SpaceStrategy window_of(int n) { return {SpaceKind::Window, n}; }

  // "structural" | "full" | "window:N"
  static std::optional<SpaceStrategy> parse(std::string_view text);
  std::string name() const;
  bool operator==(const SpaceStrategy&) const = default;
};

enum class Provenance : std::uint8_t {
  SameAp,
  PreviousAp,
  EnclosingAp,
  Topic,
  Window,
  Full
};

const char* to_string(Provenance p);

struct CandidateEntry {
  int np = -1;  // index into Dialogue::nps
  Provenance provenance = Provenance::Full;
  bool operator==(const CandidateEntry&) const = default;
};

struct CandidateSet {
  std::vector<CandidateEntry> entries;  // document order, no duplicates
  bool degraded = false;  // anaphor outside any adjacency pair

  bool contains(int np) const;
  std::optional<Provenance> provenance_of(int np) const;
  std::size_t size() const { return entries.size(); }
};

// topic may be null; it must point into dialogue.nps when given.
CandidateSet structural_space(const Dialogue& dialogue, const Anaphor& anaphor,
                              const NounPhrase* topic);
CandidateSet full_space(const Dialogue& dialogue, const Anaphor& anaphor,
                        const NounPhrase* topic);
CandidateSet window_space(const Dialogue& dialogue, const Anaphor& anaphor,
                          int window, const NounPhrase* topic);
CandidateSet build_space(const Dialogue& dialogue, const Anaphor& anaphor,
                         SpaceStrategy strategy, const NounPhrase* topic);

}  // namespace ardi

#endif  // ARDI_ACCESSIBILITY_HPP
