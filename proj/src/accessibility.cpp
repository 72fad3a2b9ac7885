#include "ardi/accessibility.hpp"

#include <algorithm>
#include <charconv>

namespace ardi {

std::optional<SpaceStrategy> SpaceStrategy::parse(std::string_view text) {
  if (text == "structural") return structural();
  if (text == "full") return full();
  if (text.rfind("window:", 0) == 0) {
    std::string_view digits = text.substr(7);
    int n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && n >= 0)
      return window_of(n);
  }
  return std::nullopt;
}

std::string SpaceStrategy::name() const {
  switch (kind) {
    case SpaceKind::Structural: return "structural";
    case SpaceKind::Full: return "full";
    case SpaceKind::Window: return "window:" + std::to_string(window);
  }
  return "structural";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::SameAp: return "same_ap";
    case Provenance::PreviousAp: return "previous_ap";
    case Provenance::EnclosingAp: return "enclosing_ap";
    case Provenance::Topic: return "topic";
    case Provenance::Window: return "window";
    case Provenance::Full: return "full";
  }
  return "full";
}

bool CandidateSet::contains(int np) const {
  return provenance_of(np).has_value();
}

std::optional<Provenance> CandidateSet::provenance_of(int np) const {
  for (const CandidateEntry& e : entries)
    if (e.np == np) return e.provenance;
  return std::nullopt;
}

namespace {

// An NP is included in pair `target` when target is its innermost pair or an
// ancestor of it.
bool np_in_pair(const Dialogue& d, const NounPhrase& np, int target) {
  if (!np.pair) return false;
  int current = *np.pair;
  for (;;) {
    if (current == target) return true;
    const AdjacencyPair* node = d.find_pair(current);
    if (!node || !node->parent) return false;
    current = *node->parent;
  }
}

bool precedes(const NounPhrase& np, const Anaphor& anaphor) {
  return np.head_position >= 0 && np.head_position < anaphor.head_position;
}

class SpaceBuilder {
 public:
  explicit SpaceBuilder(const Dialogue& d) : d_(d) {}

  // First insertion wins; callers add classes in priority order.
  void add(int np_index, Provenance provenance) {
    for (const CandidateEntry& e : set_.entries)
      if (e.np == np_index) return;
    set_.entries.push_back({np_index, provenance});
  }

  void add_topic(const NounPhrase* topic) {
    if (!topic) return;
    add(d_.np_index(topic->id), Provenance::Topic);
  }

  CandidateSet finish(bool degraded = false) {
    std::sort(set_.entries.begin(), set_.entries.end(),
              [&](const CandidateEntry& a, const CandidateEntry& b) {
                return d_.nps[a.np].head_position < d_.nps[b.np].head_position;
              });
    set_.degraded = degraded;
    return std::move(set_);
  }

 private:
  const Dialogue& d_;
  CandidateSet set_;
};

}  // namespace

CandidateSet structural_space(const Dialogue& dialogue, const Anaphor& anaphor,
                              const NounPhrase* topic) {
  SpaceBuilder builder(dialogue);
  if (!anaphor.pair) {
    // Turn not wrapped by any adjacency pair: fall back to the anaphor's own
    // turn plus the topic.
    if (anaphor.utterance >= 0) {
      int turn = dialogue.utterances[anaphor.utterance].turn;
      for (std::size_t i = 0; i < dialogue.nps.size(); ++i) {
        const NounPhrase& np = dialogue.nps[i];
        if (np.utterance >= 0 && dialogue.utterances[np.utterance].turn == turn &&
            precedes(np, anaphor))
          builder.add(int(i), Provenance::SameAp);
      }
    }
    builder.add_topic(topic);
    return builder.finish(true);
  }

  const int same = *anaphor.pair;
  for (std::size_t i = 0; i < dialogue.nps.size(); ++i) {
    const NounPhrase& np = dialogue.nps[i];
    if (precedes(np, anaphor) && np_in_pair(dialogue, np, same))
      builder.add(int(i), Provenance::SameAp);
  }
  if (std::optional<int> previous = previous_pair(dialogue, same)) {
    for (std::size_t i = 0; i < dialogue.nps.size(); ++i) {
      const NounPhrase& np = dialogue.nps[i];
      if (precedes(np, anaphor) && np_in_pair(dialogue, np, *previous))
        builder.add(int(i), Provenance::PreviousAp);
    }
  }
  for (int ancestor : enclosing_pairs(dialogue, same)) {
    for (std::size_t i = 0; i < dialogue.nps.size(); ++i) {
      const NounPhrase& np = dialogue.nps[i];
      if (precedes(np, anaphor) && np_in_pair(dialogue, np, ancestor))
        builder.add(int(i), Provenance::EnclosingAp);
    }
  }
  builder.add_topic(topic);
  return builder.finish();
}

CandidateSet full_space(const Dialogue& dialogue, const Anaphor& anaphor,
                        const NounPhrase* topic) {
  SpaceBuilder builder(dialogue);
  for (std::size_t i = 0; i < dialogue.nps.size(); ++i) {
    if (precedes(dialogue.nps[i], anaphor))
      builder.add(int(i), Provenance::Full);
  }
  builder.add_topic(topic);
  return builder.finish();
}

CandidateSet window_space(const Dialogue& dialogue, const Anaphor& anaphor,
                          int window, const NounPhrase* topic) {
  SpaceBuilder builder(dialogue);
  const int last = anaphor.utterance;
  const int first = last - window;
  for (std::size_t i = 0; i < dialogue.nps.size(); ++i) {
    const NounPhrase& np = dialogue.nps[i];
    if (np.utterance >= first && np.utterance <= last && precedes(np, anaphor))
      builder.add(int(i), Provenance::Window);
  }
  builder.add_topic(topic);
  return builder.finish();
}

CandidateSet build_space(const Dialogue& dialogue, const Anaphor& anaphor,
                         SpaceStrategy strategy, const NounPhrase* topic) {
  switch (strategy.kind) {
    case SpaceKind::Structural:
      return structural_space(dialogue, anaphor, topic);
    case SpaceKind::Full:
      return full_space(dialogue, anaphor, topic);
    case SpaceKind::Window:
      return window_space(dialogue, anaphor, strategy.window, topic);
  }
  return structural_space(dialogue, anaphor, topic);
}

}  // namespace ardi
