#ifndef ARDI_TOPIC_HPP
#define ARDI_TOPIC_HPP

#include <string>
#include <string_view>
#include <vector>

#include "ardi/dialogue.hpp"

// Salience-ranked topic candidates. A head lemma gains weight for every
// intervention turn (since its first appearance) that mentions it and loses
// weight for every intervention turn that does not; continuing turns count
// for nothing.

namespace ardi {

struct TopicConfig {
  double frequency_gain = 10.0;   // per intervention turn mentioning the lemma
  double absence_penalty = 1.0;   // per intervention turn omitting it
};

struct TopicCandidate {
  std::string lemma;   // folded head lemma
  double weight = 0.0;
  int first_turn = -1;  // document turn index of the first mention

  bool operator==(const TopicCandidate&) const = default;
};

// Strictly ordered by (weight desc, first_turn asc, lemma asc).
using TopicRanking = std::vector<TopicCandidate>;

// Ranks every head lemma with at least one NP occurrence before `up_to`
// (a document token offset). Empty ranking when nothing precedes it.
TopicRanking rank_topics(const Dialogue& dialogue, int up_to,
                         const TopicConfig& config = {});

// First NP in document order whose folded head lemma matches, with a surface
// position before `before`; null when there is none.
const NounPhrase* first_np_with_lemma(const Dialogue& dialogue,
                                      std::string_view lemma, int before);

}  // namespace ardi

#endif  // ARDI_TOPIC_HPP
