#include "ardi/topic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ardi {

TopicRanking rank_topics(const Dialogue& dialogue, int up_to,
                         const TopicConfig& config) {
  if (config.frequency_gain <= 0.0 || config.absence_penalty < 0.0)
    throw std::invalid_argument(
        "topic coefficients: frequency gain must be positive, absence "
        "penalty non-negative");
  struct LemmaInfo {
    int first_position = -1;
    int first_turn = -1;
  };
  std::map<std::string, LemmaInfo> lemmas;
  for (const NounPhrase& np : dialogue.nps) {
    if (np.head_position < 0 || np.head_position >= up_to) continue;
    std::string key = fold_lemma(np.head_lemma);
    auto [it, inserted] = lemmas.try_emplace(key);
    if (inserted || np.head_position < it->second.first_position) {
      it->second.first_position = np.head_position;
      it->second.first_turn = dialogue.utterances[np.utterance].turn;
    }
  }

  TopicRanking ranking;
  for (const auto& [lemma, info] : lemmas) {
    double weight = 0.0;
    for (const Turn& turn : dialogue.turns) {
      if (turn.kind == TurnKind::Continuing) continue;
      // Intervention turns from the one holding the first mention up to the
      // one holding `up_to`.
      if (turn.span_begin >= up_to || turn.span_end <= info.first_position)
        continue;
      bool mentioned = false;
      for (const NounPhrase& np : dialogue.nps) {
        if (np.head_position >= turn.span_begin &&
            np.head_position < turn.span_end && np.head_position < up_to &&
            lemma_equal(fold_lemma(np.head_lemma), lemma)) {
          mentioned = true;
          break;
        }
      }
      weight += mentioned ? config.frequency_gain : -config.absence_penalty;
    }
    ranking.push_back({lemma, weight, info.first_turn});
  }

  std::sort(ranking.begin(), ranking.end(),
            [](const TopicCandidate& a, const TopicCandidate& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              if (a.first_turn != b.first_turn) return a.first_turn < b.first_turn;
              return a.lemma < b.lemma;
            });
  return ranking;
}

const NounPhrase* first_np_with_lemma(const Dialogue& dialogue,
                                      std::string_view lemma, int before) {
  const NounPhrase* found = nullptr;
  for (const NounPhrase& np : dialogue.nps) {
    if (np.head_position < 0 || np.head_position >= before) continue;
    if (!lemma_equal(np.head_lemma, lemma)) continue;
    if (!found || np.head_position < found->head_position) found = &np;
  }
  return found;
}

}  // namespace ardi
