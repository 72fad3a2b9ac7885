#include "ardi/dialogue.hpp"

#include <algorithm>
#include <stdexcept>

namespace ardi {

void Dialogue::reindex() {
  np_lookup_.clear();
  anaphor_lookup_.clear();
  pair_lookup_.clear();
  for (std::size_t i = 0; i < nps.size(); ++i) np_lookup_[nps[i].id] = int(i);
  for (std::size_t i = 0; i < anaphors.size(); ++i)
    anaphor_lookup_[anaphors[i].id] = int(i);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    pair_lookup_[pairs[i].id] = int(i);
}

const NounPhrase* Dialogue::find_np(std::string_view np_id) const {
  auto it = np_lookup_.find(std::string(np_id));
  return it == np_lookup_.end() ? nullptr : &nps[it->second];
}

const Anaphor* Dialogue::find_anaphor(std::string_view anaphor_id) const {
  auto it = anaphor_lookup_.find(std::string(anaphor_id));
  return it == anaphor_lookup_.end() ? nullptr : &anaphors[it->second];
}

const AdjacencyPair* Dialogue::find_pair(int pair_id) const {
  auto it = pair_lookup_.find(pair_id);
  return it == pair_lookup_.end() ? nullptr : &pairs[it->second];
}

int Dialogue::np_index(std::string_view np_id) const {
  auto it = np_lookup_.find(std::string(np_id));
  return it == np_lookup_.end() ? -1 : it->second;
}

bool Dialogue::operator==(const Dialogue& other) const {
  return id == other.id && topic == other.topic && tokens == other.tokens &&
         turns == other.turns && utterances == other.utterances &&
         clauses == other.clauses && verbs == other.verbs &&
         nps == other.nps && anaphors == other.anaphors &&
         pairs == other.pairs && top_level == other.top_level;
}

std::optional<int> previous_pair(const Dialogue& dialogue, int pair_id) {
  const AdjacencyPair* target = dialogue.find_pair(pair_id);
  if (!target) throw std::out_of_range("unknown adjacency pair id");
  std::optional<int> best;
  for (const AdjacencyPair& ap : dialogue.pairs) {
    if (ap.id != pair_id && ap.close_position <= target->open_position &&
        (!best || ap.id > *best)) {
      best = ap.id;
    }
  }
  return best;
}

std::vector<int> enclosing_pairs(const Dialogue& dialogue, int pair_id) {
  const AdjacencyPair* node = dialogue.find_pair(pair_id);
  if (!node) throw std::out_of_range("unknown adjacency pair id");
  std::vector<int> ancestors;
  while (node->parent) {
    ancestors.push_back(*node->parent);
    node = dialogue.find_pair(*node->parent);
  }
  return ancestors;
}

int token_distance(const Dialogue& dialogue, const Anaphor& anaphor,
                   const NounPhrase& np, bool np_is_topic) {
  (void)dialogue;
  if (np.head_position >= 0 && np.head_position < anaphor.head_position)
    return anaphor.head_position - np.head_position - 1;
  if (!np_is_topic)
    throw std::invalid_argument("noun phrase does not precede the anaphor");
  return anaphor.head_position + 1;  // farther than any surface candidate
}

UtterancePosition classify_utterance_position(int head_offset,
                                              int utterance_length) {
  const int third = utterance_length / 3;
  if (head_offset < third) return UtterancePosition::Initial;
  if (head_offset < 2 * third) return UtterancePosition::Medial;
  return UtterancePosition::Final;
}

std::string fold_lemma(std::string_view lemma) {
  std::string out(lemma);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
  }
  return out;
}

bool lemma_equal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = char(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = char(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

const char* to_string(Gender g) {
  switch (g) {
    case Gender::Masculine: return "M";
    case Gender::Feminine: return "F";
    default: return "U";
  }
}

const char* to_string(NumberValue n) {
  switch (n) {
    case NumberValue::Singular: return "S";
    case NumberValue::Plural: return "P";
    default: return "U";
  }
}

const char* to_string(PersonValue p) {
  switch (p) {
    case PersonValue::First: return "1";
    case PersonValue::Second: return "2";
    case PersonValue::Third: return "3";
    default: return "U";
  }
}

const char* to_string(Category c) {
  switch (c) {
    case Category::Common: return "C";
    case Category::Proper: return "P";
    default: return "O";
  }
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::Definite: return "D";
    case Definiteness::Indefinite: return "I";
    default: return "U";
  }
}

const char* to_string(ModifierKind k) {
  switch (k) {
    case ModifierKind::PrepPhrase: return "PP";
    case ModifierKind::Adjective: return "ADJ";
    default: return "OTH";
  }
}

const char* to_string(TurnKind k) {
  switch (k) {
    case TurnKind::Initiative: return "IT_I";
    case TurnKind::Reaction: return "IT_R";
    default: return "CT";
  }
}

const char* to_string(AnaphorKind k) {
  switch (k) {
    case AnaphorKind::PersonalPronoun: return "PRON";
    case AnaphorKind::DemonstrativePronoun: return "DEM";
    default: return "ADJ";
  }
}

}  // namespace ardi
