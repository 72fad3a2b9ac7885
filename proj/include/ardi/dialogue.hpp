#ifndef ARDI_DIALOGUE_HPP
#define ARDI_DIALOGUE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// In-memory model of a structurally annotated dialogue: turns, nested
// adjacency pairs, utterances, clauses, noun phrases and anaphors, plus the
// structural queries the resolver needs. Dialogues are immutable once built
// (by the corpus parser); every query here is const and thread-safe.

namespace ardi {

enum class Gender : std::uint8_t { Masculine, Feminine, Unknown };
enum class NumberValue : std::uint8_t { Singular, Plural, Unknown };
enum class PersonValue : std::uint8_t { First, Second, Third, Unknown };
enum class Category : std::uint8_t { Common, Proper, Other };
enum class Definiteness : std::uint8_t { Definite, Indefinite, Unknown };
enum class VerbPosition : std::uint8_t { Before, After, NoVerb };
enum class UtterancePosition : std::uint8_t { Initial, Medial, Final };
enum class ModifierKind : std::uint8_t { PrepPhrase, Adjective, Other };
enum class TurnKind : std::uint8_t { Initiative, Reaction, Continuing };
enum class AnaphorKind : std::uint8_t {
  PersonalPronoun,
  DemonstrativePronoun,
  Adjectival
};

struct Modifier {
  ModifierKind kind = ModifierKind::Other;
  std::string lemma;
  bool operator==(const Modifier&) const = default;
};

struct NounPhrase {
  std::string id;
  std::string head_lemma;
  int span_begin = -1;  // document token offsets, [begin, end)
  int span_end = -1;
  int head_position = -1;  // document token offset of the head; -1 = synthetic
  Gender gender = Gender::Unknown;
  NumberValue number = NumberValue::Unknown;
  PersonValue person = PersonValue::Unknown;
  Category category = Category::Common;
  Definiteness definiteness = Definiteness::Unknown;
  std::vector<Modifier> modifiers;
  std::optional<std::string> verb_lemma;  // first verb chunk of the clause
  VerbPosition verb_position = VerbPosition::NoVerb;
  int utterance = -1;  // indices into Dialogue vectors; -1 = synthetic topic
  int clause = -1;
  std::optional<int> pair;  // innermost adjacency pair id
  UtterancePosition utterance_position = UtterancePosition::Final;
  std::optional<std::string> modifies_np;  // NP whose head this NP modifies
  bool synthetic_topic = false;  // declared in TOPIC, no surface position

  bool operator==(const NounPhrase&) const = default;
};

struct Anaphor {
  std::string id;
  AnaphorKind kind = AnaphorKind::PersonalPronoun;
  int span_begin = -1;
  int span_end = -1;
  int head_position = -1;
  Gender gender = Gender::Unknown;
  NumberValue number = NumberValue::Unknown;
  PersonValue person = PersonValue::Unknown;
  std::vector<Modifier> modifiers;  // adjectival anaphors only
  std::optional<std::string> verb_lemma;
  VerbPosition verb_position = VerbPosition::NoVerb;
  int utterance = -1;
  int clause = -1;
  std::optional<int> pair;
  UtterancePosition utterance_position = UtterancePosition::Final;
  std::optional<std::string> modifies_np;
  std::optional<std::string> gold_antecedent;

  bool pronominal() const { return kind != AnaphorKind::Adjectival; }
  bool operator==(const Anaphor&) const = default;
};

struct VerbChunk {
  std::string lemma;
  int span_begin = -1;
  int span_end = -1;
  int clause = -1;
  bool operator==(const VerbChunk&) const = default;
};

struct Clause {
  std::string id;
  int span_begin = -1;
  int span_end = -1;
  int utterance = -1;
  bool operator==(const Clause&) const = default;
};

struct Utterance {
  std::string id;
  int span_begin = -1;
  int span_end = -1;
  int turn = -1;
  std::vector<int> clauses;
  bool operator==(const Utterance&) const = default;
};

struct Turn {
  TurnKind kind = TurnKind::Continuing;
  std::string speaker;
  int span_begin = -1;
  int span_end = -1;
  std::optional<int> pair;  // innermost enclosing adjacency pair, if any
  std::vector<int> utterances;
  bool operator==(const Turn&) const = default;
};

// Child of an adjacency pair or of the dialogue itself, in document order.
struct StructureChild {
  bool is_pair = false;
  int value = -1;  // pair id when is_pair, else turn index
  bool operator==(const StructureChild&) const = default;
};

struct AdjacencyPair {
  int id = -1;
  int open_position = -1;   // document token offset where the pair opens
  int close_position = -1;  // exclusive end offset
  std::optional<int> parent;
  std::vector<StructureChild> children;
  bool operator==(const AdjacencyPair&) const = default;
};

class Dialogue {
 public:
  std::string id;
  std::optional<std::string> topic;  // NP id of the gold topic entry
  std::vector<std::string> tokens;
  std::vector<Turn> turns;
  std::vector<Utterance> utterances;
  std::vector<Clause> clauses;
  std::vector<VerbChunk> verbs;
  std::vector<NounPhrase> nps;  // document order, synthetic topic first
  std::vector<Anaphor> anaphors;
  std::vector<AdjacencyPair> pairs;  // ascending id = document opening order
  std::vector<StructureChild> top_level;

  // Rebuilds the id lookup tables; the parser calls this once.
  void reindex();

  const NounPhrase* find_np(std::string_view np_id) const;
  const Anaphor* find_anaphor(std::string_view anaphor_id) const;
  const AdjacencyPair* find_pair(int pair_id) const;
  int np_index(std::string_view np_id) const;  // -1 when absent

  bool operator==(const Dialogue& other) const;

 private:
  std::unordered_map<std::string, int> np_lookup_;
  std::unordered_map<std::string, int> anaphor_lookup_;
  std::unordered_map<int, int> pair_lookup_;
};

// Greatest-id adjacency pair whose whole span closes before the given pair
// opens; ancestors never qualify. Throws std::out_of_range on unknown ids.
std::optional<int> previous_pair(const Dialogue& dialogue, int pair_id);

// Ancestor pairs of the given pair, innermost first.
std::vector<int> enclosing_pairs(const Dialogue& dialogue, int pair_id);

// Tokens strictly between the NP head and the anaphor head. A topic NP with
// no surface position before the anaphor is always the farthest candidate:
// distance = tokens before the anaphor + 1. Throws std::invalid_argument when
// a non-topic NP does not precede the anaphor.
int token_distance(const Dialogue& dialogue, const Anaphor& anaphor,
                   const NounPhrase& np, bool np_is_topic);

// Initial/Medial/Final by head offset: the utterance splits into three
// equal-length thirds, remainder tokens in the final third.
UtterancePosition classify_utterance_position(int head_offset,
                                              int utterance_length);

// ASCII-lowercase fold used for all lemma identity in the engine.
std::string fold_lemma(std::string_view lemma);
bool lemma_equal(std::string_view a, std::string_view b);

const char* to_string(Gender g);
const char* to_string(NumberValue n);
const char* to_string(PersonValue p);
const char* to_string(Category c);
const char* to_string(Definiteness d);
const char* to_string(ModifierKind k);
const char* to_string(TurnKind k);
const char* to_string(AnaphorKind k);

}  // namespace ardi

#endif  // ARDI_DIALOGUE_HPP
