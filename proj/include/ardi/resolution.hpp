#ifndef ARDI_RESOLUTION_HPP
#define ARDI_RESOLUTION_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ardi/accessibility.hpp"
#include "ardi/dialogue.hpp"
#include "ardi/topic.hpp"

// Constraint filtering followed by preference selection, under ordered or
// weighted management. Candidates that fail morphological agreement (or, for
// adjectival anaphors, gender agreement and the common-noun requirement) are
// discarded; the survivors compete on soft preferences.

namespace ardi {

enum class PreferenceId : std::uint8_t {
  // pronominal
  PronSameAp,
  PronPreviousAp,
  PronEnclosingAp,
  PronTopic,
  PronProperOrIndefinite,   // baseline set only
  PronProper,               // baseline set only, personal pronouns
  PronRepeated,             // baseline set only
  PronVerbCooccurrence,     // appears with the anaphor's verb more than once
  PronVerbPosition,         // same position with reference to the verb
  PronUtterancePosition,    // same position with reference to the utterance
  PronMostRepeated,         // maximization, baseline set only
  PronMostVerbCooccurrences,  // maximization, baseline set only
  // adjectival
  AdjSameAp,
  AdjPreviousAp,
  AdjEnclosingAp,
  AdjTopic,
  AdjModifierKind,   // shares a modifier kind
  AdjExactModifier,  // shares a modifier (kind and lemma)
  AdjNumberAgreement,
  AdjMostRepeated,          // maximization, baseline set only
  AdjMostVerbCooccurrences  // maximization, baseline set only
};

bool is_maximization(PreferenceId id);
const char* preference_code(PreferenceId id);  // e.g. "pron.same_ap"
std::optional<PreferenceId> preference_from_code(std::string_view code);

enum class Management : std::uint8_t { Ordered, Weighted };
enum class TopicSource : std::uint8_t { Gold, Auto };

struct ResolutionConfig {
  Management management = Management::Weighted;
  SpaceStrategy space = SpaceStrategy::structural();
  TopicSource topic_source = TopicSource::Gold;
  TopicConfig topic_config;
  std::vector<PreferenceId> pronominal_preferences;
  std::vector<PreferenceId> adjectival_preferences;
  std::map<PreferenceId, double> weights;

  // Final preference sets with the published default weights.
  static ResolutionConfig defaults();
  // The initial linguistic-only preference sets, kept as configurable
  // alternates; repetition and proper-noun preferences become active.
  static ResolutionConfig baseline();

  const std::vector<PreferenceId>& preferences_for(AnaphorKind kind) const;
  double weight(PreferenceId id) const;
};

std::map<PreferenceId, double> default_weights();

// Published weight totals; weighted scores can never exceed them.
double pronominal_weight_bound(const ResolutionConfig& config);
double adjectival_weight_bound(const ResolutionConfig& config);

// Non-co-reference condition for pronouns: same utterance and clause, and
// either the pronoun modifies no NP head or pronoun and candidate modify the
// head of the same NP.
bool non_coreferent(const Dialogue& dialogue, const Anaphor& anaphor,
                    const NounPhrase& np);

// Survivor indices into dialogue.nps, candidate order preserved.
std::vector<int> filter_constraints(const Dialogue& dialogue,
                                    const Anaphor& anaphor,
                                    const CandidateSet& candidates);

// Predicate preferences only; maximization preferences are a contract error
// (std::invalid_argument).
bool preference_holds(PreferenceId id, const Dialogue& dialogue,
                      const Anaphor& anaphor, const NounPhrase& np,
                      Provenance provenance);

// Count behind the maximization preferences: prior mentions of the head
// lemma, or utterances before the anaphor's where the candidate lemma and the
// anaphor's verb co-occur.
int repetition_count(const Dialogue& dialogue, const Anaphor& anaphor,
                     const NounPhrase& np);
int verb_cooccurrence_count(const Dialogue& dialogue, const Anaphor& anaphor,
                            const NounPhrase& np);

struct CandidateAudit {
  std::string np_id;
  Provenance provenance = Provenance::Full;
  bool passed_constraints = false;
  std::vector<PreferenceId> satisfied;  // predicate preferences that hold
  double score = 0.0;                   // weighted management only
  int eliminated_at = -1;  // ordered: preference step that dropped it

  bool operator==(const CandidateAudit&) const = default;
};

struct ResolutionAudit {
  std::vector<CandidateAudit> candidates;  // whole space, document order
  bool tie_break_applied = false;
  bool degraded_space = false;
  std::optional<std::string> topic_np;

  bool operator==(const ResolutionAudit&) const = default;
};

struct Selection {
  int np = -1;
  double score = 0.0;
  bool tie_break_applied = false;
};

// `survivors` must be non-empty.
Selection select_weighted(const Dialogue& dialogue, const Anaphor& anaphor,
                          const std::vector<int>& survivors,
                          const CandidateSet& space,
                          const ResolutionConfig& config,
                          ResolutionAudit* audit = nullptr);
Selection select_ordered(const Dialogue& dialogue, const Anaphor& anaphor,
                         const std::vector<int>& survivors,
                         const CandidateSet& space,
                         const ResolutionConfig& config,
                         ResolutionAudit* audit = nullptr);

enum class Outcome : std::uint8_t { Resolved, Unresolved };

struct ResolutionResult {
  std::string anaphor_id;
  Outcome outcome = Outcome::Unresolved;
  std::string antecedent;  // NP id when resolved
  std::string reason;      // why unresolved
  double score = 0.0;
  ResolutionAudit audit;

  bool resolved() const { return outcome == Outcome::Resolved; }
  bool operator==(const ResolutionResult&) const = default;
};

ResolutionResult resolve(const Dialogue& dialogue, const Anaphor& anaphor,
                         const ResolutionConfig& config);
// Throws std::out_of_range for an unknown anaphor id.
ResolutionResult resolve(const Dialogue& dialogue, std::string_view anaphor_id,
                         const ResolutionConfig& config);

// Topic entry the resolver will use: the gold annotation, or the best-ranked
// automatic candidate that survives the anaphor's constraints.
const NounPhrase* topic_for(const Dialogue& dialogue, const Anaphor& anaphor,
                            const ResolutionConfig& config);

}  // namespace ardi

#endif  // ARDI_RESOLUTION_HPP
