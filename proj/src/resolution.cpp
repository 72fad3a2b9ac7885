#include "ardi/resolution.hpp"

#include <algorithm>
#include <stdexcept>

namespace ardi {

namespace {

bool gender_match(Gender a, Gender b) {
  return a == Gender::Unknown || b == Gender::Unknown || a == b;
}

bool number_match(NumberValue a, NumberValue b) {
  return a == NumberValue::Unknown || b == NumberValue::Unknown || a == b;
}

bool person_match(PersonValue a, PersonValue b) {
  return a == PersonValue::Unknown || b == PersonValue::Unknown || a == b;
}

bool passes_constraints(const Dialogue& dialogue, const Anaphor& anaphor,
                        const NounPhrase& np) {
  if (anaphor.kind == AnaphorKind::Adjectival) {
    return gender_match(anaphor.gender, np.gender) &&
           np.category == Category::Common;
  }
  return gender_match(anaphor.gender, np.gender) &&
         number_match(anaphor.number, np.number) &&
         person_match(anaphor.person, np.person) &&
         !non_coreferent(dialogue, anaphor, np);
}

}  // namespace

bool is_maximization(PreferenceId id) {
  switch (id) {
    case PreferenceId::PronMostRepeated:
    case PreferenceId::PronMostVerbCooccurrences:
    case PreferenceId::AdjMostRepeated:
    case PreferenceId::AdjMostVerbCooccurrences:
      return true;
    default:
      return false;
  }
}

const char* preference_code(PreferenceId id) {
  switch (id) {
    case PreferenceId::PronSameAp: return "pron.same_ap";
    case PreferenceId::PronPreviousAp: return "pron.previous_ap";
    case PreferenceId::PronEnclosingAp: return "pron.enclosing_ap";
    case PreferenceId::PronTopic: return "pron.topic";
    case PreferenceId::PronProperOrIndefinite: return "pron.proper_or_indefinite";
    case PreferenceId::PronProper: return "pron.proper";
    case PreferenceId::PronRepeated: return "pron.repeated";
    case PreferenceId::PronVerbCooccurrence: return "pron.verb_cooccurrence";
    case PreferenceId::PronVerbPosition: return "pron.verb_position";
    case PreferenceId::PronUtterancePosition: return "pron.utterance_position";
    case PreferenceId::PronMostRepeated: return "pron.most_repeated";
    case PreferenceId::PronMostVerbCooccurrences:
      return "pron.most_verb_cooccurrences";
    case PreferenceId::AdjSameAp: return "adj.same_ap";
    case PreferenceId::AdjPreviousAp: return "adj.previous_ap";
    case PreferenceId::AdjEnclosingAp: return "adj.enclosing_ap";
    case PreferenceId::AdjTopic: return "adj.topic";
    case PreferenceId::AdjModifierKind: return "adj.modifier_kind";
    case PreferenceId::AdjExactModifier: return "adj.exact_modifier";
    case PreferenceId::AdjNumberAgreement: return "adj.number_agreement";
    case PreferenceId::AdjMostRepeated: return "adj.most_repeated";
    case PreferenceId::AdjMostVerbCooccurrences:
      return "adj.most_verb_cooccurrences";
  }
  return "";
}

std::optional<PreferenceId> preference_from_code(std::string_view code) {
  static const PreferenceId all[] = {
      PreferenceId::PronSameAp, PreferenceId::PronPreviousAp,
      PreferenceId::PronEnclosingAp, PreferenceId::PronTopic,
      PreferenceId::PronProperOrIndefinite, PreferenceId::PronProper,
      PreferenceId::PronRepeated, PreferenceId::PronVerbCooccurrence,
      PreferenceId::PronVerbPosition, PreferenceId::PronUtterancePosition,
      PreferenceId::PronMostRepeated, PreferenceId::PronMostVerbCooccurrences,
      PreferenceId::AdjSameAp, PreferenceId::AdjPreviousAp,
      PreferenceId::AdjEnclosingAp, PreferenceId::AdjTopic,
      PreferenceId::AdjModifierKind, PreferenceId::AdjExactModifier,
      PreferenceId::AdjNumberAgreement, PreferenceId::AdjMostRepeated,
      PreferenceId::AdjMostVerbCooccurrences};
  for (PreferenceId id : all)
    if (code == preference_code(id)) return id;
  return std::nullopt;
}

std::map<PreferenceId, double> default_weights() {
  return {
      {PreferenceId::PronSameAp, 35},
      {PreferenceId::PronPreviousAp, 20},
      {PreferenceId::PronEnclosingAp, 30},
      {PreferenceId::PronTopic, 15},
      {PreferenceId::PronProperOrIndefinite, 5},
      {PreferenceId::PronProper, 5},
      {PreferenceId::PronRepeated, 5},
      {PreferenceId::PronVerbCooccurrence, 5},
      {PreferenceId::PronVerbPosition, 5},
      {PreferenceId::PronUtterancePosition, 5},
      {PreferenceId::PronMostRepeated, 0},
      {PreferenceId::PronMostVerbCooccurrences, 0},
      {PreferenceId::AdjSameAp, 35},
      {PreferenceId::AdjPreviousAp, 10},
      {PreferenceId::AdjEnclosingAp, 10},
      {PreferenceId::AdjTopic, 35},
      {PreferenceId::AdjModifierKind, 5},
      {PreferenceId::AdjExactModifier, 5},
      {PreferenceId::AdjNumberAgreement, 5},
      {PreferenceId::AdjMostRepeated, 0},
      {PreferenceId::AdjMostVerbCooccurrences, 0},
  };
}

ResolutionConfig ResolutionConfig::defaults() {
  ResolutionConfig config;
  config.pronominal_preferences = {
      PreferenceId::PronSameAp,          PreferenceId::PronPreviousAp,
      PreferenceId::PronEnclosingAp,     PreferenceId::PronTopic,
      PreferenceId::PronVerbCooccurrence, PreferenceId::PronVerbPosition,
      PreferenceId::PronUtterancePosition};
  config.adjectival_preferences = {
      PreferenceId::AdjSameAp,       PreferenceId::AdjPreviousAp,
      PreferenceId::AdjEnclosingAp,  PreferenceId::AdjTopic,
      PreferenceId::AdjModifierKind, PreferenceId::AdjExactModifier,
      PreferenceId::AdjNumberAgreement};
  config.weights = default_weights();
  return config;
}

ResolutionConfig ResolutionConfig::baseline() {
  ResolutionConfig config = defaults();
  config.pronominal_preferences = {
      PreferenceId::PronSameAp,
      PreferenceId::PronPreviousAp,
      PreferenceId::PronProperOrIndefinite,
      PreferenceId::PronProper,
      PreferenceId::PronRepeated,
      PreferenceId::PronVerbCooccurrence,
      PreferenceId::PronVerbPosition,
      PreferenceId::PronUtterancePosition,
      PreferenceId::PronMostRepeated,
      PreferenceId::PronMostVerbCooccurrences};
  config.adjectival_preferences = {
      PreferenceId::AdjSameAp,
      PreferenceId::AdjPreviousAp,
      PreferenceId::AdjModifierKind,
      PreferenceId::AdjExactModifier,
      PreferenceId::AdjNumberAgreement,
      PreferenceId::AdjMostRepeated,
      PreferenceId::AdjMostVerbCooccurrences};
  return config;
}

const std::vector<PreferenceId>& ResolutionConfig::preferences_for(
    AnaphorKind kind) const {
  return kind == AnaphorKind::Adjectival ? adjectival_preferences
                                         : pronominal_preferences;
}

double ResolutionConfig::weight(PreferenceId id) const {
  auto it = weights.find(id);
  return it == weights.end() ? 0.0 : it->second;
}

double pronominal_weight_bound(const ResolutionConfig& config) {
  double total = 0.0;
  for (PreferenceId id : config.pronominal_preferences)
    if (!is_maximization(id)) total += config.weight(id);
  return total;
}

double adjectival_weight_bound(const ResolutionConfig& config) {
  double total = 0.0;
  for (PreferenceId id : config.adjectival_preferences)
    if (!is_maximization(id)) total += config.weight(id);
  return total;
}

bool non_coreferent(const Dialogue& dialogue, const Anaphor& anaphor,
                    const NounPhrase& np) {
  (void)dialogue;
  if (np.utterance < 0) return false;  // synthetic topic entry
  if (anaphor.utterance != np.utterance || anaphor.clause != np.clause)
    return false;
  if (!anaphor.modifies_np) return true;
  return np.modifies_np && *anaphor.modifies_np == *np.modifies_np;
}

std::vector<int> filter_constraints(const Dialogue& dialogue,
                                    const Anaphor& anaphor,
                                    const CandidateSet& candidates) {
  std::vector<int> survivors;
  for (const CandidateEntry& entry : candidates.entries) {
    if (passes_constraints(dialogue, anaphor, dialogue.nps[entry.np]))
      survivors.push_back(entry.np);
  }
  return survivors;
}

int repetition_count(const Dialogue& dialogue, const Anaphor& anaphor,
                     const NounPhrase& np) {
  int count = 0;
  for (const NounPhrase& other : dialogue.nps) {
    if (other.head_position >= 0 &&
        other.head_position < anaphor.head_position &&
        lemma_equal(other.head_lemma, np.head_lemma))
      ++count;
  }
  return count;
}

int verb_cooccurrence_count(const Dialogue& dialogue, const Anaphor& anaphor,
                            const NounPhrase& np) {
  if (!anaphor.verb_lemma || anaphor.utterance < 0) return 0;
  int count = 0;
  for (std::size_t u = 0; u < dialogue.utterances.size(); ++u) {
    if (int(u) >= anaphor.utterance) break;  // strictly earlier utterances
    bool lemma_here = false;
    for (const NounPhrase& other : dialogue.nps) {
      if (other.utterance == int(u) &&
          lemma_equal(other.head_lemma, np.head_lemma)) {
        lemma_here = true;
        break;
      }
    }
    if (!lemma_here) continue;
    for (const VerbChunk& vb : dialogue.verbs) {
      if (dialogue.clauses[vb.clause].utterance == int(u) &&
          lemma_equal(vb.lemma, *anaphor.verb_lemma)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

bool preference_holds(PreferenceId id, const Dialogue& dialogue,
                      const Anaphor& anaphor, const NounPhrase& np,
                      Provenance provenance) {
  if (is_maximization(id))
    throw std::invalid_argument(
        "preference_holds called with a maximization preference");
  switch (id) {
    case PreferenceId::PronSameAp:
    case PreferenceId::AdjSameAp:
      return provenance == Provenance::SameAp;
    case PreferenceId::PronPreviousAp:
    case PreferenceId::AdjPreviousAp:
      return provenance == Provenance::PreviousAp;
    case PreferenceId::PronEnclosingAp:
    case PreferenceId::AdjEnclosingAp:
      return provenance == Provenance::EnclosingAp;
    case PreferenceId::PronTopic:
    case PreferenceId::AdjTopic:
      return provenance == Provenance::Topic;
    case PreferenceId::PronProperOrIndefinite:
      return np.category == Category::Proper ||
             np.definiteness == Definiteness::Indefinite;
    case PreferenceId::PronProper:
      return anaphor.kind == AnaphorKind::PersonalPronoun &&
             np.category == Category::Proper;
    case PreferenceId::PronRepeated:
      return repetition_count(dialogue, anaphor, np) >= 2;
    case PreferenceId::PronVerbCooccurrence:
      return verb_cooccurrence_count(dialogue, anaphor, np) >= 2;
    case PreferenceId::PronVerbPosition:
      return anaphor.verb_position != VerbPosition::NoVerb &&
             np.verb_position != VerbPosition::NoVerb &&
             anaphor.verb_position == np.verb_position;
    case PreferenceId::PronUtterancePosition:
      return np.utterance >= 0 &&
             anaphor.utterance_position == np.utterance_position;
    case PreferenceId::AdjModifierKind:
      for (const Modifier& mine : anaphor.modifiers)
        for (const Modifier& theirs : np.modifiers)
          if (mine.kind == theirs.kind) return true;
      return false;
    case PreferenceId::AdjExactModifier:
      for (const Modifier& mine : anaphor.modifiers)
        for (const Modifier& theirs : np.modifiers)
          if (mine.kind == theirs.kind && lemma_equal(mine.lemma, theirs.lemma))
            return true;
      return false;
    case PreferenceId::AdjNumberAgreement:
      return number_match(anaphor.number, np.number);
    default:
      return false;
  }
}

namespace {

int maximization_count(PreferenceId id, const Dialogue& dialogue,
                       const Anaphor& anaphor, const NounPhrase& np) {
  switch (id) {
    case PreferenceId::PronMostRepeated:
    case PreferenceId::AdjMostRepeated:
      return repetition_count(dialogue, anaphor, np);
    case PreferenceId::PronMostVerbCooccurrences:
    case PreferenceId::AdjMostVerbCooccurrences:
      return verb_cooccurrence_count(dialogue, anaphor, np);
    default:
      return 0;
  }
}

CandidateAudit* audit_entry(ResolutionAudit* audit, const std::string& np_id) {
  if (!audit) return nullptr;
  for (CandidateAudit& c : audit->candidates)
    if (c.np_id == np_id) return &c;
  return nullptr;
}

bool candidate_is_topic(const CandidateSet& space, int np_index) {
  return space.provenance_of(np_index) == Provenance::Topic;
}

// Nearest first, then latest document position.
int break_tie(const Dialogue& dialogue, const Anaphor& anaphor,
              const std::vector<int>& leaders, const CandidateSet& space) {
  int best = leaders.front();
  int best_distance = token_distance(dialogue, anaphor, dialogue.nps[best],
                                     candidate_is_topic(space, best));
  for (std::size_t i = 1; i < leaders.size(); ++i) {
    int np = leaders[i];
    int distance = token_distance(dialogue, anaphor, dialogue.nps[np],
                                  candidate_is_topic(space, np));
    if (distance < best_distance ||
        (distance == best_distance &&
         dialogue.nps[np].head_position > dialogue.nps[best].head_position)) {
      best = np;
      best_distance = distance;
    }
  }
  return best;
}

std::vector<PreferenceId> satisfied_preferences(
    const Dialogue& dialogue, const Anaphor& anaphor, const NounPhrase& np,
    Provenance provenance, const std::vector<PreferenceId>& active) {
  std::vector<PreferenceId> out;
  for (PreferenceId id : active) {
    if (is_maximization(id)) continue;
    if (preference_holds(id, dialogue, anaphor, np, provenance))
      out.push_back(id);
  }
  return out;
}

}  // namespace

Selection select_weighted(const Dialogue& dialogue, const Anaphor& anaphor,
                          const std::vector<int>& survivors,
                          const CandidateSet& space,
                          const ResolutionConfig& config,
                          ResolutionAudit* audit) {
  const std::vector<PreferenceId>& active = config.preferences_for(anaphor.kind);
  std::vector<double> scores(survivors.size(), 0.0);
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    const NounPhrase& np = dialogue.nps[survivors[i]];
    Provenance provenance = *space.provenance_of(survivors[i]);
    std::vector<PreferenceId> satisfied =
        satisfied_preferences(dialogue, anaphor, np, provenance, active);
    for (PreferenceId id : satisfied) scores[i] += config.weight(id);
    if (CandidateAudit* entry = audit_entry(audit, np.id)) {
      entry->satisfied = std::move(satisfied);
      entry->score = scores[i];
    }
  }
  double best = *std::max_element(scores.begin(), scores.end());
  std::vector<int> leaders;
  for (std::size_t i = 0; i < survivors.size(); ++i)
    if (scores[i] == best) leaders.push_back(survivors[i]);

  Selection selection;
  selection.score = best;
  selection.tie_break_applied = leaders.size() > 1;
  selection.np = leaders.size() == 1
                     ? leaders.front()
                     : break_tie(dialogue, anaphor, leaders, space);
  if (audit) audit->tie_break_applied = selection.tie_break_applied;
  return selection;
}

Selection select_ordered(const Dialogue& dialogue, const Anaphor& anaphor,
                         const std::vector<int>& survivors,
                         const CandidateSet& space,
                         const ResolutionConfig& config,
                         ResolutionAudit* audit) {
  const std::vector<PreferenceId>& active = config.preferences_for(anaphor.kind);
  if (audit) {
    for (int np_index : survivors) {
      const NounPhrase& np = dialogue.nps[np_index];
      if (CandidateAudit* entry = audit_entry(audit, np.id)) {
        entry->satisfied = satisfied_preferences(
            dialogue, anaphor, np, *space.provenance_of(np_index), active);
      }
    }
  }

  std::vector<int> alive = survivors;
  for (std::size_t step = 0; step < active.size() && alive.size() > 1; ++step) {
    PreferenceId id = active[step];
    std::vector<int> keep;
    if (is_maximization(id)) {
      int best = 0;
      std::vector<int> counts(alive.size());
      for (std::size_t i = 0; i < alive.size(); ++i) {
        counts[i] =
            maximization_count(id, dialogue, anaphor, dialogue.nps[alive[i]]);
        best = std::max(best, counts[i]);
      }
      for (std::size_t i = 0; i < alive.size(); ++i)
        if (counts[i] == best) keep.push_back(alive[i]);
    } else {
      for (int np_index : alive) {
        if (preference_holds(id, dialogue, anaphor, dialogue.nps[np_index],
                             *space.provenance_of(np_index)))
          keep.push_back(np_index);
      }
      if (keep.empty()) continue;  // nobody fulfills it: keep everyone
    }
    if (keep.size() != alive.size() && audit) {
      for (int np_index : alive) {
        if (std::find(keep.begin(), keep.end(), np_index) == keep.end()) {
          if (CandidateAudit* entry =
                  audit_entry(audit, dialogue.nps[np_index].id))
            entry->eliminated_at = int(step);
        }
      }
    }
    alive = std::move(keep);
  }

  Selection selection;
  selection.tie_break_applied = alive.size() > 1;
  selection.np = alive.size() == 1 ? alive.front()
                                   : break_tie(dialogue, anaphor, alive, space);
  if (audit) audit->tie_break_applied = selection.tie_break_applied;
  return selection;
}

const NounPhrase* topic_for(const Dialogue& dialogue, const Anaphor& anaphor,
                            const ResolutionConfig& config) {
  if (config.space.kind == SpaceKind::Window) return nullptr;
  if (config.topic_source == TopicSource::Gold) {
    if (!dialogue.topic) return nullptr;
    return dialogue.find_np(*dialogue.topic);
  }
  // Automatic detection: walk the salience ranking until a candidate
  // survives the anaphor's constraints.
  TopicRanking ranking =
      rank_topics(dialogue, anaphor.head_position, config.topic_config);
  for (const TopicCandidate& candidate : ranking) {
    const NounPhrase* np =
        first_np_with_lemma(dialogue, candidate.lemma, anaphor.head_position);
    if (np && passes_constraints(dialogue, anaphor, *np)) return np;
  }
  return nullptr;
}

ResolutionResult resolve(const Dialogue& dialogue, const Anaphor& anaphor,
                         const ResolutionConfig& config) {
  ResolutionResult result;
  result.anaphor_id = anaphor.id;

  const NounPhrase* topic = topic_for(dialogue, anaphor, config);
  CandidateSet space = build_space(dialogue, anaphor, config.space, topic);

  result.audit.degraded_space = space.degraded;
  if (topic) result.audit.topic_np = topic->id;
  for (const CandidateEntry& entry : space.entries) {
    CandidateAudit candidate;
    candidate.np_id = dialogue.nps[entry.np].id;
    candidate.provenance = entry.provenance;
    result.audit.candidates.push_back(std::move(candidate));
  }

  if (space.entries.empty()) {
    result.outcome = Outcome::Unresolved;
    result.reason = "empty accessibility space";
    return result;
  }

  std::vector<int> survivors = filter_constraints(dialogue, anaphor, space);
  for (int np_index : survivors) {
    if (CandidateAudit* entry =
            audit_entry(&result.audit, dialogue.nps[np_index].id))
      entry->passed_constraints = true;
  }
  if (survivors.empty()) {
    result.outcome = Outcome::Unresolved;
    result.reason = "constraints eliminated every candidate";
    return result;
  }

  Selection selection =
      config.management == Management::Weighted
          ? select_weighted(dialogue, anaphor, survivors, space, config,
                            &result.audit)
          : select_ordered(dialogue, anaphor, survivors, space, config,
                           &result.audit);
  result.outcome = Outcome::Resolved;
  result.antecedent = dialogue.nps[selection.np].id;
  result.score = selection.score;
  return result;
}

ResolutionResult resolve(const Dialogue& dialogue, std::string_view anaphor_id,
                         const ResolutionConfig& config) {
  const Anaphor* anaphor = dialogue.find_anaphor(anaphor_id);
  if (!anaphor) throw std::out_of_range("unknown anaphor id");
  return resolve(dialogue, *anaphor, config);
}

}  // namespace ardi
