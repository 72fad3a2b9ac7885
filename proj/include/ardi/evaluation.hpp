#ifndef ARDI_EVALUATION_HPP
#define ARDI_EVALUATION_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ardi/corpus_format.hpp"
#include "ardi/resolution.hpp"

// Corpus-level scoring: precision against gold links, antecedent-location
// coverage, the window-of-utterances study, and the kappa reliability
// statistic. Per-dialogue work is independent; the parallel driver uses
// OpenMP and reduces in dialogue-id order, so serial and parallel runs
// produce identical reports.

namespace ardi {

enum class Execution : std::uint8_t { Serial, Parallel };

struct DialogueResults {
  std::string dialogue_id;
  std::vector<ResolutionResult> results;  // anaphors in document order
};

std::vector<DialogueResults> resolve_corpus(const Corpus& corpus,
                                            const ResolutionConfig& config,
                                            Execution execution);

struct KindCounts {
  int total = 0;
  int resolved = 0;
  int correct = 0;
  double precision() const { return total == 0 ? 0.0 : double(correct) / total; }
};

struct PrecisionReport {
  KindCounts pronominal;
  KindCounts adjectival;
  KindCounts pooled() const;
};

// Unresolved anaphors count as incorrect. Throws std::domain_error when the
// corpus has no anaphors (precision would be undefined), std::invalid_argument
// when an anaphor lacks a gold antecedent.
PrecisionReport evaluate_precision(const Corpus& corpus,
                                   const ResolutionConfig& config,
                                   Execution execution = Execution::Parallel);

struct CoverageCounts {
  int same_ap = 0;
  int previous_ap = 0;
  int enclosing_ap = 0;
  int topic = 0;
  int elsewhere = 0;
  int total() const {
    return same_ap + previous_ap + enclosing_ap + topic + elsewhere;
  }
};

struct StrategyLoad {
  SpaceStrategy strategy;
  long total_candidates = 0;
  int anaphors = 0;
  double mean() const {
    return anaphors == 0 ? 0.0 : double(total_candidates) / anaphors;
  }
};

struct CoverageReport {
  CoverageCounts pronominal;
  CoverageCounts adjectival;
  CoverageCounts pooled() const;
  std::vector<StrategyLoad> loads;
};

// Gold-antecedent location classes against the structural space (with the
// gold topic), plus mean candidate counts per strategy.
CoverageReport space_report(const Corpus& corpus,
                            const std::vector<SpaceStrategy>& strategies);

struct WindowStudy {
  int max_n = 0;
  // covered[n] / total per kind; fractions are non-decreasing in n
  std::vector<int> pronominal_covered;
  std::vector<int> adjectival_covered;
  int pronominal_total = 0;
  int adjectival_total = 0;
  double pronominal_fraction(int n) const;
  double adjectival_fraction(int n) const;
};

WindowStudy window_study(const Corpus& corpus, int max_n);

enum class ReliabilityBand : std::uint8_t {
  BelowModerate,    // k < 0.68
  Positive,         // 0.68 <= k <= 0.80
  TotalReliability  // k > 0.80
};

const char* to_string(ReliabilityBand band);
ReliabilityBand reliability_band(double kappa);

struct ReliabilityReport {
  double kappa = 0.0;
  ReliabilityBand band = ReliabilityBand::BelowModerate;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  int items = 0;
};

// Chance-corrected agreement over two annotators' category assignments for
// the same items. Throws std::invalid_argument on fewer than two items,
// fewer than two categories, or mismatched item sets; std::domain_error when
// expected agreement is 1 (both annotators constant on one category).
ReliabilityReport kappa_statistic(
    const std::map<std::string, std::string>& first,
    const std::map<std::string, std::string>& second);

// Published reference values from the original train-information corpus
// (204 dialogues); reports show them as comparison baselines only.
struct ReferenceBaselines {
  double precision_pronominal = 81.3;
  double precision_adjectival = 81.5;
  double in_space_total = 95.9;
  double in_space_pronominal = 98.3;
  double in_space_adjectival = 92.2;
  double candidates_structural = 10.74;
  double candidates_full = 34.14;
  double candidates_window = 13.05;
  // window coverage %, n = 0..14
  static const std::vector<std::pair<double, double>>& window_rows();
};

// Human-readable tables.
void render_precision(std::ostream& out, const PrecisionReport& report);
void render_coverage(std::ostream& out, const CoverageReport& report);
void render_candidates(std::ostream& out, const CoverageReport& report);
void render_window_study(std::ostream& out, const WindowStudy& study);
void render_reliability(std::ostream& out, const ReliabilityReport& report);

// Machine-readable key<TAB>value records (stable keys, fixed formatting).
void write_precision_records(std::ostream& out, const PrecisionReport& report);
void write_coverage_records(std::ostream& out, const CoverageReport& report);
void write_candidates_records(std::ostream& out, const CoverageReport& report);
void write_window_records(std::ostream& out, const WindowStudy& study);
void write_reliability_records(std::ostream& out,
                               const ReliabilityReport& report);

}  // namespace ardi

#endif  // ARDI_EVALUATION_HPP
