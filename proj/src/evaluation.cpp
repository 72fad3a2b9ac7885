#include "ardi/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace ardi {

namespace {

std::string fixed(double value, int digits = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 1); }

}  // namespace

std::vector<DialogueResults> resolve_corpus(const Corpus& corpus,
                                            const ResolutionConfig& config,
                                            Execution execution) {
  if (config.topic_source == TopicSource::Auto &&
      (config.topic_config.frequency_gain <= 0.0 ||
       config.topic_config.absence_penalty < 0.0))
    throw std::invalid_argument(
        "topic coefficients: frequency gain must be positive, absence "
        "penalty non-negative");
  std::vector<DialogueResults> all(corpus.dialogues.size());
  const int n = int(corpus.dialogues.size());
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      const Dialogue& dialogue = corpus.dialogues[i];
      all[i].dialogue_id = dialogue.id;
      all[i].results.reserve(dialogue.anaphors.size());
      for (const Anaphor& anaphor : dialogue.anaphors)
        all[i].results.push_back(resolve(dialogue, anaphor, config));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const Dialogue& dialogue = corpus.dialogues[i];
      all[i].dialogue_id = dialogue.id;
      all[i].results.reserve(dialogue.anaphors.size());
      for (const Anaphor& anaphor : dialogue.anaphors)
        all[i].results.push_back(resolve(dialogue, anaphor, config));
    }
  }
  return all;
}

KindCounts PrecisionReport::pooled() const {
  KindCounts out;
  out.total = pronominal.total + adjectival.total;
  out.resolved = pronominal.resolved + adjectival.resolved;
  out.correct = pronominal.correct + adjectival.correct;
  return out;
}

PrecisionReport evaluate_precision(const Corpus& corpus,
                                   const ResolutionConfig& config,
                                   Execution execution) {
  PrecisionReport report;
  std::vector<DialogueResults> all = resolve_corpus(corpus, config, execution);
  for (std::size_t i = 0; i < corpus.dialogues.size(); ++i) {
    const Dialogue& dialogue = corpus.dialogues[i];
    for (std::size_t a = 0; a < dialogue.anaphors.size(); ++a) {
      const Anaphor& anaphor = dialogue.anaphors[a];
      if (!anaphor.gold_antecedent)
        throw std::invalid_argument("anaphor " + anaphor.id + " in dialogue " +
                                    dialogue.id + " has no gold antecedent");
      const ResolutionResult& result = all[i].results[a];
      KindCounts& counts =
          anaphor.pronominal() ? report.pronominal : report.adjectival;
      ++counts.total;
      if (result.resolved()) {
        ++counts.resolved;
        if (result.antecedent == *anaphor.gold_antecedent) ++counts.correct;
      }
    }
  }
  if (report.pooled().total == 0)
    throw std::domain_error("corpus contains no anaphors; precision undefined");
  return report;
}

CoverageCounts CoverageReport::pooled() const {
  CoverageCounts out;
  out.same_ap = pronominal.same_ap + adjectival.same_ap;
  out.previous_ap = pronominal.previous_ap + adjectival.previous_ap;
  out.enclosing_ap = pronominal.enclosing_ap + adjectival.enclosing_ap;
  out.topic = pronominal.topic + adjectival.topic;
  out.elsewhere = pronominal.elsewhere + adjectival.elsewhere;
  return out;
}

CoverageReport space_report(const Corpus& corpus,
                            const std::vector<SpaceStrategy>& strategies) {
  CoverageReport report;
  for (const SpaceStrategy& strategy : strategies)
    report.loads.push_back({strategy, 0, 0});

  for (const Dialogue& dialogue : corpus.dialogues) {
    const NounPhrase* topic =
        dialogue.topic ? dialogue.find_np(*dialogue.topic) : nullptr;
    for (const Anaphor& anaphor : dialogue.anaphors) {
      CandidateSet structural = structural_space(dialogue, anaphor, topic);
      if (anaphor.gold_antecedent) {
        int gold = dialogue.np_index(*anaphor.gold_antecedent);
        CoverageCounts& counts =
            anaphor.pronominal() ? report.pronominal : report.adjectival;
        std::optional<Provenance> provenance =
            gold >= 0 ? structural.provenance_of(gold) : std::nullopt;
        if (!provenance) {
          ++counts.elsewhere;
        } else {
          switch (*provenance) {
            case Provenance::SameAp: ++counts.same_ap; break;
            case Provenance::PreviousAp: ++counts.previous_ap; break;
            case Provenance::EnclosingAp: ++counts.enclosing_ap; break;
            default: ++counts.topic; break;
          }
        }
      }
      for (StrategyLoad& load : report.loads) {
        CandidateSet space =
            load.strategy == SpaceStrategy::structural()
                ? structural
                : build_space(dialogue, anaphor, load.strategy, topic);
        load.total_candidates += long(space.size());
        ++load.anaphors;
      }
    }
  }
  return report;
}

double WindowStudy::pronominal_fraction(int n) const {
  return pronominal_total == 0 ? 0.0
                               : double(pronominal_covered[n]) / pronominal_total;
}

double WindowStudy::adjectival_fraction(int n) const {
  return adjectival_total == 0 ? 0.0
                               : double(adjectival_covered[n]) / adjectival_total;
}

WindowStudy window_study(const Corpus& corpus, int max_n) {
  WindowStudy study;
  study.max_n = max_n;
  study.pronominal_covered.assign(max_n + 1, 0);
  study.adjectival_covered.assign(max_n + 1, 0);
  for (const Dialogue& dialogue : corpus.dialogues) {
    for (const Anaphor& anaphor : dialogue.anaphors) {
      if (!anaphor.gold_antecedent) continue;
      const bool pronominal = anaphor.pronominal();
      (pronominal ? study.pronominal_total : study.adjectival_total) += 1;
      int gold = dialogue.np_index(*anaphor.gold_antecedent);
      if (gold < 0) continue;
      const NounPhrase& np = dialogue.nps[gold];
      // Windows never reach a positionless topic entry or a later mention.
      if (np.head_position < 0 || np.head_position >= anaphor.head_position)
        continue;
      int delta = anaphor.utterance - np.utterance;
      for (int n = std::max(delta, 0); n <= max_n; ++n)
        (pronominal ? study.pronominal_covered
                    : study.adjectival_covered)[n] += 1;
    }
  }
  return study;
}

const char* to_string(ReliabilityBand band) {
  switch (band) {
    case ReliabilityBand::BelowModerate: return "below-moderate";
    case ReliabilityBand::Positive: return "positive";
    case ReliabilityBand::TotalReliability: return "total-reliability";
  }
  return "below-moderate";
}

ReliabilityBand reliability_band(double kappa) {
  if (kappa < 0.68) return ReliabilityBand::BelowModerate;
  if (kappa <= 0.80) return ReliabilityBand::Positive;
  return ReliabilityBand::TotalReliability;
}

ReliabilityReport kappa_statistic(
    const std::map<std::string, std::string>& first,
    const std::map<std::string, std::string>& second) {
  if (first.size() != second.size())
    throw std::invalid_argument("annotators judged different item sets");
  if (first.size() < 2)
    throw std::invalid_argument("kappa needs at least two items");

  int agreements = 0;
  std::map<std::string, int> first_marginal, second_marginal;
  std::set<std::string> categories;
  for (const auto& [item, category] : first) {
    auto other = second.find(item);
    if (other == second.end())
      throw std::invalid_argument("annotators judged different item sets");
    if (category == other->second) ++agreements;
    ++first_marginal[category];
    ++second_marginal[other->second];
    categories.insert(category);
    categories.insert(other->second);
  }
  if (categories.size() < 2)
    throw std::invalid_argument("kappa needs at least two categories");

  const double n = double(first.size());
  const double observed = agreements / n;
  double expected = 0.0;
  for (const std::string& category : categories) {
    auto a = first_marginal.find(category);
    auto b = second_marginal.find(category);
    if (a == first_marginal.end() || b == second_marginal.end()) continue;
    expected += (a->second / n) * (b->second / n);
  }
  if (expected >= 1.0)
    throw std::domain_error("expected agreement is 1; kappa undefined");

  ReliabilityReport report;
  report.items = int(first.size());
  report.observed_agreement = observed;
  report.expected_agreement = expected;
  report.kappa = (observed - expected) / (1.0 - expected);
  report.band = reliability_band(report.kappa);
  return report;
}

const std::vector<std::pair<double, double>>& ReferenceBaselines::window_rows() {
  static const std::vector<std::pair<double, double>> rows = {
      {37.7, 18.4},  {54.1, 44.7},  {70.5, 52.6},  {77.0, 55.3},
      {80.3, 57.9},  {83.6, 71.0},  {88.5, 73.7},  {91.8, 76.3},
      {91.8, 81.6},  {95.1, 81.6},  {96.7, 92.1},  {98.4, 94.7},
      {98.4, 97.4},  {98.4, 97.4},  {100.0, 100.0}};
  return rows;
}

void render_precision(std::ostream& out, const PrecisionReport& report) {
  ReferenceBaselines ref;
  auto row = [&](const char* label, const KindCounts& counts) {
    out << label << "  total " << counts.total << "  resolved "
        << counts.resolved << "  correct " << counts.correct << "  precision "
        << percent(counts.precision()) << "%\n";
  };
  out << "Precision against gold antecedents\n";
  row("pronominal", report.pronominal);
  row("adjectival", report.adjectival);
  row("pooled    ", report.pooled());
  out << "InfoTren reference baseline (not reproduced here): pronominal "
      << fixed(ref.precision_pronominal, 1) << "%, adjectival "
      << fixed(ref.precision_adjectival, 1) << "%\n";
}

namespace {

void coverage_row(std::ostream& out, const char* label,
                  const CoverageCounts& counts) {
  const int total = counts.total();
  auto cell = [&](int value) {
    return total == 0 ? std::string("-") : percent(double(value) / total) + "%";
  };
  out << label << "  same-ap " << cell(counts.same_ap) << "  previous-ap "
      << cell(counts.previous_ap) << "  enclosing-ap "
      << cell(counts.enclosing_ap) << "  topic " << cell(counts.topic)
      << "  elsewhere " << cell(counts.elsewhere) << "  (n=" << total << ")\n";
}

}  // namespace

void render_coverage(std::ostream& out, const CoverageReport& report) {
  ReferenceBaselines ref;
  out << "Gold antecedent location in the structural space\n";
  coverage_row(out, "pronominal", report.pronominal);
  coverage_row(out, "adjectival", report.adjectival);
  coverage_row(out, "pooled    ", report.pooled());
  out << "InfoTren reference baseline (not reproduced here): in-space "
      << fixed(ref.in_space_total, 1) << "% (pronominal "
      << fixed(ref.in_space_pronominal, 1) << "%, adjectival "
      << fixed(ref.in_space_adjectival, 1) << "%)\n";
}

void render_candidates(std::ostream& out, const CoverageReport& report) {
  ReferenceBaselines ref;
  out << "Candidates per anaphor before constraints\n";
  for (const StrategyLoad& load : report.loads) {
    out << load.strategy.name() << "  total " << load.total_candidates
        << "  per-anaphor " << fixed(load.mean(), 2) << "\n";
  }
  out << "InfoTren reference baseline (not reproduced here): structural "
      << fixed(ref.candidates_structural, 2) << ", full "
      << fixed(ref.candidates_full, 2) << ", window "
      << fixed(ref.candidates_window, 2) << "\n";
}

void render_window_study(std::ostream& out, const WindowStudy& study) {
  const auto& ref = ReferenceBaselines::window_rows();
  out << "Window of utterances: gold antecedents covered\n";
  out << "    n  pronominal  adjectival  ref-pron  ref-adj\n";
  for (int n = 0; n <= study.max_n; ++n) {
    char line[128];
    std::string ref_pron = "-";
    std::string ref_adj = "-";
    if (n < int(ref.size())) {
      ref_pron = fixed(ref[n].first, 1);
      ref_adj = fixed(ref[n].second, 1);
    }
    std::snprintf(line, sizeof(line), "  %3d  %9s%%  %9s%%  %8s  %7s\n", n,
                  percent(study.pronominal_fraction(n)).c_str(),
                  percent(study.adjectival_fraction(n)).c_str(),
                  ref_pron.c_str(), ref_adj.c_str());
    out << line;
  }
  out << "Reference columns are the published InfoTren values, for"
         " comparison only.\n";
}

void render_reliability(std::ostream& out, const ReliabilityReport& report) {
  out << "kappa " << fixed(report.kappa) << "  band " << to_string(report.band)
      << "  observed " << fixed(report.observed_agreement) << "  expected "
      << fixed(report.expected_agreement) << "  items " << report.items
      << "\n";
}

void write_precision_records(std::ostream& out, const PrecisionReport& report) {
  ReferenceBaselines ref;
  auto rows = [&](const char* kind, const KindCounts& counts) {
    out << "precision." << kind << "\t" << fixed(counts.precision()) << "\n";
    out << "precision." << kind << ".total\t" << counts.total << "\n";
    out << "precision." << kind << ".resolved\t" << counts.resolved << "\n";
    out << "precision." << kind << ".correct\t" << counts.correct << "\n";
  };
  rows("pronominal", report.pronominal);
  rows("adjectival", report.adjectival);
  rows("pooled", report.pooled());
  out << "reference.precision.pronominal\t" << fixed(ref.precision_pronominal, 1)
      << "\n";
  out << "reference.precision.adjectival\t" << fixed(ref.precision_adjectival, 1)
      << "\n";
}

namespace {

void coverage_records(std::ostream& out, const std::string& prefix,
                      const CoverageCounts& counts) {
  const int total = counts.total();
  auto fraction = [&](int value) {
    return total == 0 ? fixed(0.0) : fixed(double(value) / total);
  };
  out << prefix << ".same_ap\t" << fraction(counts.same_ap) << "\n";
  out << prefix << ".previous_ap\t" << fraction(counts.previous_ap) << "\n";
  out << prefix << ".enclosing_ap\t" << fraction(counts.enclosing_ap) << "\n";
  out << prefix << ".topic\t" << fraction(counts.topic) << "\n";
  out << prefix << ".elsewhere\t" << fraction(counts.elsewhere) << "\n";
  out << prefix << ".total\t" << total << "\n";
}

}  // namespace

void write_coverage_records(std::ostream& out, const CoverageReport& report) {
  ReferenceBaselines ref;
  coverage_records(out, "coverage", report.pooled());
  coverage_records(out, "coverage.pronominal", report.pronominal);
  coverage_records(out, "coverage.adjectival", report.adjectival);
  out << "reference.coverage.in_space\t" << fixed(ref.in_space_total, 1) << "\n";
}

void write_candidates_records(std::ostream& out, const CoverageReport& report) {
  ReferenceBaselines ref;
  for (const StrategyLoad& load : report.loads) {
    out << "candidates." << load.strategy.name() << "\t" << fixed(load.mean())
        << "\n";
    out << "candidates." << load.strategy.name() << ".total\t"
        << load.total_candidates << "\n";
  }
  out << "reference.candidates.structural\t"
      << fixed(ref.candidates_structural, 2) << "\n";
  out << "reference.candidates.full\t" << fixed(ref.candidates_full, 2) << "\n";
  out << "reference.candidates.window\t" << fixed(ref.candidates_window, 2)
      << "\n";
}

void write_window_records(std::ostream& out, const WindowStudy& study) {
  for (int n = 0; n <= study.max_n; ++n) {
    out << "window." << n << ".pronominal\t"
        << fixed(study.pronominal_fraction(n)) << "\n";
    out << "window." << n << ".adjectival\t"
        << fixed(study.adjectival_fraction(n)) << "\n";
  }
  const auto& ref = ReferenceBaselines::window_rows();
  for (int n = 0; n <= study.max_n && n < int(ref.size()); ++n) {
    out << "reference.window." << n << ".pronominal\t" << fixed(ref[n].first, 1)
        << "\n";
    out << "reference.window." << n << ".adjectival\t"
        << fixed(ref[n].second, 1) << "\n";
  }
}

void write_reliability_records(std::ostream& out,
                               const ReliabilityReport& report) {
  out << "kappa.value\t" << fixed(report.kappa) << "\n";
  out << "kappa.band\t" << to_string(report.band) << "\n";
  out << "kappa.observed\t" << fixed(report.observed_agreement) << "\n";
  out << "kappa.expected\t" << fixed(report.expected_agreement) << "\n";
  out << "kappa.items\t" << report.items << "\n";
}

}  // namespace ardi
