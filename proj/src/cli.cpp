#include "ardi/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "ardi/corpus_format.hpp"
#include "ardi/evaluation.hpp"
#include "ardi/resolution.hpp"

namespace ardi {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

std::string format_score(double score) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", score);
  return buffer;
}

// Key=value configuration file; '#' starts a comment.
bool read_config_file(const std::string& path,
                      std::map<std::string, std::string>& values,
                      std::string& error) {
  std::ifstream in(path);
  if (!in) {
    error = "cannot open config file " + path;
    return false;
  }
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string trimmed = line.substr(0, line.find('#'));
    auto begin = trimmed.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = trimmed.find_last_not_of(" \t\r");
    trimmed = trimmed.substr(begin, end - begin + 1);
    auto equals = trimmed.find('=');
    if (equals == std::string::npos) {
      error = path + ":" + std::to_string(number) + ": expected key=value";
      return false;
    }
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    values[strip(trimmed.substr(0, equals))] = strip(trimmed.substr(equals + 1));
  }
  return true;
}

struct ConfigFlags {
  std::string space;
  std::string management;
  std::string topic;
  std::string prefs;
  std::string weights;
  std::string config_file;
  double topic_cf = -1.0;
  double topic_ci = -1.0;
};

// Precedence: explicit flags > config file > built-in defaults.
bool build_config(const ConfigFlags& flags, ResolutionConfig& config,
                  std::string& error) {
  std::map<std::string, std::string> file_values;
  if (!flags.config_file.empty() &&
      !read_config_file(flags.config_file, file_values, error))
    return false;

  auto effective = [&](const std::string& flag_value, const char* key) {
    if (!flag_value.empty()) return flag_value;
    auto it = file_values.find(key);
    return it == file_values.end() ? std::string() : it->second;
  };

  std::string prefs = effective(flags.prefs, "prefs");
  if (prefs.empty() || prefs == "final") {
    config = ResolutionConfig::defaults();
  } else if (prefs == "baseline") {
    config = ResolutionConfig::baseline();
  } else {
    error = "unknown preference set \"" + prefs + "\" (use baseline or final)";
    return false;
  }

  std::string space = effective(flags.space, "space");
  if (!space.empty()) {
    auto parsed = SpaceStrategy::parse(space);
    if (!parsed) {
      error = "unknown space \"" + space +
              "\" (use structural, full or window:N)";
      return false;
    }
    config.space = *parsed;
  }

  std::string management = effective(flags.management, "management");
  if (!management.empty()) {
    if (management == "ordered") {
      config.management = Management::Ordered;
    } else if (management == "weighted") {
      config.management = Management::Weighted;
    } else {
      error = "unknown management \"" + management +
              "\" (use ordered or weighted)";
      return false;
    }
  }

  std::string topic = effective(flags.topic, "topic");
  if (!topic.empty()) {
    if (topic == "gold") {
      config.topic_source = TopicSource::Gold;
    } else if (topic == "auto") {
      config.topic_source = TopicSource::Auto;
    } else {
      error = "unknown topic source \"" + topic + "\" (use gold or auto)";
      return false;
    }
  }

  auto file_number = [&](const char* key, double& target) {
    auto it = file_values.find(key);
    if (it == file_values.end()) return true;
    try {
      target = std::stod(it->second);
    } catch (const std::exception&) {
      error = std::string("invalid number for ") + key + " in config file";
      return false;
    }
    return true;
  };
  double cf = flags.topic_cf, ci = flags.topic_ci;
  if (cf < 0 && !file_number("topic-cf", cf)) return false;
  if (ci < 0 && !file_number("topic-ci", ci)) return false;
  if (cf >= 0) {
    if (cf == 0) {
      error = "topic frequency coefficient must be positive";
      return false;
    }
    config.topic_config.frequency_gain = cf;
  }
  if (ci >= 0) config.topic_config.absence_penalty = ci;

  // weight.<code> entries from the file, then the --weights flag on top.
  for (const auto& [key, value] : file_values) {
    if (key.rfind("weight.", 0) != 0) continue;
    auto id = preference_from_code(key.substr(7));
    if (!id) {
      error = "unknown preference \"" + key.substr(7) + "\" in config file";
      return false;
    }
    try {
      double w = std::stod(value);
      if (w < 0) throw std::invalid_argument("");
      config.weights[*id] = w;
    } catch (const std::exception&) {
      error = "invalid weight for " + key;
      return false;
    }
  }
  std::string weights = flags.weights;
  std::stringstream stream(weights);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    auto equals = item.find('=');
    if (equals == std::string::npos) {
      error = "--weights expects code=value pairs, got \"" + item + "\"";
      return false;
    }
    auto id = preference_from_code(item.substr(0, equals));
    if (!id) {
      error = "unknown preference \"" + item.substr(0, equals) + "\"";
      return false;
    }
    try {
      double w = std::stod(item.substr(equals + 1));
      if (w < 0) throw std::invalid_argument("");
      config.weights[*id] = w;
    } catch (const std::exception&) {
      error = "invalid weight in \"" + item + "\"";
      return false;
    }
  }
  return true;
}

struct LoadedCorpus {
  Corpus corpus;
  int exit_code = kExitOk;
};

LoadedCorpus load_corpus_or_fail(const std::vector<std::string>& paths,
                                 std::ostream& err) {
  LoadedCorpus loaded;
  std::vector<Diagnostic> io_diagnostics;
  std::vector<CorpusFile> files = read_corpus_files(paths, io_diagnostics);
  if (!io_diagnostics.empty()) {
    for (const Diagnostic& d : io_diagnostics)
      err << format_diagnostic(d) << "\n";
    loaded.exit_code = kExitUsage;
    return loaded;
  }
  if (files.empty()) {
    err << "no .dlg files found\n";
    loaded.exit_code = kExitUsage;
    return loaded;
  }
  CorpusLoad load = parse_corpus(files);
  for (const Diagnostic& d : load.diagnostics)
    err << format_diagnostic(d) << "\n";
  if (!load.ok()) {
    loaded.exit_code = kExitDiagnostics;
    return loaded;
  }
  loaded.corpus = std::move(load.corpus);
  return loaded;
}

Execution execution_for(int jobs) {
  if (jobs == 1) return Execution::Serial;
#ifdef _OPENMP
  if (jobs > 1) omp_set_num_threads(jobs);
#endif
  return Execution::Parallel;
}

void print_audit(std::ostream& out, const ResolutionResult& result) {
  if (result.audit.topic_np)
    out << "# topic " << *result.audit.topic_np << "\n";
  if (result.audit.degraded_space) out << "# degraded-space\n";
  for (const CandidateAudit& candidate : result.audit.candidates) {
    out << "# candidate " << candidate.np_id << " provenance="
        << to_string(candidate.provenance) << " constraints="
        << (candidate.passed_constraints ? "pass" : "drop");
    out << " score=" << format_score(candidate.score);
    if (candidate.eliminated_at >= 0)
      out << " eliminated_at=" << candidate.eliminated_at;
    out << " prefs=";
    for (std::size_t i = 0; i < candidate.satisfied.size(); ++i) {
      if (i) out << ",";
      out << preference_code(candidate.satisfied[i]);
    }
    if (candidate.satisfied.empty()) out << "-";
    out << "\n";
  }
  if (result.audit.tie_break_applied) out << "# tie-break nearest\n";
}

int command_resolve(const std::vector<std::string>& paths,
                    const ResolutionConfig& config, int jobs, bool verbose,
                    std::ostream& out, std::ostream& err) {
  LoadedCorpus loaded = load_corpus_or_fail(paths, err);
  if (loaded.exit_code != kExitOk) return loaded.exit_code;
  std::vector<DialogueResults> all =
      resolve_corpus(loaded.corpus, config, execution_for(jobs));
  for (const DialogueResults& dialogue : all) {
    for (const ResolutionResult& result : dialogue.results) {
      out << dialogue.dialogue_id << "\t" << result.anaphor_id << "\t";
      if (result.resolved())
        out << result.antecedent;
      else
        out << "UNRESOLVED";
      out << "\t" << format_score(result.score) << "\n";
      if (result.audit.degraded_space)
        err << "warning [degraded-space] " << dialogue.dialogue_id << " "
            << result.anaphor_id << ": anaphor outside any adjacency pair\n";
      if (verbose) print_audit(out, result);
    }
  }
  return kExitOk;
}

int command_evaluate(const std::vector<std::string>& paths,
                     const ResolutionConfig& config, int jobs,
                     const std::string& format, std::ostream& out,
                     std::ostream& err) {
  LoadedCorpus loaded = load_corpus_or_fail(paths, err);
  if (loaded.exit_code != kExitOk) return loaded.exit_code;
  try {
    PrecisionReport report =
        evaluate_precision(loaded.corpus, config, execution_for(jobs));
    if (format == "records")
      write_precision_records(out, report);
    else
      render_precision(out, report);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}

int command_report(const std::string& kind,
                   const std::vector<std::string>& paths,
                   const std::string& spaces, int max_n,
                   const std::string& format, std::ostream& out,
                   std::ostream& err) {
  LoadedCorpus loaded = load_corpus_or_fail(paths, err);
  if (loaded.exit_code != kExitOk) return loaded.exit_code;
  if (kind == "window-study") {
    WindowStudy study = window_study(loaded.corpus, max_n);
    if (format == "records")
      write_window_records(out, study);
    else
      render_window_study(out, study);
    return kExitOk;
  }
  std::vector<SpaceStrategy> strategies;
  std::stringstream stream(spaces);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    auto parsed = SpaceStrategy::parse(item);
    if (!parsed) {
      err << "unknown space \"" << item << "\"\n";
      return kExitUsage;
    }
    strategies.push_back(*parsed);
  }
  CoverageReport report = space_report(loaded.corpus, strategies);
  if (kind == "coverage") {
    if (format == "records")
      write_coverage_records(out, report);
    else
      render_coverage(out, report);
  } else {
    if (format == "records")
      write_candidates_records(out, report);
    else
      render_candidates(out, report);
  }
  return kExitOk;
}

int command_topics(const std::vector<std::string>& paths,
                   const std::string& dialogue_id, const std::string& anaphor_id,
                   int position, const TopicConfig& topic_config,
                   std::ostream& out, std::ostream& err) {
  if (topic_config.frequency_gain <= 0 || topic_config.absence_penalty < 0) {
    err << "topic coefficients: --cf must be positive, --ci non-negative\n";
    return kExitUsage;
  }
  LoadedCorpus loaded = load_corpus_or_fail(paths, err);
  if (loaded.exit_code != kExitOk) return loaded.exit_code;
  for (const Dialogue& dialogue : loaded.corpus.dialogues) {
    if (!dialogue_id.empty() && dialogue.id != dialogue_id) continue;
    int up_to = int(dialogue.tokens.size());
    if (!anaphor_id.empty()) {
      const Anaphor* anaphor = dialogue.find_anaphor(anaphor_id);
      if (!anaphor) continue;
      up_to = anaphor->head_position;
    } else if (position >= 0) {
      up_to = position;
    }
    TopicRanking ranking = rank_topics(dialogue, up_to, topic_config);
    for (const TopicCandidate& candidate : ranking) {
      out << dialogue.id << "\t" << candidate.lemma << "\t"
          << format_score(candidate.weight) << "\t" << candidate.first_turn
          << "\n";
    }
  }
  return kExitOk;
}

bool read_judgments(const std::string& path,
                    std::map<std::string, std::string>& judgments,
                    std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot open " << path << "\n";
    return false;
  }
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      err << path << ":" << number << ": expected item<TAB>category\n";
      return false;
    }
    judgments[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return true;
}

int command_kappa(const std::string& first_path, const std::string& second_path,
                  const std::string& format, std::ostream& out,
                  std::ostream& err) {
  std::map<std::string, std::string> first, second;
  if (!read_judgments(first_path, first, err) ||
      !read_judgments(second_path, second, err))
    return kExitUsage;
  try {
    ReliabilityReport report = kappa_statistic(first, second);
    if (format == "records")
      write_reliability_records(out, report);
    else
      render_reliability(out, report);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}

int command_validate(const std::vector<std::string>& paths, std::ostream& out,
                     std::ostream& err) {
  std::vector<Diagnostic> io_diagnostics;
  std::vector<CorpusFile> files = read_corpus_files(paths, io_diagnostics);
  if (!io_diagnostics.empty()) {
    for (const Diagnostic& d : io_diagnostics)
      err << format_diagnostic(d) << "\n";
    return kExitUsage;
  }
  std::vector<Diagnostic> diagnostics = validate_corpus(files);
  int errors = 0, warnings = 0;
  for (const Diagnostic& d : diagnostics) {
    err << format_diagnostic(d) << "\n";
    (d.severity == Severity::Error ? errors : warnings) += 1;
  }
  out << files.size() << " files, " << errors << " errors, " << warnings
      << " warnings\n";
  return errors > 0 ? kExitDiagnostics : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"anaphora resolution for structurally annotated dialogues",
               "ardi"};
  app.require_subcommand(1);

  ConfigFlags flags;
  int jobs = 0;
  bool verbose = false;
  std::string format = "table";

  auto add_config_flags = [&](CLI::App* cmd) {
    cmd->add_option("--space", flags.space, "structural | full | window:N");
    cmd->add_option("--management", flags.management, "ordered | weighted");
    cmd->add_option("--topic", flags.topic, "gold | auto");
    cmd->add_option("--prefs", flags.prefs, "baseline | final");
    cmd->add_option("--weights", flags.weights,
                    "comma-separated code=value overrides");
    cmd->add_option("--config", flags.config_file, "key=value config file");
    cmd->add_option("--topic-cf", flags.topic_cf,
                    "topic frequency coefficient");
    cmd->add_option("--topic-ci", flags.topic_ci,
                    "topic infrequency coefficient");
    cmd->add_option("--jobs", jobs, "worker threads (1 = serial, 0 = auto)");
  };

  std::vector<std::string> paths;

  CLI::App* cmd_resolve = app.add_subcommand("resolve", "resolve every anaphor");
  cmd_resolve->add_option("paths", paths, "corpus files or directories")
      ->required();
  add_config_flags(cmd_resolve);
  cmd_resolve->add_flag("--verbose", verbose, "print per-candidate audits");

  CLI::App* cmd_evaluate =
      app.add_subcommand("evaluate", "precision against gold antecedents");
  cmd_evaluate->add_option("paths", paths, "corpus files or directories")
      ->required();
  add_config_flags(cmd_evaluate);
  cmd_evaluate->add_option("--format", format, "table | records");

  CLI::App* cmd_report = app.add_subcommand("report", "corpus reports");
  std::string report_kind;
  std::string spaces = "structural,full";
  int max_n = 14;
  cmd_report
      ->add_option("kind", report_kind, "coverage | candidates | window-study")
      ->required()
      ->check(CLI::IsMember({"coverage", "candidates", "window-study"}));
  cmd_report->add_option("paths", paths, "corpus files or directories")
      ->required();
  cmd_report->add_option("--spaces", spaces,
                         "comma-separated strategies for candidate counts");
  cmd_report->add_option("--max-n", max_n, "largest window to report");
  cmd_report->add_option("--format", format, "table | records");

  CLI::App* cmd_topics =
      app.add_subcommand("topics", "salience-ranked topic candidates");
  std::string topics_dialogue, topics_anaphor;
  int topics_position = -1;
  double topics_cf = 10.0, topics_ci = 1.0;
  cmd_topics->add_option("paths", paths, "corpus files or directories")
      ->required();
  cmd_topics->add_option("--dialogue", topics_dialogue, "restrict to one id");
  cmd_topics->add_option("--anaphor", topics_anaphor,
                         "rank at this anaphor's position");
  cmd_topics->add_option("--position", topics_position,
                         "rank at this token offset");
  cmd_topics->add_option("--cf", topics_cf, "frequency coefficient");
  cmd_topics->add_option("--ci", topics_ci, "infrequency coefficient");

  CLI::App* cmd_kappa =
      app.add_subcommand("kappa", "agreement between two annotation files");
  std::string kappa_first, kappa_second;
  cmd_kappa->add_option("first", kappa_first, "item<TAB>category file")
      ->required();
  cmd_kappa->add_option("second", kappa_second, "item<TAB>category file")
      ->required();
  cmd_kappa->add_option("--format", format, "table | records");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "check corpus files and report problems");
  cmd_validate->add_option("paths", paths, "corpus files or directories")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  if (format != "table" && format != "records") {
    err << "unknown format \"" << format << "\" (use table or records)\n";
    return kExitUsage;
  }

  ResolutionConfig config;
  std::string config_error;
  if (cmd_resolve->parsed() || cmd_evaluate->parsed()) {
    if (!build_config(flags, config, config_error)) {
      err << config_error << "\n";
      return kExitUsage;
    }
  }

  if (cmd_resolve->parsed())
    return command_resolve(paths, config, jobs, verbose, out, err);
  if (cmd_evaluate->parsed())
    return command_evaluate(paths, config, jobs, format, out, err);
  if (cmd_report->parsed())
    return command_report(report_kind, paths, spaces, max_n, format, out, err);
  if (cmd_topics->parsed()) {
    TopicConfig topic_config{topics_cf, topics_ci};
    return command_topics(paths, topics_dialogue, topics_anaphor,
                          topics_position, topic_config, out, err);
  }
  if (cmd_kappa->parsed())
    return command_kappa(kappa_first, kappa_second, format, out, err);
  if (cmd_validate->parsed()) return command_validate(paths, out, err);
  return kExitUsage;
}

}  // namespace ardi
