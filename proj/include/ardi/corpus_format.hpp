#ifndef ARDI_CORPUS_FORMAT_HPP
#define ARDI_CORPUS_FORMAT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ardi/dialogue.hpp"

// Reader and writer for the .dlg annotated-dialogue format. One DIALOGUE
// element per file; tags are upper-case and attribute values double-quoted.
// The full grammar lives in docs/format.md. Parsing never throws: problems
// come back as diagnostics with line/column positions.

namespace ardi {

enum class Severity : std::uint8_t { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string source;  // file name when known
  int line = 0;
  int column = 0;
  std::string code;  // short stable identifier, e.g. "dangling-antecedent"
  std::string message;
};

struct ParseResult {
  std::optional<Dialogue> dialogue;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return dialogue.has_value(); }
};

ParseResult parse_dialogue(std::string_view text);

// Canonical serialization; parse_dialogue(serialize_dialogue(d)) == d.
std::string serialize_dialogue(const Dialogue& dialogue);

struct CorpusFile {
  std::string name;
  std::string text;
};

// Per-document errors plus corpus-level lint warnings (anaphors without a
// gold antecedent, cataphoric gold links, noun phrases with all-unknown
// agreement features). Never throws; errors arrive as diagnostics.
std::vector<Diagnostic> validate_corpus(const std::vector<CorpusFile>& files);

struct Corpus {
  std::vector<Dialogue> dialogues;  // ascending dialogue id
};

struct CorpusLoad {
  Corpus corpus;
  std::vector<Diagnostic> diagnostics;
  bool ok() const;
};

CorpusLoad parse_corpus(const std::vector<CorpusFile>& files);

// Expands files and directories (non-recursive *.dlg scan, sorted by name).
// Unreadable paths produce error diagnostics.
std::vector<CorpusFile> read_corpus_files(const std::vector<std::string>& paths,
                                          std::vector<Diagnostic>& diagnostics);

std::string format_diagnostic(const Diagnostic& diagnostic);

}  // namespace ardi

#endif  // ARDI_CORPUS_FORMAT_HPP
