#include "ardi/corpus_format.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ardi {

namespace {

struct Loc {
  int line = 1;
  int column = 1;
};

struct ParseAbort {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(Loc loc, std::string code, std::string message) {
  Diagnostic d;
  d.severity = Severity::Error;
  d.line = loc.line;
  d.column = loc.column;
  d.code = std::move(code);
  d.message = std::move(message);
  throw ParseAbort{std::move(d)};
}

struct Attribute {
  std::string name;
  std::string value;
  Loc loc;
};

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::vector<Attribute> attributes;
  Loc loc;
};

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool eof() const { return pos_ >= text_.size(); }
  Loc loc() const { return loc_; }

  void skip_whitespace() {
    while (!eof() && is_space(text_[pos_])) advance();
  }

  bool at_tag() const { return !eof() && text_[pos_] == '<'; }

  // Next whitespace-delimited token; stops at '<'.
  std::string read_token() {
    std::string token;
    while (!eof() && !is_space(text_[pos_]) && text_[pos_] != '<') {
      token.push_back(text_[pos_]);
      advance();
    }
    return token;
  }

  Tag read_tag() {
    Tag tag;
    tag.loc = loc_;
    expect('<');
    if (!eof() && text_[pos_] == '/') {
      tag.closing = true;
      advance();
    }
    tag.name = read_name();
    if (tag.name.empty()) fail(tag.loc, "malformed-tag", "expected tag name");
    for (;;) {
      skip_whitespace();
      if (eof()) fail(tag.loc, "malformed-tag", "unterminated tag");
      char c = text_[pos_];
      if (c == '>') {
        advance();
        return tag;
      }
      if (c == '/') {
        advance();
        expect('>');
        tag.self_closing = true;
        return tag;
      }
      Attribute attr;
      attr.loc = loc_;
      attr.name = read_name();
      if (attr.name.empty())
        fail(attr.loc, "malformed-tag", "expected attribute name");
      skip_whitespace();
      expect('=');
      skip_whitespace();
      expect('"');
      while (!eof() && text_[pos_] != '"') {
        attr.value.push_back(text_[pos_]);
        advance();
      }
      expect('"');
      tag.attributes.push_back(std::move(attr));
    }
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }

  std::string read_name() {
    std::string name;
    while (!eof()) {
      char c = text_[pos_];
      if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_') {
        name.push_back(c);
        advance();
      } else {
        break;
      }
    }
    return name;
  }

  void expect(char c) {
    if (eof() || text_[pos_] != c)
      fail(loc_, "malformed-tag", std::string("expected '") + c + "'");
    advance();
  }

  void advance() {
    char c = text_[pos_];
    ++pos_;
    if (c == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else if ((c & 0xC0) != 0x80) {  // count UTF-8 code points, not bytes
      ++loc_.column;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Loc loc_;
};

Gender parse_gender(const Attribute& a) {
  if (a.value == "M") return Gender::Masculine;
  if (a.value == "F") return Gender::Feminine;
  if (a.value == "U") return Gender::Unknown;
  fail(a.loc, "invalid-value", "GEN must be M, F or U, got \"" + a.value + "\"");
}

NumberValue parse_number(const Attribute& a) {
  if (a.value == "S") return NumberValue::Singular;
  if (a.value == "P") return NumberValue::Plural;
  if (a.value == "U") return NumberValue::Unknown;
  fail(a.loc, "invalid-value", "NUM must be S, P or U, got \"" + a.value + "\"");
}

PersonValue parse_person(const Attribute& a) {
  if (a.value == "1") return PersonValue::First;
  if (a.value == "2") return PersonValue::Second;
  if (a.value == "3") return PersonValue::Third;
  if (a.value == "U") return PersonValue::Unknown;
  fail(a.loc, "invalid-value", "PER must be 1, 2, 3 or U, got \"" + a.value + "\"");
}

Category parse_category(const Attribute& a) {
  if (a.value == "C") return Category::Common;
  if (a.value == "P") return Category::Proper;
  if (a.value == "O") return Category::Other;
  fail(a.loc, "invalid-value", "CAT must be C, P or O, got \"" + a.value + "\"");
}

Definiteness parse_definiteness(const Attribute& a) {
  if (a.value == "D") return Definiteness::Definite;
  if (a.value == "I") return Definiteness::Indefinite;
  if (a.value == "U") return Definiteness::Unknown;
  fail(a.loc, "invalid-value", "DEF must be D, I or U, got \"" + a.value + "\"");
}

ModifierKind parse_modifier_kind(const Attribute& a) {
  if (a.value == "PP") return ModifierKind::PrepPhrase;
  if (a.value == "ADJ") return ModifierKind::Adjective;
  if (a.value == "OTH") return ModifierKind::Other;
  fail(a.loc, "invalid-value", "KIND must be PP, ADJ or OTH, got \"" + a.value + "\"");
}

AnaphorKind parse_anaphor_kind(const Attribute& a) {
  if (a.value == "PRON") return AnaphorKind::PersonalPronoun;
  if (a.value == "DEM") return AnaphorKind::DemonstrativePronoun;
  if (a.value == "ADJ") return AnaphorKind::Adjectival;
  fail(a.loc, "invalid-value",
       "TYPE must be PRON, DEM or ADJ, got \"" + a.value + "\"");
}

class Parser {
 public:
  explicit Parser(std::string_view text) : scanner_(text) {}

  Dialogue parse(std::vector<Diagnostic>* warnings) {
    warnings_ = warnings;
    scanner_.skip_whitespace();
    Tag root = next_tag();
    if (root.name != "DIALOGUE" || root.closing)
      fail(root.loc, "structural", "expected <DIALOGUE> element");
    check_attributes(root, {"ID"}, {"ID"});
    dialogue_.id = attribute(root, "ID")->value;

    scanner_.skip_whitespace();
    bool first = true;
    for (;;) {
      if (!scanner_.at_tag())
        fail(scanner_.loc(), "structural", "text outside a clause");
      Tag tag = next_tag();
      if (tag.closing) {
        if (tag.name != "DIALOGUE")
          fail(tag.loc, "structural",
               "unexpected closing tag </" + tag.name + ">");
        break;
      }
      if (tag.name == "TOPIC") {
        if (!first)
          fail(tag.loc, "structural", "TOPIC must precede all turns");
        parse_topic(tag);
      } else {
        parse_item(tag, std::nullopt);
      }
      first = false;
      scanner_.skip_whitespace();
    }
    scanner_.skip_whitespace();
    if (!scanner_.eof())
      fail(scanner_.loc(), "structural", "content after </DIALOGUE>");

    resolve_references();
    finalize();
    lint();
    return std::move(dialogue_);
  }

 private:
  Tag next_tag() {
    if (!scanner_.at_tag())
      fail(scanner_.loc(), "structural", "expected a tag");
    return scanner_.read_tag();
  }

  // Rejects unknown and duplicate attributes, requires the mandatory ones.
  void check_attributes(const Tag& tag, std::vector<std::string> allowed,
                        std::vector<std::string> required) {
    std::set<std::string> seen;
    for (const Attribute& a : tag.attributes) {
      if (std::find(allowed.begin(), allowed.end(), a.name) == allowed.end())
        fail(a.loc, "unknown-attribute",
             "unknown attribute " + a.name + " on <" + tag.name + ">");
      if (!seen.insert(a.name).second)
        fail(a.loc, "duplicate-attribute",
             "duplicate attribute " + a.name + " on <" + tag.name + ">");
    }
    for (const std::string& r : required) {
      if (!seen.count(r))
        fail(tag.loc, "missing-attribute",
             "missing attribute " + r + " on <" + tag.name + ">");
    }
  }

  const Attribute* attribute(const Tag& tag, std::string_view name) {
    for (const Attribute& a : tag.attributes)
      if (a.name == name) return &a;
    return nullptr;
  }

  void parse_topic(const Tag& tag) {
    check_attributes(tag, {"REF"}, {});
    if (const Attribute* ref = attribute(tag, "REF")) {
      topic_ref_ = ref->value;
      topic_loc_ = ref->loc;
      if (!tag.self_closing) {
        scanner_.skip_whitespace();
        Tag close = next_tag();
        if (!close.closing || close.name != "TOPIC")
          fail(close.loc, "structural", "expected </TOPIC>");
      }
      return;
    }
    if (tag.self_closing)
      fail(tag.loc, "structural", "TOPIC needs a REF or a nested NP");
    scanner_.skip_whitespace();
    Tag np_tag = next_tag();
    if (np_tag.closing || np_tag.name != "NP")
      fail(np_tag.loc, "structural", "TOPIC must contain a single NP");
    NounPhrase np = parse_np_attributes(np_tag);
    np.synthetic_topic = true;
    if (!np_tag.self_closing) {
      scanner_.skip_whitespace();
      Tag close = next_tag();
      if (!close.closing || close.name != "NP")
        fail(close.loc, "structural", "topic NP cannot contain text");
    }
    register_np(std::move(np), np_tag.loc);
    dialogue_.topic = dialogue_.nps.back().id;
    scanner_.skip_whitespace();
    Tag close = next_tag();
    if (!close.closing || close.name != "TOPIC")
      fail(close.loc, "structural", "expected </TOPIC>");
  }

  void parse_item(const Tag& tag, std::optional<int> parent_pair) {
    if (tag.name == "AP") {
      parse_pair(tag, parent_pair);
    } else if (tag.name == "IT" || tag.name == "CT") {
      parse_turn(tag, parent_pair);
    } else {
      fail(tag.loc, "structural",
           "unexpected <" + tag.name + "> here (wanted AP, IT or CT)");
    }
  }

  void parse_pair(const Tag& tag, std::optional<int> parent_pair) {
    check_attributes(tag, {"ID"}, {"ID"});
    if (tag.self_closing) fail(tag.loc, "structural", "empty adjacency pair");
    const Attribute* id_attr = attribute(tag, "ID");
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(id_attr->value, &used);
      if (used != id_attr->value.size() || id < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      fail(id_attr->loc, "invalid-value",
           "AP ID must be a non-negative integer, got \"" + id_attr->value + "\"");
    }
    if (pair_ids_.count(id))
      fail(id_attr->loc, "duplicate-id", "duplicate AP id " + id_attr->value);
    if (!pair_open_order_.empty() && id <= pair_open_order_.back())
      fail(id_attr->loc, "ap-id-order",
           "AP ids must increase in document order of opening");
    pair_ids_.insert(id);
    pair_open_order_.push_back(id);

    AdjacencyPair pair;
    pair.id = id;
    pair.parent = parent_pair;
    pair.open_position = int(dialogue_.tokens.size());
    int slot = int(dialogue_.pairs.size());
    dialogue_.pairs.push_back(std::move(pair));

    bool any_child = false;
    for (;;) {
      scanner_.skip_whitespace();
      if (!scanner_.at_tag())
        fail(scanner_.loc(), "structural", "text outside a clause");
      Tag child = next_tag();
      if (child.closing) {
        if (child.name != "AP")
          fail(child.loc, "structural",
               "interleaved close tag </" + child.name + "> inside <AP>");
        break;
      }
      parse_item(child, id);
      any_child = true;
    }
    if (!any_child) fail(tag.loc, "structural", "empty adjacency pair");
    dialogue_.pairs[slot].close_position = int(dialogue_.tokens.size());
    StructureChild entry{true, id};
    if (parent_pair)
      pair_children_[*parent_pair].push_back(entry);
    else
      dialogue_.top_level.push_back(entry);
  }

  void parse_turn(const Tag& tag, std::optional<int> parent_pair) {
    Turn turn;
    if (tag.name == "IT") {
      check_attributes(tag, {"TYPE", "SPEAKER"}, {"TYPE", "SPEAKER"});
      const Attribute* type = attribute(tag, "TYPE");
      if (type->value == "I") {
        turn.kind = TurnKind::Initiative;
      } else if (type->value == "R") {
        turn.kind = TurnKind::Reaction;
      } else {
        fail(type->loc, "invalid-value", "unknown turn type " + type->value);
      }
    } else {
      check_attributes(tag, {"SPEAKER"}, {"SPEAKER"});
      turn.kind = TurnKind::Continuing;
    }
    turn.speaker = attribute(tag, "SPEAKER")->value;
    turn.pair = parent_pair;
    turn.span_begin = int(dialogue_.tokens.size());
    int turn_index = int(dialogue_.turns.size());
    dialogue_.turns.push_back(std::move(turn));
    if (tag.self_closing) {
      dialogue_.turns[turn_index].span_end = int(dialogue_.tokens.size());
      record_turn(turn_index, parent_pair);
      return;
    }

    for (;;) {
      scanner_.skip_whitespace();
      if (!scanner_.at_tag())
        fail(scanner_.loc(), "structural", "text outside a clause");
      Tag child = next_tag();
      if (child.closing) {
        if (child.name != tag.name)
          fail(child.loc, "structural",
               "interleaved close tag </" + child.name + "> inside <" +
                   tag.name + ">");
        break;
      }
      if (child.name != "U")
        fail(child.loc, "structural",
             "turns may only contain <U> elements, got <" + child.name + ">");
      parse_utterance(child, turn_index, parent_pair);
    }
    if (tag.name == "IT" && dialogue_.turns[turn_index].utterances.empty())
      fail(tag.loc, "structural", "intervention turn without utterances");
    dialogue_.turns[turn_index].span_end = int(dialogue_.tokens.size());
    record_turn(turn_index, parent_pair);
  }

  void record_turn(int turn_index, std::optional<int> parent_pair) {
    StructureChild entry{false, turn_index};
    if (parent_pair)
      pair_children_[*parent_pair].push_back(entry);
    else
      dialogue_.top_level.push_back(entry);
  }

  void parse_utterance(const Tag& tag, int turn_index,
                       std::optional<int> pair_id) {
    check_attributes(tag, {"ID"}, {"ID"});
    if (tag.self_closing) fail(tag.loc, "structural", "empty utterance");
    Utterance utt;
    utt.id = attribute(tag, "ID")->value;
    if (!utterance_ids_.insert(utt.id).second)
      fail(tag.loc, "duplicate-id", "duplicate utterance id " + utt.id);
    utt.turn = turn_index;
    utt.span_begin = int(dialogue_.tokens.size());
    int utt_index = int(dialogue_.utterances.size());
    dialogue_.utterances.push_back(std::move(utt));

    for (;;) {
      scanner_.skip_whitespace();
      if (!scanner_.at_tag())
        fail(scanner_.loc(), "structural", "text outside a clause");
      Tag child = next_tag();
      if (child.closing) {
        if (child.name != "U")
          fail(child.loc, "structural",
               "interleaved close tag </" + child.name + "> inside <U>");
        break;
      }
      if (child.name != "CL")
        fail(child.loc, "structural",
             "utterances may only contain <CL> elements, got <" + child.name +
                 ">");
      parse_clause(child, utt_index, pair_id);
    }
    if (dialogue_.utterances[utt_index].clauses.empty())
      fail(tag.loc, "structural", "utterance without clauses");
    dialogue_.utterances[utt_index].span_end = int(dialogue_.tokens.size());
    dialogue_.turns[turn_index].utterances.push_back(utt_index);
  }

  void parse_clause(const Tag& tag, int utt_index, std::optional<int> pair_id) {
    check_attributes(tag, {"ID"}, {"ID"});
    if (tag.self_closing) fail(tag.loc, "structural", "empty clause");
    Clause clause;
    clause.id = attribute(tag, "ID")->value;
    if (!clause_ids_.insert(clause.id).second)
      fail(tag.loc, "duplicate-id", "duplicate clause id " + clause.id);
    clause.utterance = utt_index;
    clause.span_begin = int(dialogue_.tokens.size());
    int clause_index = int(dialogue_.clauses.size());
    dialogue_.clauses.push_back(std::move(clause));

    for (;;) {
      scanner_.skip_whitespace();
      if (scanner_.eof())
        fail(tag.loc, "structural", "unterminated <CL> element");
      if (!scanner_.at_tag()) {
        dialogue_.tokens.push_back(scanner_.read_token());
        continue;
      }
      Tag child = next_tag();
      if (child.closing) {
        if (child.name != "CL")
          fail(child.loc, "structural",
               "interleaved close tag </" + child.name + "> inside <CL>");
        break;
      }
      if (child.name == "NP") {
        parse_inline_np(child, utt_index, clause_index, pair_id);
      } else if (child.name == "ANA") {
        parse_inline_ana(child, utt_index, clause_index, pair_id);
      } else if (child.name == "VB") {
        parse_inline_vb(child, clause_index);
      } else {
        fail(child.loc, "structural",
             "clauses may only contain NP, ANA and VB elements");
      }
    }
    if (dialogue_.clauses[clause_index].span_begin ==
        int(dialogue_.tokens.size()))
      fail(tag.loc, "structural", "empty clause");
    dialogue_.clauses[clause_index].span_end = int(dialogue_.tokens.size());
    dialogue_.utterances[utt_index].clauses.push_back(clause_index);
  }

  NounPhrase parse_np_attributes(const Tag& tag) {
    check_attributes(
        tag, {"ID", "HEAD", "GEN", "NUM", "PER", "CAT", "DEF", "HPOS", "MOD"},
        {"ID", "HEAD"});
    NounPhrase np;
    np.id = attribute(tag, "ID")->value;
    np.head_lemma = attribute(tag, "HEAD")->value;
    if (const Attribute* a = attribute(tag, "GEN")) np.gender = parse_gender(*a);
    if (const Attribute* a = attribute(tag, "NUM")) np.number = parse_number(*a);
    if (const Attribute* a = attribute(tag, "PER")) np.person = parse_person(*a);
    if (const Attribute* a = attribute(tag, "CAT"))
      np.category = parse_category(*a);
    if (const Attribute* a = attribute(tag, "DEF"))
      np.definiteness = parse_definiteness(*a);
    if (const Attribute* a = attribute(tag, "MOD")) np.modifies_np = a->value;
    return np;
  }

  int parse_hpos(const Tag& tag) {
    const Attribute* a = attribute(tag, "HPOS");
    if (!a) return -1;
    try {
      std::size_t used = 0;
      int v = std::stoi(a->value, &used);
      if (used != a->value.size() || v < 0) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail(a->loc, "invalid-value", "HPOS must be a non-negative integer");
    }
  }

  // Returns the token span consumed; modifiers are appended to `modifiers`.
  std::pair<int, int> parse_inline_span(const Tag& tag,
                                        std::vector<Modifier>& modifiers) {
    int begin = int(dialogue_.tokens.size());
    for (;;) {
      scanner_.skip_whitespace();
      if (scanner_.eof())
        fail(tag.loc, "structural", "unterminated <" + tag.name + "> element");
      if (!scanner_.at_tag()) {
        dialogue_.tokens.push_back(scanner_.read_token());
        continue;
      }
      Tag child = next_tag();
      if (child.closing) {
        if (child.name != tag.name)
          fail(child.loc, "structural",
               "interleaved close tag </" + child.name + "> inside <" +
                   tag.name + ">");
        break;
      }
      if (child.name != "MODIF")
        fail(child.loc, "structural",
             "<" + tag.name + "> may only nest MODIF elements");
      check_attributes(child, {"KIND", "LEMMA"}, {"KIND", "LEMMA"});
      Modifier mod;
      mod.kind = parse_modifier_kind(*attribute(child, "KIND"));
      mod.lemma = attribute(child, "LEMMA")->value;
      if (mod.lemma.empty())
        fail(child.loc, "invalid-value", "MODIF LEMMA must be non-empty");
      modifiers.push_back(std::move(mod));
      if (!child.self_closing) {
        scanner_.skip_whitespace();
        Tag close = next_tag();
        if (!close.closing || close.name != "MODIF")
          fail(close.loc, "structural", "MODIF elements carry no text");
      }
    }
    int end = int(dialogue_.tokens.size());
    if (begin == end)
      fail(tag.loc, "structural", "<" + tag.name + "> element without tokens");
    return {begin, end};
  }

  void parse_inline_np(const Tag& tag, int utt_index, int clause_index,
                       std::optional<int> pair_id) {
    if (tag.self_closing)
      fail(tag.loc, "structural", "NP element without tokens");
    NounPhrase np = parse_np_attributes(tag);
    int hpos = parse_hpos(tag);
    auto [begin, end] = parse_inline_span(tag, np.modifiers);
    np.span_begin = begin;
    np.span_end = end;
    np.head_position = hpos < 0 ? end - 1 : begin + hpos;  // default: last token
    if (np.head_position >= end)
      fail(tag.loc, "invalid-value", "HPOS outside the NP span");
    np.utterance = utt_index;
    np.clause = clause_index;
    np.pair = pair_id;
    register_np(std::move(np), tag.loc);
  }

  void parse_inline_ana(const Tag& tag, int utt_index, int clause_index,
                        std::optional<int> pair_id) {
    if (tag.self_closing)
      fail(tag.loc, "structural", "ANA element without tokens");
    check_attributes(tag,
                     {"ID", "TYPE", "GEN", "NUM", "PER", "HPOS", "ANT", "MOD"},
                     {"ID", "TYPE"});
    Anaphor ana;
    ana.id = attribute(tag, "ID")->value;
    ana.kind = parse_anaphor_kind(*attribute(tag, "TYPE"));
    if (const Attribute* a = attribute(tag, "GEN")) ana.gender = parse_gender(*a);
    if (const Attribute* a = attribute(tag, "NUM")) ana.number = parse_number(*a);
    if (const Attribute* a = attribute(tag, "PER")) ana.person = parse_person(*a);
    if (const Attribute* a = attribute(tag, "ANT")) ana.gold_antecedent = a->value;
    if (const Attribute* a = attribute(tag, "MOD")) ana.modifies_np = a->value;
    int hpos = parse_hpos(tag);
    auto [begin, end] = parse_inline_span(tag, ana.modifiers);
    ana.span_begin = begin;
    ana.span_end = end;
    ana.head_position = hpos < 0 ? begin : begin + hpos;  // default: first token
    if (ana.head_position >= end)
      fail(tag.loc, "invalid-value", "HPOS outside the ANA span");
    ana.utterance = utt_index;
    ana.clause = clause_index;
    ana.pair = pair_id;
    if (!anaphor_ids_.insert(ana.id).second)
      fail(tag.loc, "duplicate-id", "duplicate anaphor id " + ana.id);
    anaphor_locs_.emplace_back(int(dialogue_.anaphors.size()), tag.loc);
    dialogue_.anaphors.push_back(std::move(ana));
  }

  void parse_inline_vb(const Tag& tag, int clause_index) {
    check_attributes(tag, {"LEMMA"}, {"LEMMA"});
    if (tag.self_closing)
      fail(tag.loc, "structural", "VB element without tokens");
    VerbChunk vb;
    vb.lemma = attribute(tag, "LEMMA")->value;
    vb.clause = clause_index;
    vb.span_begin = int(dialogue_.tokens.size());
    for (;;) {
      scanner_.skip_whitespace();
      if (scanner_.eof())
        fail(tag.loc, "structural", "unterminated <VB> element");
      if (!scanner_.at_tag()) {
        dialogue_.tokens.push_back(scanner_.read_token());
        continue;
      }
      Tag close = next_tag();
      if (!close.closing || close.name != "VB")
        fail(close.loc, "structural", "VB elements cannot nest");
      break;
    }
    vb.span_end = int(dialogue_.tokens.size());
    if (vb.span_begin == vb.span_end)
      fail(tag.loc, "structural", "VB element without tokens");
    dialogue_.verbs.push_back(std::move(vb));
  }

  void register_np(NounPhrase np, Loc loc) {
    if (!np_ids_.insert(np.id).second)
      fail(loc, "duplicate-id", "duplicate NP id " + np.id);
    np_locs_.emplace_back(int(dialogue_.nps.size()), loc);
    dialogue_.nps.push_back(std::move(np));
  }

  void resolve_references() {
    std::vector<Diagnostic> errors;
    auto missing = [&](Loc loc, const std::string& code,
                       const std::string& message) {
      Diagnostic d;
      d.severity = Severity::Error;
      d.line = loc.line;
      d.column = loc.column;
      d.code = code;
      d.message = message;
      errors.push_back(std::move(d));
    };
    if (topic_ref_) {
      if (!np_ids_.count(*topic_ref_))
        missing(topic_loc_, "dangling-reference",
                "TOPIC REF names unknown NP " + *topic_ref_);
      else
        dialogue_.topic = *topic_ref_;
    }
    for (auto& [index, loc] : anaphor_locs_) {
      const Anaphor& ana = dialogue_.anaphors[index];
      if (ana.gold_antecedent && !np_ids_.count(*ana.gold_antecedent))
        missing(loc, "dangling-antecedent",
                "dangling antecedent reference " + *ana.gold_antecedent +
                    " on anaphor " + ana.id);
      if (ana.modifies_np && !np_ids_.count(*ana.modifies_np))
        missing(loc, "dangling-reference",
                "MOD names unknown NP " + *ana.modifies_np + " on anaphor " +
                    ana.id);
    }
    for (auto& [index, loc] : np_locs_) {
      const NounPhrase& np = dialogue_.nps[index];
      if (np.modifies_np && !np_ids_.count(*np.modifies_np))
        missing(loc, "dangling-reference",
                "MOD names unknown NP " + *np.modifies_np + " on NP " + np.id);
    }
    if (!errors.empty()) throw ParseAbort{errors.front()};
  }

  void finalize() {
    for (auto& [pair_id, children] : pair_children_) {
      for (AdjacencyPair& pair : dialogue_.pairs)
        if (pair.id == pair_id) pair.children = children;
    }
    auto first_clause_verb = [&](int clause_index) -> const VerbChunk* {
      const VerbChunk* found = nullptr;
      for (const VerbChunk& vb : dialogue_.verbs) {
        if (vb.clause == clause_index &&
            (!found || vb.span_begin < found->span_begin))
          found = &vb;
      }
      return found;
    };
    auto finish = [&](auto& item) {
      if (item.utterance < 0) return;  // synthetic topic entry
      const Utterance& utt = dialogue_.utterances[item.utterance];
      item.utterance_position = classify_utterance_position(
          item.head_position - utt.span_begin, utt.span_end - utt.span_begin);
      if (const VerbChunk* vb = first_clause_verb(item.clause)) {
        item.verb_lemma = vb->lemma;
        item.verb_position = item.head_position < vb->span_begin
                                 ? VerbPosition::Before
                                 : VerbPosition::After;
      } else {
        item.verb_lemma.reset();
        item.verb_position = VerbPosition::NoVerb;
      }
    };
    for (NounPhrase& np : dialogue_.nps) finish(np);
    for (Anaphor& ana : dialogue_.anaphors) finish(ana);
    dialogue_.reindex();
  }

  // Corpus lint: advisory findings that do not block the dialogue.
  void lint() {
    if (!warnings_) return;
    auto warn = [&](Loc loc, const std::string& code,
                    const std::string& message) {
      Diagnostic d;
      d.severity = Severity::Warning;
      d.line = loc.line;
      d.column = loc.column;
      d.code = code;
      d.message = message;
      warnings_->push_back(std::move(d));
    };
    for (const auto& [index, loc] : anaphor_locs_) {
      const Anaphor& ana = dialogue_.anaphors[index];
      if (!ana.gold_antecedent) {
        warn(loc, "missing-gold-antecedent",
             "anaphor " + ana.id + " carries no gold antecedent");
        continue;
      }
      const NounPhrase* np = dialogue_.find_np(*ana.gold_antecedent);
      if (np && np->head_position >= 0 &&
          np->head_position >= ana.head_position &&
          (!dialogue_.topic || *dialogue_.topic != np->id))
        warn(loc, "cataphoric-link", "gold antecedent " + np->id +
                                         " does not precede anaphor " + ana.id);
    }
    for (const auto& [index, loc] : np_locs_) {
      const NounPhrase& np = dialogue_.nps[index];
      if (np.gender == Gender::Unknown && np.number == NumberValue::Unknown &&
          np.person == PersonValue::Unknown)
        warn(loc, "unknown-features",
             "NP " + np.id + " has all-unknown agreement features");
    }
  }

  Scanner scanner_;
  Dialogue dialogue_;
  std::vector<Diagnostic>* warnings_ = nullptr;
  std::optional<std::string> topic_ref_;
  Loc topic_loc_;
  std::set<std::string> np_ids_, anaphor_ids_, utterance_ids_, clause_ids_;
  std::set<int> pair_ids_;
  std::vector<int> pair_open_order_;
  std::map<int, std::vector<StructureChild>> pair_children_;
  std::vector<std::pair<int, Loc>> anaphor_locs_;
  std::vector<std::pair<int, Loc>> np_locs_;
};

void append_attr(std::string& out, std::string_view name,
                 std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  out += value;
  out += '"';
}

std::string np_open_tag(const NounPhrase& np) {
  std::string out = "<NP";
  append_attr(out, "ID", np.id);
  append_attr(out, "HEAD", np.head_lemma);
  append_attr(out, "GEN", to_string(np.gender));
  append_attr(out, "NUM", to_string(np.number));
  append_attr(out, "PER", to_string(np.person));
  append_attr(out, "CAT", to_string(np.category));
  append_attr(out, "DEF", to_string(np.definiteness));
  if (!np.synthetic_topic)
    append_attr(out, "HPOS", std::to_string(np.head_position - np.span_begin));
  if (np.modifies_np) append_attr(out, "MOD", *np.modifies_np);
  return out;
}

std::string modifier_tags(const std::vector<Modifier>& modifiers) {
  std::string out;
  for (const Modifier& mod : modifiers) {
    out += "<MODIF";
    append_attr(out, "KIND", to_string(mod.kind));
    append_attr(out, "LEMMA", mod.lemma);
    out += "/>";
  }
  return out;
}

class Serializer {
 public:
  explicit Serializer(const Dialogue& d) : d_(d) {}

  std::string run() {
    out_ = "<DIALOGUE";
    append_attr(out_, "ID", d_.id);
    out_ += ">\n";
    if (d_.topic) {
      const NounPhrase* np = d_.find_np(*d_.topic);
      if (np && np->synthetic_topic) {
        out_ += "<TOPIC>\n";
        out_ += np_open_tag(*np);
        out_ += "/>\n</TOPIC>\n";
      } else {
        out_ += "<TOPIC";
        append_attr(out_, "REF", *d_.topic);
        out_ += "/>\n";
      }
    }
    for (const StructureChild& child : d_.top_level) emit_child(child);
    out_ += "</DIALOGUE>\n";
    return std::move(out_);
  }

 private:
  void emit_child(const StructureChild& child) {
    if (child.is_pair)
      emit_pair(*d_.find_pair(child.value));
    else
      emit_turn(d_.turns[child.value]);
  }

  void emit_pair(const AdjacencyPair& pair) {
    out_ += "<AP";
    append_attr(out_, "ID", std::to_string(pair.id));
    out_ += ">\n";
    for (const StructureChild& child : pair.children) emit_child(child);
    out_ += "</AP>\n";
  }

  void emit_turn(const Turn& turn) {
    const bool continuing = turn.kind == TurnKind::Continuing;
    if (continuing) {
      out_ += "<CT";
    } else {
      out_ += "<IT";
      append_attr(out_, "TYPE",
                  turn.kind == TurnKind::Initiative ? "I" : "R");
    }
    append_attr(out_, "SPEAKER", turn.speaker);
    out_ += ">\n";
    for (int utt_index : turn.utterances) {
      const Utterance& utt = d_.utterances[utt_index];
      out_ += "<U";
      append_attr(out_, "ID", utt.id);
      out_ += ">\n";
      for (int clause_index : utt.clauses) emit_clause(clause_index);
      out_ += "</U>\n";
    }
    out_ += continuing ? "</CT>\n" : "</IT>\n";
  }

  void emit_clause(int clause_index) {
    const Clause& clause = d_.clauses[clause_index];
    out_ += "<CL";
    append_attr(out_, "ID", clause.id);
    out_ += ">";

    struct Inline {
      int begin, end;
      std::string open;
      const char* close;
    };
    std::vector<Inline> inlines;
    for (const NounPhrase& np : d_.nps) {
      if (!np.synthetic_topic && np.clause == clause_index)
        inlines.push_back({np.span_begin, np.span_end,
                           np_open_tag(np) + ">" + modifier_tags(np.modifiers),
                           "</NP>"});
    }
    for (const Anaphor& ana : d_.anaphors) {
      if (ana.clause != clause_index) continue;
      std::string open = "<ANA";
      append_attr(open, "ID", ana.id);
      append_attr(open, "TYPE", to_string(ana.kind));
      append_attr(open, "GEN", to_string(ana.gender));
      append_attr(open, "NUM", to_string(ana.number));
      append_attr(open, "PER", to_string(ana.person));
      append_attr(open, "HPOS",
                  std::to_string(ana.head_position - ana.span_begin));
      if (ana.gold_antecedent) append_attr(open, "ANT", *ana.gold_antecedent);
      if (ana.modifies_np) append_attr(open, "MOD", *ana.modifies_np);
      open += ">" + modifier_tags(ana.modifiers);
      inlines.push_back({ana.span_begin, ana.span_end, std::move(open), "</ANA>"});
    }
    for (const VerbChunk& vb : d_.verbs) {
      if (vb.clause != clause_index) continue;
      std::string open = "<VB";
      append_attr(open, "LEMMA", vb.lemma);
      open += ">";
      inlines.push_back({vb.span_begin, vb.span_end, std::move(open), "</VB>"});
    }
    std::sort(inlines.begin(), inlines.end(),
              [](const Inline& a, const Inline& b) { return a.begin < b.begin; });

    std::size_t next = 0;
    bool space = false;
    for (int pos = clause.span_begin; pos < clause.span_end; ++pos) {
      if (next < inlines.size() && inlines[next].begin == pos) {
        if (space) out_ += ' ';
        out_ += inlines[next].open;
        space = false;
      }
      if (space) out_ += ' ';
      out_ += d_.tokens[pos];
      space = true;
      if (next < inlines.size() && inlines[next].end == pos + 1) {
        out_ += inlines[next].close;
        ++next;
      }
    }
    out_ += "</CL>\n";
  }

  const Dialogue& d_;
  std::string out_;
};

}  // namespace

ParseResult parse_dialogue(std::string_view text) {
  ParseResult result;
  try {
    Parser parser(text);
    result.dialogue = parser.parse(&result.diagnostics);
  } catch (const ParseAbort& abort) {
    result.diagnostics.push_back(abort.diagnostic);
  }
  return result;
}

std::string serialize_dialogue(const Dialogue& dialogue) {
  return Serializer(dialogue).run();
}

std::vector<Diagnostic> validate_corpus(const std::vector<CorpusFile>& files) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen_ids;
  for (const CorpusFile& file : files) {
    ParseResult result = parse_dialogue(file.text);
    for (Diagnostic d : result.diagnostics) {
      d.source = file.name;
      out.push_back(std::move(d));
    }
    if (!result.ok()) continue;
    if (!seen_ids.insert(result.dialogue->id).second) {
      Diagnostic d;
      d.severity = Severity::Error;
      d.source = file.name;
      d.code = "duplicate-dialogue-id";
      d.message = "duplicate dialogue id " + result.dialogue->id;
      out.push_back(std::move(d));
    }
  }
  return out;
}

bool CorpusLoad::ok() const {
  return std::none_of(diagnostics.begin(), diagnostics.end(),
                      [](const Diagnostic& d) {
                        return d.severity == Severity::Error;
                      });
}

CorpusLoad parse_corpus(const std::vector<CorpusFile>& files) {
  CorpusLoad load;
  std::set<std::string> seen_ids;
  for (const CorpusFile& file : files) {
    ParseResult result = parse_dialogue(file.text);
    for (Diagnostic d : result.diagnostics) {
      d.source = file.name;
      load.diagnostics.push_back(std::move(d));
    }
    if (!result.ok()) continue;
    if (!seen_ids.insert(result.dialogue->id).second) {
      Diagnostic d;
      d.severity = Severity::Error;
      d.source = file.name;
      d.code = "duplicate-dialogue-id";
      d.message = "duplicate dialogue id " + result.dialogue->id;
      load.diagnostics.push_back(std::move(d));
      continue;
    }
    load.corpus.dialogues.push_back(std::move(*result.dialogue));
  }
  std::sort(load.corpus.dialogues.begin(), load.corpus.dialogues.end(),
            [](const Dialogue& a, const Dialogue& b) { return a.id < b.id; });
  return load;
}

std::vector<CorpusFile> read_corpus_files(const std::vector<std::string>& paths,
                                          std::vector<Diagnostic>& diagnostics) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  auto push_error = [&](const std::string& path, const std::string& message) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.source = path;
    d.code = "unreadable-path";
    d.message = message;
    diagnostics.push_back(std::move(d));
  };
  for (const std::string& path : paths) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      std::vector<std::string> entries;
      for (const auto& entry : fs::directory_iterator(path, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".dlg")
          entries.push_back(entry.path().string());
      }
      std::sort(entries.begin(), entries.end());
      names.insert(names.end(), entries.begin(), entries.end());
    } else if (fs::is_regular_file(path, ec)) {
      names.push_back(path);
    } else {
      push_error(path, "no such file or directory");
    }
  }
  std::vector<CorpusFile> files;
  for (const std::string& name : names) {
    std::ifstream in(name, std::ios::binary);
    if (!in) {
      push_error(name, "cannot open file");
      continue;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    files.push_back({name, buffer.str()});
  }
  return files;
}

std::string format_diagnostic(const Diagnostic& diagnostic) {
  std::ostringstream out;
  out << (diagnostic.severity == Severity::Error ? "error" : "warning");
  out << " [" << diagnostic.code << "]";
  if (!diagnostic.source.empty()) out << " " << diagnostic.source;
  if (diagnostic.line > 0)
    out << ":" << diagnostic.line << ":" << diagnostic.column;
  out << ": " << diagnostic.message;
  return out.str();
}

}  // namespace ardi
