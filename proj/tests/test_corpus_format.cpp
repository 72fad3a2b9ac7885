#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "ardi/corpus_format.hpp"
#include "doctest.h"
#include "support/load.hpp"
#include "support/synth.hpp"

using namespace ardi;

namespace {

const Diagnostic& first_error(const ParseResult& result) {
  REQUIRE_FALSE(result.ok());
  REQUIRE_FALSE(result.diagnostics.empty());
  return result.diagnostics.front();
}

}  // namespace

TEST_CASE("the exchange fragment parses into the documented structure") {
  Dialogue d = test::parse_file("docs/golden/exchange.dlg");
  CHECK(d.id == "exchange");
  REQUIRE(d.topic.has_value());
  const NounPhrase* topic = d.find_np(*d.topic);
  REQUIRE(topic != nullptr);
  CHECK(topic->head_lemma == "tren");
  CHECK(topic->synthetic_topic);

  REQUIRE(d.pairs.size() == 2);
  const AdjacencyPair& ap4 = *d.find_pair(4);
  const AdjacencyPair& ap5 = *d.find_pair(5);
  CHECK_FALSE(ap4.parent.has_value());
  CHECK(ap5.parent == 4);

  // AP4 children: initiative turn, nested AP5, reaction turn
  REQUIRE(ap4.children.size() == 3);
  CHECK_FALSE(ap4.children[0].is_pair);
  CHECK(d.turns[ap4.children[0].value].kind == TurnKind::Initiative);
  CHECK(ap4.children[1].is_pair);
  CHECK(ap4.children[1].value == 5);
  CHECK_FALSE(ap4.children[2].is_pair);
  CHECK(d.turns[ap4.children[2].value].kind == TurnKind::Reaction);
  REQUIRE(ap5.children.size() == 2);
}

TEST_CASE("serialization is canonical and byte-stable") {
  Dialogue d = test::parse_file("docs/golden/exchange.dlg");
  CHECK(serialize_dialogue(d) == test::read_file("docs/golden/exchange_canonical.dlg"));
}

TEST_CASE("parse then serialize is the identity on every bundled dialogue") {
  std::vector<Diagnostic> io;
  for (const CorpusFile& file : read_corpus_files({"corpus"}, io)) {
    ParseResult original = parse_dialogue(file.text);
    REQUIRE(original.ok());
    ParseResult reparsed = parse_dialogue(serialize_dialogue(*original.dialogue));
    REQUIRE(reparsed.ok());
    CHECK(*original.dialogue == *reparsed.dialogue);
  }
  CHECK(io.empty());
}

TEST_CASE("round-trip holds on random dialogues too") {
  std::mt19937 rng(11);
  for (int i = 0; i < 80; ++i) {
    Dialogue d = synth::dialogue(rng, "s" + std::to_string(i), {});
    ParseResult reparsed = parse_dialogue(serialize_dialogue(d));
    REQUIRE(reparsed.ok());
    CHECK(d == *reparsed.dialogue);
  }
}

TEST_CASE("a dialogue without adjacency pairs serializes without AP tags") {
  Dialogue d = test::parse_text(
      "<DIALOGUE ID=\"plain\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
      "<CL ID=\"c1\">buenos días .</CL>\n</U>\n</IT>\n"
      "<IT TYPE=\"R\" SPEAKER=\"B\">\n<U ID=\"u2\">\n"
      "<CL ID=\"c2\">hola .</CL>\n</U>\n</IT>\n</DIALOGUE>\n");
  std::string text = serialize_dialogue(d);
  CHECK(text.find("<AP") == std::string::npos);
  ParseResult reparsed = parse_dialogue(text);
  REQUIRE(reparsed.ok());
  CHECK(d == *reparsed.dialogue);
}

TEST_CASE("parsing is deterministic") {
  std::string text = test::read_file("corpus/d01.dlg");
  ParseResult a = parse_dialogue(text);
  ParseResult b = parse_dialogue(text);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(*a.dialogue == *b.dialogue);
}

TEST_CASE("structural errors name the offending tag and location") {
  ParseResult result = parse_dialogue(
      "<DIALOGUE ID=\"x\">\n<AP ID=\"1\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n"
      "<U ID=\"u1\">\n<CL ID=\"c1\">hola .</CL>\n</U>\n</IT>\n</DIALOGUE>\n");
  const Diagnostic& d = first_error(result);
  CHECK(d.code == "structural");
  CHECK(d.message.find("AP") != std::string::npos);
  CHECK(d.line == 8);
}

TEST_CASE("unknown turn types are value errors") {
  ParseResult result = parse_dialogue(
      "<DIALOGUE ID=\"x\">\n<IT TYPE=\"X\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
      "<CL ID=\"c1\">hola .</CL>\n</U>\n</IT>\n</DIALOGUE>\n");
  const Diagnostic& d = first_error(result);
  CHECK(d.code == "invalid-value");
  CHECK(d.message == "unknown turn type X");
  CHECK(d.line == 2);
}

TEST_CASE("dangling antecedent references are reference errors") {
  ParseResult result = parse_dialogue(
      "<DIALOGUE ID=\"x\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
      "<CL ID=\"c1\"><ANA ID=\"a1\" TYPE=\"PRON\" ANT=\"np99\">él</ANA> va"
      " .</CL>\n</U>\n</IT>\n</DIALOGUE>\n");
  const Diagnostic& d = first_error(result);
  CHECK(d.code == "dangling-antecedent");
  CHECK(d.message.find("np99") != std::string::npos);
}

TEST_CASE("interleaved close tags, stray text and bad ids are rejected") {
  CHECK(first_error(parse_dialogue("<DIALOGUE ID=\"x\">\n<AP ID=\"1\">\n"
                                   "<IT TYPE=\"I\" SPEAKER=\"A\">\n"
                                   "<U ID=\"u1\">\n<CL ID=\"c1\">hola .</CL>\n"
                                   "</U>\n</AP>\n</IT>\n</DIALOGUE>\n"))
            .code == "structural");
  CHECK(first_error(parse_dialogue("<DIALOGUE ID=\"x\">\ntexto suelto\n"
                                   "</DIALOGUE>\n"))
            .code == "structural");
  CHECK(first_error(parse_dialogue(
                        "<DIALOGUE ID=\"x\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n"
                        "<U ID=\"u1\">\n<CL ID=\"c1\">"
                        "<NP ID=\"n1\" HEAD=\"x\">a</NP> "
                        "<NP ID=\"n1\" HEAD=\"y\">b</NP> .</CL>\n</U>\n</IT>\n"
                        "</DIALOGUE>\n"))
            .code == "duplicate-id");
  CHECK(first_error(parse_dialogue(
                        "<DIALOGUE ID=\"x\">\n<AP ID=\"2\">\n"
                        "<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
                        "<CL ID=\"c1\">hola .</CL>\n</U>\n</IT>\n</AP>\n"
                        "<AP ID=\"1\">\n<IT TYPE=\"R\" SPEAKER=\"B\">\n"
                        "<U ID=\"u2\">\n<CL ID=\"c2\">adiós .</CL>\n</U>\n"
                        "</IT>\n</AP>\n</DIALOGUE>\n"))
            .code == "ap-id-order");
  CHECK(first_error(parse_dialogue(
                        "<DIALOGUE ID=\"x\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n"
                        "<U ID=\"u1\">\n<CL ID=\"c1\"></CL>\n</U>\n</IT>\n"
                        "</DIALOGUE>\n"))
            .code == "structural");
  CHECK(first_error(parse_dialogue(
                        "<DIALOGUE ID=\"x\">\n<IT TYPE=\"I\" SPEAKER=\"A\" "
                        "MOOD=\"odd\">\n<U ID=\"u1\">\n"
                        "<CL ID=\"c1\">hola .</CL>\n</U>\n</IT>\n"
                        "</DIALOGUE>\n"))
            .code == "unknown-attribute");
  CHECK(first_error(parse_dialogue(
                        "<DIALOGUE ID=\"x\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n"
                        "<U ID=\"u1\">\n<CL ID=\"c1\">"
                        "<NP ID=\"n1\" HEAD=\"x\" HPOS=\"5\">uno dos</NP> .</CL>\n"
                        "</U>\n</IT>\n</DIALOGUE>\n"))
            .code == "invalid-value");
}

TEST_CASE("validate accepts a clean corpus and reports lint warnings") {
  std::vector<CorpusFile> clean = {
      {"d01.dlg", test::read_file("corpus/d01.dlg")},
      {"exchange.dlg", test::read_file("docs/golden/exchange.dlg")}};
  CHECK(validate_corpus(clean).empty());

  std::vector<CorpusFile> warned = {
      {"w.dlg",
       "<DIALOGUE ID=\"w\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
       "<CL ID=\"c1\"><ANA ID=\"a1\" TYPE=\"PRON\">él</ANA> ve "
       "<NP ID=\"n1\" HEAD=\"cosa\">la cosa</NP> .</CL>\n</U>\n</IT>\n"
       "</DIALOGUE>\n"}};
  std::vector<Diagnostic> diagnostics = validate_corpus(warned);
  REQUIRE(diagnostics.size() == 2);
  CHECK(diagnostics[0].severity == Severity::Warning);
  CHECK(diagnostics[0].code == "missing-gold-antecedent");
  CHECK(diagnostics[1].code == "unknown-features");

  std::vector<CorpusFile> cataphor = {
      {"c.dlg",
       "<DIALOGUE ID=\"c\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
       "<CL ID=\"c1\"><ANA ID=\"a1\" TYPE=\"PRON\" GEN=\"M\" NUM=\"S\" "
       "PER=\"3\" ANT=\"n1\">él</ANA> ve <NP ID=\"n1\" HEAD=\"tren\" "
       "GEN=\"M\" NUM=\"S\" PER=\"3\">el tren</NP> .</CL>\n</U>\n</IT>\n"
       "</DIALOGUE>\n"}};
  diagnostics = validate_corpus(cataphor);
  REQUIRE(diagnostics.size() == 1);
  CHECK(diagnostics[0].code == "cataphoric-link");

  // errors come back as diagnostics, never as exceptions
  std::vector<CorpusFile> broken = {{"b.dlg", "<DIALOGUE ID=\"b\">"}};
  diagnostics = validate_corpus(broken);
  REQUIRE_FALSE(diagnostics.empty());
  CHECK(diagnostics[0].severity == Severity::Error);
  CHECK(diagnostics[0].source == "b.dlg");
}

TEST_CASE("the bundled corpus triggers exactly the documented warning") {
  std::vector<Diagnostic> io;
  std::vector<Diagnostic> diagnostics =
      validate_corpus(read_corpus_files({"corpus"}, io));
  REQUIRE(diagnostics.size() == 1);
  CHECK(diagnostics[0].severity == Severity::Warning);
  CHECK(diagnostics[0].code == "unknown-features");
}

TEST_CASE("mutated input never crashes the parser") {
  std::string base = test::read_file("corpus/d01.dlg");
  std::mt19937 rng(97);
  const char garbage[] = "<>/\"= AXZ\n";
  for (int round = 0; round < 400; ++round) {
    std::string text = base;
    int edits = 1 + int(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      std::size_t at = rng() % text.size();
      switch (rng() % 3) {
        case 0: text[at] = garbage[rng() % (sizeof(garbage) - 1)]; break;
        case 1: text.erase(at, 1 + rng() % 8); break;
        default: text.insert(at, 1, garbage[rng() % (sizeof(garbage) - 1)]);
      }
      if (text.empty()) text = "<";
    }
    ParseResult result = parse_dialogue(text);
    if (!result.ok()) CHECK_FALSE(result.diagnostics.empty());
  }
}

TEST_CASE("every diagnostic carries a location") {
  ParseResult result = parse_dialogue(
      "<DIALOGUE ID=\"x\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n"
      "<CL ID=\"c1\">hola\n<NP ID=\"n\" HEAD=\"x\" GEN=\"Q\">y</NP> .</CL>\n"
      "</U>\n</IT>\n</DIALOGUE>\n");
  const Diagnostic& d = first_error(result);
  CHECK(d.line == 5);
  CHECK(d.column > 0);

  // warnings are located too
  std::vector<CorpusFile> files = {{"d12.dlg", test::read_file("corpus/d12.dlg")}};
  std::vector<Diagnostic> warnings = validate_corpus(files);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].line > 0);
  CHECK(warnings[0].column > 0);
}
