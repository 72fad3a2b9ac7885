#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "ardi/accessibility.hpp"
#include "doctest.h"
#include "support/load.hpp"
#include "support/synth.hpp"

using namespace ardi;

namespace {

const NounPhrase* gold_topic(const Dialogue& d) {
  return d.topic ? d.find_np(*d.topic) : nullptr;
}

std::set<std::string> ids(const Dialogue& d, const CandidateSet& set) {
  std::set<std::string> out;
  for (const CandidateEntry& e : set.entries) out.insert(d.nps[e.np].id);
  return out;
}

}  // namespace

TEST_CASE("structural space: anaphor pair, previous pair, topic") {
  Dialogue d = test::parse_file("corpus/d01.dlg");
  const Anaphor& a1 = *d.find_anaphor("a1");
  CandidateSet space = structural_space(d, a1, gold_topic(d));
  CHECK(ids(d, space) == std::set<std::string>{"t", "n6", "n7"});
  CHECK(space.provenance_of(d.np_index("t")) == Provenance::Topic);
  CHECK(space.provenance_of(d.np_index("n6")) == Provenance::PreviousAp);
  CHECK(space.provenance_of(d.np_index("n7")) == Provenance::PreviousAp);
  // document order, positionless topic entry first
  CHECK(d.nps[space.entries.front().np].id == "t");
}

TEST_CASE("structural space includes enclosing pairs for nested anaphors") {
  Dialogue d = test::parse_file("corpus/d01.dlg");
  const Anaphor& a2 = *d.find_anaphor("a2");
  CandidateSet space = structural_space(d, a2, gold_topic(d));
  CHECK(ids(d, space) == std::set<std::string>{"t", "n6", "n7", "n8"});
  CHECK(space.provenance_of(d.np_index("n8")) == Provenance::EnclosingAp);
}

TEST_CASE("first pair of a dialogue has no previous or enclosing NPs") {
  Dialogue d = test::parse_file("corpus/d02.dlg");
  const Anaphor& a1 = *d.find_anaphor("a1");
  CandidateSet space = structural_space(d, a1, gold_topic(d));
  CHECK(ids(d, space) == std::set<std::string>{"n1", "n2"});
  CHECK(space.provenance_of(d.np_index("n1")) == Provenance::SameAp);
}

TEST_CASE("anaphor outside every pair degrades to own turn plus topic") {
  Dialogue d = test::parse_file("corpus/d12.dlg");
  const Anaphor& a4 = *d.find_anaphor("a4");
  CandidateSet space = structural_space(d, a4, gold_topic(d));
  CHECK(space.degraded);
  CHECK(ids(d, space) == std::set<std::string>{"n8", "t"});
  CHECK(space.provenance_of(d.np_index("n8")) == Provenance::SameAp);
}

TEST_CASE("full space takes every preceding NP plus the topic") {
  Dialogue d = test::parse_file("corpus/d01.dlg");
  const Anaphor& a1 = *d.find_anaphor("a1");
  CandidateSet space = full_space(d, a1, gold_topic(d));
  // n1..n7 precede the anaphor; the topic entry joins them
  CHECK(space.size() == 8);
  CHECK(space.provenance_of(d.np_index("n5")) == Provenance::Full);
  CHECK(space.provenance_of(d.np_index("t")) == Provenance::Topic);
}

TEST_CASE("full space of an anaphor with no preceding NPs is just the topic") {
  Dialogue d = test::parse_file("corpus/d12.dlg");
  const Anaphor& a1 = *d.find_anaphor("a1");
  // n1 and n2 precede a1 in d12; build a cleaner case inline
  Dialogue tiny = test::parse_text(
      "<DIALOGUE ID=\"x\">\n<TOPIC>\n<NP ID=\"t\" HEAD=\"tren\" GEN=\"M\" "
      "NUM=\"S\" PER=\"3\"/>\n</TOPIC>\n<AP ID=\"1\">\n"
      "<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n<CL ID=\"c1\">"
      "<ANA ID=\"a1\" TYPE=\"PRON\" GEN=\"M\" NUM=\"S\" PER=\"3\" "
      "ANT=\"t\">él</ANA> <VB LEMMA=\"llegar\">llega</VB> .</CL>\n</U>\n"
      "</IT>\n<IT TYPE=\"R\" SPEAKER=\"B\">\n<U ID=\"u2\">\n"
      "<CL ID=\"c2\">sí .</CL>\n</U>\n</IT>\n</AP>\n</DIALOGUE>\n");
  CandidateSet space =
      full_space(tiny, tiny.anaphors[0], gold_topic(tiny));
  CHECK(ids(tiny, space) == std::set<std::string>{"t"});
  (void)a1;
  (void)d;
}

TEST_CASE("window space covers the anaphor's utterance and n previous ones") {
  Dialogue d = test::parse_file("corpus/d09.dlg");
  const Anaphor& a1 = *d.find_anaphor("a1");  // same utterance as n1
  CandidateSet w0 = window_space(d, a1, 0, nullptr);
  CHECK(ids(d, w0) == std::set<std::string>{"n1"});

  // constructed five-utterance dialogue, one NP per utterance
  Dialogue five = test::parse_text(
      "<DIALOGUE ID=\"x\">\n<AP ID=\"1\">\n<IT TYPE=\"I\" SPEAKER=\"A\">\n"
      "<U ID=\"u1\">\n<CL ID=\"c1\"><NP ID=\"n1\" HEAD=\"uno\">uno</NP> .</CL>\n"
      "</U>\n<U ID=\"u2\">\n<CL ID=\"c2\"><NP ID=\"n2\" HEAD=\"dos\">dos</NP> "
      ".</CL>\n</U>\n<U ID=\"u3\">\n<CL ID=\"c3\"><NP ID=\"n3\" HEAD=\"tres\">"
      "tres</NP> .</CL>\n</U>\n</IT>\n<IT TYPE=\"R\" SPEAKER=\"B\">\n"
      "<U ID=\"u4\">\n<CL ID=\"c4\"><NP ID=\"n4\" HEAD=\"cuatro\">cuatro</NP> "
      ".</CL>\n</U>\n<U ID=\"u5\">\n<CL ID=\"c5\"><NP ID=\"n5\" HEAD=\"cinco\">"
      "cinco</NP> y <ANA ID=\"a1\" TYPE=\"PRON\" GEN=\"U\" NUM=\"U\" "
      "ANT=\"n1\">él</ANA> .</CL>\n</U>\n</IT>\n</AP>\n</DIALOGUE>\n");
  CandidateSet w2 = window_space(five, five.anaphors[0], 2, nullptr);
  CHECK(ids(five, w2) == std::set<std::string>{"n3", "n4", "n5"});

  // topic only enters when passed explicitly
  Dialogue d01 = test::parse_file("corpus/d01.dlg");
  const Anaphor& fig_a1 = *d01.find_anaphor("a1");
  CandidateSet without = window_space(d01, fig_a1, 3, nullptr);
  CHECK_FALSE(without.contains(d01.np_index("t")));
  CandidateSet with_topic = window_space(d01, fig_a1, 3, gold_topic(d01));
  CHECK(with_topic.provenance_of(d01.np_index("t")) == Provenance::Topic);
}

TEST_CASE("a window spanning the whole dialogue equals the full space minus "
          "the unseen topic") {
  Dialogue d = test::parse_file("corpus/d05.dlg");
  for (const Anaphor& anaphor : d.anaphors) {
    CandidateSet window = window_space(d, anaphor, 1000, nullptr);
    CandidateSet full = full_space(d, anaphor, nullptr);
    CHECK(ids(d, window) == ids(d, full));
  }
}

TEST_CASE("space properties hold on the corpus and random dialogues") {
  std::vector<Dialogue> dialogues;
  for (const Dialogue& d : test::load_corpus_dir("corpus").dialogues)
    dialogues.push_back(d);
  std::mt19937 rng(23);
  for (int i = 0; i < 80; ++i)
    dialogues.push_back(synth::dialogue(rng, "s" + std::to_string(i), {}));

  for (const Dialogue& d : dialogues) {
    const NounPhrase* topic = gold_topic(d);
    for (const Anaphor& anaphor : d.anaphors) {
      CandidateSet structural = structural_space(d, anaphor, topic);
      CandidateSet full = full_space(d, anaphor, topic);

      // each candidate appears exactly once, in document order
      std::set<int> seen;
      int last_position = -2;
      for (const CandidateEntry& e : structural.entries) {
        CHECK(seen.insert(e.np).second);
        CHECK(d.nps[e.np].head_position > last_position);
        last_position = d.nps[e.np].head_position;
        if (d.nps[e.np].id != (topic ? topic->id : ""))
          CHECK(d.nps[e.np].head_position < anaphor.head_position);
      }

      // structural is contained in full plus the topic
      for (const CandidateEntry& e : structural.entries) {
        bool in_full = full.contains(e.np);
        bool is_topic = topic && d.nps[e.np].id == topic->id;
        CHECK((in_full || is_topic));
      }

      // growing the window never loses candidates
      std::size_t previous_size = 0;
      for (int n = 0; n <= 6; ++n) {
        CandidateSet window = window_space(d, anaphor, n, nullptr);
        CHECK(window.size() >= previous_size);
        previous_size = window.size();
        for (const CandidateEntry& e : window.entries)
          CHECK(full.contains(e.np));
      }
    }
  }
}
