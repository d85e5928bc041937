#include <gtest/gtest.h>

#include <filesystem>

#include "dmnprompt/pnml.hpp"
#include "test_support.hpp"
#include "xml_shuffle.hpp"

using namespace dmnprompt;
using namespace dmnprompt::pnml;
using testsupport::fixture;

namespace {

ParsedNet load(const std::string& name) { return load_pnml_file(fixture("pnml/" + name)); }

PnmlErrorKind error_of(const std::string& name) {
  try {
    (void)load(name);
  } catch (const PnmlError& e) {
    return e.kind();
  }
  ADD_FAILURE() << name << " loaded";
  return PnmlErrorKind::malformed_xml;
}

bool contains(const NetNarrative& n, const std::string& sentence) {
  for (const auto& s : n.sections) {
    if (std::find(s.sentences.begin(), s.sentences.end(), sentence) != s.sentences.end()) return true;
  }
  return false;
}

const std::vector<std::string> kValidNets = {"sequence.pnml", "and_split_join.pnml", "xor_operator.pnml",
                                             "resource.pnml", "loop.pnml", "disconnected.pnml", "unlabeled.pnml"};

}  // namespace

TEST(PnmlParse, Sequence) {
  const auto net = load("sequence.pnml").net;
  EXPECT_EQ(net.places.size(), 3u);
  EXPECT_EQ(net.transitions.size(), 2u);
  EXPECT_EQ(net.arcs.size(), 4u);
  EXPECT_EQ(net.initial_marking.at("p1"), 1);
  EXPECT_EQ(net.find_transition("t1")->label, "Receive application");
  EXPECT_EQ(net.find_transition("t1")->kind, TransitionKind::task);
}

TEST(PnmlParse, OperatorsAndResources) {
  const auto and_net = load("and_split_join.pnml").net;
  EXPECT_EQ(and_net.find_transition("t2")->kind, TransitionKind::and_split);
  EXPECT_EQ(and_net.find_transition("t5")->kind, TransitionKind::and_join);

  const auto xor_net = load("xor_operator.pnml").net;
  ASSERT_NE(xor_net.find_transition("x"), nullptr);
  EXPECT_EQ(xor_net.find_transition("x")->kind, TransitionKind::xor_split);
  EXPECT_EQ(xor_net.find_transition("x_op_1"), nullptr);
  EXPECT_EQ(xor_net.find_transition("j")->kind, TransitionKind::xor_join);
  EXPECT_EQ(xor_net.transitions.size(), 5u);

  const auto res = load("resource.pnml").net;
  EXPECT_EQ(res.find_transition("t2")->resource, "Fraud Investigator");
}

TEST(PnmlParse, WoPeDOperatorCodes) {
  EXPECT_EQ(kind_from_woped_operator(101), TransitionKind::and_split);
  EXPECT_EQ(kind_from_woped_operator(102), TransitionKind::and_join);
  EXPECT_EQ(kind_from_woped_operator(104), TransitionKind::xor_split);
  EXPECT_EQ(kind_from_woped_operator(105), TransitionKind::xor_join);
  EXPECT_FALSE(kind_from_woped_operator(103).has_value());
  EXPECT_FALSE(kind_from_woped_operator(0).has_value());
}

TEST(PnmlParse, WarningsForForeignData) {
  const auto parsed = load("unlabeled.pnml");
  ASSERT_EQ(parsed.warnings.size(), 1u);
  EXPECT_NE(parsed.warnings[0].find("OtherTool"), std::string::npos);
  EXPECT_EQ(parsed.net.find_transition("t2")->kind, TransitionKind::plain);
}

TEST(PnmlParse, Errors) {
  EXPECT_EQ(error_of("invalid/place_to_place.pnml"), PnmlErrorKind::non_bipartite_arc);
  EXPECT_EQ(error_of("invalid/dangling_arc.pnml"), PnmlErrorKind::dangling_arc);
  EXPECT_EQ(error_of("invalid/duplicate_id.pnml"), PnmlErrorKind::duplicate_id);
  EXPECT_EQ(error_of("invalid/malformed.pnml"), PnmlErrorKind::malformed_xml);
  try {
    (void)parse_pnml("<notpnml/>");
    FAIL();
  } catch (const PnmlError& e) {
    EXPECT_EQ(e.kind(), PnmlErrorKind::malformed_xml);
  }
}

TEST(Narrative, SequenceSentences) {
  const auto n = net_to_text(load("sequence.pnml").net);
  EXPECT_TRUE(contains(n, "'Check credit' follows 'Receive application'."));
  EXPECT_TRUE(contains(n, "Task 'Receive application' is performed by role 'Clerk'."));
  EXPECT_TRUE(contains(n, "Role 'Clerk' performs 'Receive application' and 'Check credit'."));
  ASSERT_EQ(n.sections.size(), 3u);
  EXPECT_EQ(n.sections[0].heading, "Tasks");
  EXPECT_EQ(n.sections[1].heading, "Control flow");
  EXPECT_EQ(n.sections[2].heading, "Resources");
  EXPECT_TRUE(n.warnings.empty());
}

TEST(Narrative, RoutingConstructs) {
  const auto a = net_to_text(load("and_split_join.pnml").net);
  EXPECT_TRUE(contains(a, "After 'Check identity', 'Query web service A' and 'Query web service B' occur in parallel."));
  EXPECT_TRUE(
      contains(a, "'Combine results' starts only after 'Query web service A' and 'Query web service B' have all completed."));
  const auto x = net_to_text(load("xor_operator.pnml").net);
  EXPECT_TRUE(contains(x, "After 'Decide', exactly one of 'Send approval' or 'Send rejection' is performed."));
  EXPECT_TRUE(contains(x, "'Archive' follows as soon as one of 'Send approval' or 'Send rejection' has completed."));
  const auto l = net_to_text(load("loop.pnml").net);
  EXPECT_TRUE(contains(l, "After 'Request changes', the process may return to 'Draft report', so the steps from 'Draft "
                          "report' to 'Request changes' may repeat."));
}

TEST(Narrative, ResourceAndDisconnected) {
  const auto r = net_to_text(load("resource.pnml").net);
  EXPECT_TRUE(contains(r, "Task 'Investigate fraud' is performed by role 'Fraud Investigator'."));
  const auto d = net_to_text(load("disconnected.pnml").net);
  EXPECT_EQ(d.warnings.size(), 1u);
  EXPECT_EQ(d.sections[1].heading, "Control flow (part 1)");
  EXPECT_EQ(d.sections[2].heading, "Control flow (part 2)");
}

TEST(Narrative, GoldenSnapshots) {
  for (const auto& f : kValidNets) {
    const auto text = net_to_text(load(f).net).to_text();
    const auto stem = std::filesystem::path(f).stem().string();
    EXPECT_TRUE(testsupport::matches_golden("narrative_" + stem + ".txt", text)) << f;
  }
}

TEST(Narrative, InvariantUnderElementOrder) {
  std::mt19937_64 rng(17);
  for (const auto& f : kValidNets) {
    const auto source = read_file(fixture("pnml/" + f));
    const auto expected = net_to_text(parse_pnml(source).net).to_text();
    const auto root = xml::parse(source);
    for (int k = 0; k < 50; ++k) {
      auto shuffled = root;
      testsupport::shuffle_children(shuffled, rng, {"net", "page"});
      const auto text = testsupport::serialize(shuffled);
      ASSERT_EQ(net_to_text(parse_pnml(text).net).to_text(), expected) << f << " permutation " << k;
    }
  }
}

TEST(Narrative, InvalidNetRejected) {
  PetriNet net;
  net.places.push_back({"p", "p"});
  net.places.push_back({"q", "q"});
  net.arcs.push_back({"p", "q"});
  EXPECT_THROW((void)net_to_text(net), PnmlError);
}

TEST(Narrative, EmptyNet) {
  const auto n = net_to_text(PetriNet{});
  EXPECT_FALSE(n.to_text().empty());
}
