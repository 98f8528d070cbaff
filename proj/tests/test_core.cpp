#include <gtest/gtest.h>

#include "mwe_triage/core.hpp"

using namespace mwe;

TEST(Labels, CategoryStringsRoundTrip) {
  for (Label l : {Label::VID, Label::LVC_FULL, Label::LVC_CAUSE, Label::LVC_ASP})
    EXPECT_EQ(label_parse(label_format(l)), l);
  EXPECT_EQ(label_parse("LVC.full"), Label::LVC_FULL);
  EXPECT_EQ(label_parse(""), Label::UNANNOTATED);
  EXPECT_EQ(label_format(Label::NON_MWE), "");
  EXPECT_EQ(label_format(Label::UNANNOTATED), "");
}

TEST(Labels, RejectsUnknownCategory) {
  EXPECT_THROW(label_parse("LVC"), FormatError);
  EXPECT_THROW(label_parse("vid"), FormatError);
  EXPECT_THROW(label_format(Label::UNRESOLVED), std::logic_error);
}

TEST(Labels, DisplayNamesAreDistinct) {
  for (Label a : kAllLabels) {
    EXPECT_EQ(label_from_display(to_string(a)), a);
    for (Label b : kAllLabels)
      if (a != b) {
        EXPECT_NE(to_string(a), to_string(b));
      }
  }
  EXPECT_FALSE(is_mwe(Label::NON_MWE));
  EXPECT_FALSE(is_mwe(Label::UNANNOTATED));
  EXPECT_TRUE(is_mwe(Label::LVC_ASP));
}

TEST(Tests, NamesRoundTrip) {
  for (TestId t : kAllTests) EXPECT_EQ(test_from_string(to_string(t)), t);
  EXPECT_THROW(test_from_string("LVC5"), FormatError);
  for (AspectClass a : kAllAspects) EXPECT_EQ(aspect_from_string(to_string(a)), a);
  EXPECT_EQ(answer_from_string("NO"), Answer::NO);
}

TEST(Trace, CompactRendering) {
  DecisionTrace t;
  t.steps.push_back({TestId::LVC0, Answer::YES, EvidenceSource::lexicon("bain")});
  t.steps.push_back({TestId::LVC1, Answer::NO, EvidenceSource::human("s1")});
  t.leaf = Label::VID;
  EXPECT_EQ(to_string(t), "LVC0=YES(lex:bain) LVC1=NO(human:s1)");
  EXPECT_TRUE(t.contains(TestId::LVC1));
  EXPECT_FALSE(t.contains(TestId::VID2));
  EXPECT_EQ(t.answer_for(TestId::LVC0), Answer::YES);
}

TEST(Candidate, Describe) {
  Candidate c;
  c.verb_lemma = "tomber";
  c.prep = "en";
  c.pred_lemma = "panne";
  EXPECT_EQ(describe(c), "tomber en panne");
  c.prep.reset();
  EXPECT_EQ(describe(c), "tomber panne");
}
