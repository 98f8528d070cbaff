#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mwe_triage/session.hpp"
#include "support.hpp"

using namespace mwe;
using testing_support::fixture_corpus_ptr;
using testing_support::seed_lexicon_ptr;

namespace {

SessionState fresh(const std::string& id = "s1", TreeVariant v = TreeVariant::MODIFIED) {
  return session_start(fixture_corpus_ptr(), seed_lexicon_ptr(), v, id);
}

const Question& pending_for(const SessionState& s, const std::string& pred) {
  for (const auto& q : s.pending)
    if (q.candidate.pred_lemma == pred) return q;
  throw std::runtime_error("no pending question for " + pred);
}

// Exactly one of pending / verdicts holds each candidate.
void expect_partition(const SessionState& s) {
  for (const auto& c : s.candidates) {
    int in_pending = 0;
    for (const auto& q : s.pending) in_pending += q.candidate.id == c.id;
    EXPECT_EQ(in_pending + static_cast<int>(s.verdicts.count(c.id)), 1) << c.id;
  }
}

}  // namespace

TEST(Session, StartSplitsResolvedAndBlocked) {
  SessionState s = fresh();
  expect_partition(s);
  // Candidates without lexicon entries block at their first test.
  ASSERT_EQ(s.pending.size(), 4u);
  EXPECT_EQ(s.pending[0].candidate.pred_lemma, "voiture");
  EXPECT_EQ(s.pending[0].test, TestId::PPI1);
  EXPECT_EQ(pending_for(s, "train").test, TestId::LVC0);
  EXPECT_EQ(pending_for(s, "train").sentence_text, "Il [prend] le [train] .");
  EXPECT_EQ(s.verdicts.at(testing_support::fixture_candidate("prendre", "", "conscience").id).label,
            Label::LVC_ASP);
  for (const auto& q : s.pending) {
    ASSERT_FALSE(q.partial_trace.steps.empty());
    EXPECT_EQ(q.partial_trace.steps.back().test, q.test);
    EXPECT_EQ(q.question_id, make_question_id(q.candidate, q.test));
    EXPECT_FALSE(q.prompt.empty());
  }
}

TEST(Session, NoAtRootMovesIntoIdiomSubtree) {
  SessionState s = fresh();
  std::string qid = pending_for(s, "train").question_id;
  SessionState next = session_answer(s, qid, Answer::NO, "a vehicle", "2024-01-01T00:00:00Z");
  const Question& q = pending_for(next, "train");
  EXPECT_EQ(q.test, TestId::VID2);
  ASSERT_EQ(q.partial_trace.steps.size(), 2u);
  EXPECT_EQ(q.partial_trace.steps[0].evidence, EvidenceSource::human("s1"));
  ASSERT_EQ(next.log.size(), 1u);
  EXPECT_EQ(next.log[0].note, "a vehicle");
  EXPECT_EQ(next.log[0].test, TestId::LVC0);
  // The original state is untouched.
  EXPECT_EQ(pending_for(s, "train").test, TestId::LVC0);
}

TEST(Session, FinalAnswerResolvesCandidate) {
  SessionState s = fresh();
  std::size_t before = s.pending.size();
  std::string id = pending_for(s, "train").candidate.id;
  apply_answer(s, pending_for(s, "train").question_id, Answer::NO, "");
  apply_answer(s, pending_for(s, "train").question_id, Answer::NO, "");
  apply_answer(s, pending_for(s, "train").question_id, Answer::NO, "");
  EXPECT_EQ(s.pending.size(), before - 1);
  EXPECT_EQ(s.verdicts.at(id).label, Label::NON_MWE);
  expect_partition(s);
}

TEST(Session, HumanAspectJudgementGivesAspectualLvc) {
  // No lexicon entry: the annotator walks the modified tree to LVC.asp.
  SessionState s = fresh();
  std::string id = pending_for(s, "journal").candidate.id;
  for (Answer a : {Answer::YES, Answer::YES, Answer::YES, Answer::NO, Answer::YES, Answer::YES})
    apply_answer(s, pending_for(s, "journal").question_id, a, "");
  EXPECT_EQ(s.verdicts.at(id).label, Label::LVC_ASP);
  EXPECT_EQ(s.verdicts.at(id).trace.steps.back().test, TestId::ASP2);
}

TEST(Session, IdempotentAndErrors) {
  SessionState s = fresh();
  std::string qid = pending_for(s, "train").question_id;
  EXPECT_TRUE(apply_answer(s, qid, Answer::NO, ""));
  EXPECT_FALSE(apply_answer(s, qid, Answer::NO, "again"));
  EXPECT_EQ(s.log.size(), 1u);
  try {
    apply_answer(s, qid, Answer::YES, "");
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::ALREADY_RESOLVED);
  }
  try {
    apply_answer(s, "nope#LVC0", Answer::YES, "");
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::UNKNOWN_QUESTION);
  }
  std::string bain = testing_support::fixture_candidate("prendre", "", "bain").id;
  try {
    apply_answer(s, bain + "#LVC0", Answer::YES, "");
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::ALREADY_RESOLVED);
  }
  EXPECT_THROW(apply_answer(s, pending_for(s, "journal").question_id, Answer::UNKNOWN, ""),
               SessionError);
}

TEST(Session, RemainingWorkStrictlyDecreases) {
  std::mt19937 rng(3);
  for (int run = 0; run < 30; ++run) {
    SessionState s = fresh("live", run % 2 ? TreeVariant::BASELINE : TreeVariant::MODIFIED);
    while (!s.finished()) {
      std::size_t before = remaining_work(s);
      const Question& q = s.pending[rng() % s.pending.size()];
      apply_answer(s, q.question_id, rng() & 1u ? Answer::YES : Answer::NO, "");
      EXPECT_LT(remaining_work(s), before);
      expect_partition(s);
    }
    EXPECT_EQ(remaining_work(s), 0u);
  }
}

TEST(Session, ExportThenReplayReproducesVerdicts) {
  std::mt19937 rng(5);
  SessionState s = fresh("replay");
  for (int i = 0; i < 7 && !s.finished(); ++i)
    apply_answer(s, s.pending[rng() % s.pending.size()].question_id,
                 rng() & 1u ? Answer::YES : Answer::NO, "n" + std::to_string(i));
  SessionExport ex = session_export(s);
  std::istringstream log(ex.answers_log);
  auto records = read_answers_log(log);
  EXPECT_EQ(records, s.log);
  SessionState again = fresh("replay");
  session_replay(again, records);
  EXPECT_EQ(render_verdict_table(again), render_verdict_table(s));
  EXPECT_EQ(again.verdicts, s.verdicts);
  EXPECT_EQ(again.pending, s.pending);
  EXPECT_EQ(emit_cupt(session_export(again).corpus), emit_cupt(ex.corpus));
}

TEST(Session, ExportWritesVerdictLabels) {
  SessionState s = fresh();
  Corpus out = session_export(s).corpus;
  auto cs = extract_candidates(out);
  auto labels = read_annotations(out, cs);
  for (const auto& [id, v] : s.verdicts) {
    Label expected = is_mwe(v.label) ? v.label : Label::UNANNOTATED;
    EXPECT_EQ(labels.at(id), expected) << id;
  }
  // Blocked candidates keep their corpus annotation.
  auto voiture = testing_support::fixture_candidate("prendre", "à", "voiture");
  EXPECT_EQ(labels.at(voiture.id), Label::UNANNOTATED);
  EXPECT_NE(emit_cupt(out).find("LVC.asp"), std::string::npos);
}

TEST(Session, VerdictTableListsEveryCandidate) {
  SessionState s = fresh();
  std::string table = render_verdict_table(s);
  EXPECT_EQ(static_cast<std::size_t>(std::count(table.begin(), table.end(), '\n')),
            s.candidates.size() + 1);
  EXPECT_NE(table.find("UNRESOLVED"), std::string::npos);
}

TEST(AnswersLog, LineFormat) {
  AnswerRecord r{"2024-05-01T10:00:00Z", "s1", "a:1-2#LVC0", "a:1-2", TestId::LVC0, Answer::YES,
                 "tab\there"};
  std::string line = format_answer_line(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(line.rfind("{\"timestamp\":\"2024-05-01T10:00:00Z\",\"session_id\":\"s1\",", 0), 0u);
  EXPECT_EQ(parse_answer_line(line), r);
  EXPECT_THROW(parse_answer_line("{\"timestamp\":1}", 4), FormatError);
  std::istringstream bad("\n{oops\n");
  try {
    read_answers_log(bad);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}
