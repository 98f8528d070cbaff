#ifndef MWE_TRIAGE_SESSION_HPP
#define MWE_TRIAGE_SESSION_HPP

// Annotation sessions. Every candidate is classified in strict mode; the
// ones the lexicon cannot decide wait on a question for a human. Answers
// are folded back in and logged so a session can be replayed exactly.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwe_triage/answers.hpp"
#include "mwe_triage/classify.hpp"
#include "mwe_triage/core.hpp"
#include "mwe_triage/cupt.hpp"
#include "mwe_triage/lexicon.hpp"
#include "mwe_triage/tree.hpp"

namespace mwe {

class SessionError : public std::runtime_error {
 public:
  enum class Kind { UNKNOWN_SESSION, UNKNOWN_QUESTION, ALREADY_RESOLVED, INVALID_ANSWER };

  SessionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct SessionState {
  std::string session_id;
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<const Lexicon> lexicon;
  TreeVariant variant = TreeVariant::MODIFIED;
  std::vector<Candidate> candidates;  // corpus order
  std::map<std::string, std::pair<Answer, std::string>> answered;  // question id -> (answer, note)
  std::vector<Question> pending;  // at most one per blocked candidate, corpus order
  std::map<std::string, Verdict> verdicts;  // resolved candidates only
  std::vector<AnswerRecord> log;

  const Question* next_question() const { return pending.empty() ? nullptr : &pending.front(); }
  bool finished() const { return pending.empty(); }
};

inline std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline Verdict session_classify(const SessionState& s, const Candidate& c) {
  AnswerOracle oracle = [&](TestId t) -> std::pair<Answer, EvidenceSource> {
    auto r = evaluate_test(*s.lexicon, c, t);
    if (r.first != Answer::UNKNOWN) return r;
    auto it = s.answered.find(make_question_id(c, t));
    if (it != s.answered.end()) return {it->second.first, EvidenceSource::human(s.session_id)};
    return r;
  };
  Verdict v = classify_with(c, oracle, s.variant, Mode::STRICT);
  for (auto& q : v.pending)
    q.sentence_text =
        s.corpus->sentences.at(c.sentence_ref.sentence_index).text(c.sentence_ref.token_indices);
  return v;
}

inline const Candidate* find_candidate(const SessionState& s, const std::string& id) {
  for (const auto& c : s.candidates)
    if (c.id == id) return &c;
  return nullptr;
}

inline std::string candidate_of_question(const std::string& question_id) {
  auto hash = question_id.rfind('#');
  return hash == std::string::npos ? std::string() : question_id.substr(0, hash);
}

}  // namespace detail

inline SessionState session_start(std::shared_ptr<const Corpus> corpus,
                                  std::shared_ptr<const Lexicon> lexicon, TreeVariant variant,
                                  std::string session_id, const RelationConfig& rel = {}) {
  SessionState s;
  s.session_id = std::move(session_id);
  s.corpus = std::move(corpus);
  s.lexicon = std::move(lexicon);
  s.variant = variant;
  s.candidates = extract_candidates(*s.corpus, rel);
  for (const auto& c : s.candidates) {
    Verdict v = detail::session_classify(s, c);
    if (v.label == Label::UNRESOLVED)
      s.pending.push_back(v.pending.front());
    else
      s.verdicts.emplace(c.id, std::move(v));
  }
  return s;
}

/// Records a human answer in place. Returns false when the same answer
/// was already recorded (nothing changes).
inline bool apply_answer(SessionState& s, const std::string& question_id, Answer answer,
                         const std::string& note, std::string timestamp = {}) {
  if (answer == Answer::UNKNOWN)
    throw SessionError(SessionError::Kind::INVALID_ANSWER, "answer must be YES or NO");
  if (auto prev = s.answered.find(question_id); prev != s.answered.end()) {
    if (prev->second.first == answer) return false;
    throw SessionError(SessionError::Kind::ALREADY_RESOLVED,
                       "question " + question_id + " was already answered " +
                           to_string(prev->second.first));
  }
  auto it = std::find_if(s.pending.begin(), s.pending.end(),
                         [&](const Question& q) { return q.question_id == question_id; });
  if (it == s.pending.end()) {
    std::string cid = detail::candidate_of_question(question_id);
    if (s.verdicts.count(cid))
      throw SessionError(SessionError::Kind::ALREADY_RESOLVED,
                         "candidate " + cid + " is already resolved");
    throw SessionError(SessionError::Kind::UNKNOWN_QUESTION,
                       "no pending question " + question_id);
  }
  const Candidate c = it->candidate;
  s.answered[question_id] = {answer, note};
  s.log.push_back(AnswerRecord{timestamp.empty() ? utc_timestamp() : std::move(timestamp),
                               s.session_id, question_id, c.id, it->test, answer, note});
  Verdict v = detail::session_classify(s, c);
  if (v.label == Label::UNRESOLVED) {
    *it = v.pending.front();
  } else {
    s.pending.erase(it);
    s.verdicts[c.id] = std::move(v);
  }
  return true;
}

inline SessionState session_answer(SessionState state, const std::string& question_id,
                                   Answer answer, const std::string& note,
                                   std::string timestamp = {}) {
  apply_answer(state, question_id, answer, note, std::move(timestamp));
  return state;
}

/// Applies a log in order.
inline void session_replay(SessionState& s, const std::vector<AnswerRecord>& log) {
  for (const auto& r : log) apply_answer(s, r.question_id, r.answer, r.note, r.timestamp);
}

/// Pending questions weighted by how many tests may still follow each:
/// the height of the blocked node. Each accepted answer lowers it.
inline std::size_t remaining_work(const SessionState& s) {
  const DecisionTree& tree = shared_tree(s.variant);
  std::size_t total = 0;
  for (const auto& q : s.pending) {
    const Candidate& c = q.candidate;
    auto node = node_after(tree, entry_for(c), is_copula(c.language, c.verb_lemma),
                           q.partial_trace);
    total += node ? tree.height(*node) : 1;
  }
  return total;
}

/// Current verdict of every candidate in corpus order; blocked candidates
/// appear as UNRESOLVED with their partial trace.
inline std::vector<std::pair<Candidate, Verdict>> verdict_table(const SessionState& s) {
  std::vector<std::pair<Candidate, Verdict>> out;
  for (const auto& c : s.candidates) {
    if (auto it = s.verdicts.find(c.id); it != s.verdicts.end()) {
      out.emplace_back(c, it->second);
      continue;
    }
    for (const auto& q : s.pending)
      if (q.candidate.id == c.id) out.emplace_back(c, Verdict{Label::UNRESOLVED, q.partial_trace, {q}, false});
  }
  return out;
}

inline std::string render_verdict_table(const SessionState& s) {
  std::ostringstream os;
  os << kVerdictTsvHeader << '\n';
  for (const auto& [c, v] : verdict_table(s)) write_verdict_row(os, c, v);
  return os.str();
}

struct SessionExport {
  std::string answers_log;
  Corpus corpus;  // resolved labels written into the MWE column
};

inline SessionExport session_export(const SessionState& s) {
  std::map<std::string, Label> labels;
  for (const auto& [id, v] : s.verdicts) labels[id] = v.label;
  return {write_answers_log(s.log), apply_labels(*s.corpus, s.candidates, labels)};
}

}  // namespace mwe

#endif  // MWE_TRIAGE_SESSION_HPP
