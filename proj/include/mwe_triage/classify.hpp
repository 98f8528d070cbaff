#ifndef MWE_TRIAGE_CLASSIFY_HPP
#define MWE_TRIAGE_CLASSIFY_HPP

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mwe_triage/core.hpp"
#include "mwe_triage/lexicon.hpp"
#include "mwe_triage/tree.hpp"

namespace mwe {

enum class Mode { STRICT, ASSUME_NO };

inline std::string to_string(Mode m) { return m == Mode::STRICT ? "strict" : "assume-no"; }

inline Mode mode_from_string(std::string_view text) {
  if (text == "strict") return Mode::STRICT;
  if (text == "assume-no") return Mode::ASSUME_NO;
  throw FormatError("unknown mode '" + std::string(text) + "'", 0, std::string(text));
}

/// Guideline wording shown to a human for each test, with worked examples.
inline std::string_view test_prompt(TestId test) {
  switch (test) {
    case TestId::LVC0:
      return "Is the noun abstract (an event, state or property rather than a physical "
             "object)? e.g. bain in 'prendre un bain' denotes an event.";
    case TestId::LVC1:
      return "Is the noun predicative by itself, i.e. does it have semantic arguments "
             "without the verb? e.g. 'the woman's walk'; not vigueur in 'entrer en "
             "vigueur', whose idiomatic sense needs the preposition.";
    case TestId::LVC2:
      return "Is the subject of the verb a semantic argument of the noun? e.g. 'The woman "
             "took a walk' / 'the woman's walk'.";
    case TestId::LVC3:
      return "Does the verb add nothing beyond what its inflection expresses (tense, "
             "person, number, mood)? 'take a walk' adds nothing; 'take a prominent place' "
             "adds a beginning.";
    case TestId::LVC4:
      return "Is the predicative meaning of the whole phrase kept in the verbless noun "
             "phrase with the same arguments? 'The woman took a walk' / 'the woman's walk' "
             "(yes); 'Those dreams take flesh' / 'the flesh of those dreams' (no).";
    case TestId::LVC0BIS:
      return "Is the prepositional phrase abstract? e.g. 'en vigueur', 'en panne'.";
    case TestId::LVC1BIS:
      return "Is the prepositional phrase predicative, usable as a predicate with the copula? "
             "e.g. 'l'accord de pêche (qui est) en vigueur'.";
    case TestId::LVC2BIS:
      return "Is the subject of the verb a semantic argument of the prepositional phrase? "
             "e.g. 'le règlement entre en vigueur' / 'le règlement est en vigueur'.";
    case TestId::VID2:
      return "Does replacing a component by a related word give an unexpected change of "
             "meaning? 'take turns' vs 'take ?alternations' (yes); 'have some colour / "
             "shape / size' (no).";
    case TestId::VID3:
      return "Does changing the number of the noun give an unexpected change or an "
             "unacceptable phrase? 'kick the bucket' / '*kick the buckets'.";
    case TestId::ASP1:
      return "Is there a light-verb construction (or copular construction) with the same "
             "predicate and the same arguments? 'prendre position' / 'avoir une position "
             "dans Thulin'; 'entrer en vigueur' / 'être en vigueur'.";
    case TestId::ASP2:
      return "Is the difference between the phrase and its light-verb counterpart purely "
             "aspectual (beginning, regaining, cessation, duration, repetition)? "
             "'prendre conscience' vs 'avoir conscience' (beginning).";
    case TestId::PPI1:
      return "Is the prepositional phrase an idiom whose meaning requires the preposition? "
             "'en vigueur' (yes: ?'la vigueur de ce règlement').";
    case TestId::COP1:
      return "Is there a copular construction with 'être' and the same PP and arguments? "
             "'entrer en vigueur' / 'être en vigueur'; for cessative verbs the preposition "
             "may differ: 'sortir de l'affiche' / 'être à l'affiche'.";
  }
  return "";
}

/// A decision-tree test waiting for a human answer.
struct Question {
  std::string question_id;
  Candidate candidate;
  TestId test = TestId::LVC0;
  std::string prompt;
  std::string sentence_text;
  DecisionTrace partial_trace;  // ends with the blocked step

  bool operator==(const Question&) const = default;
};

inline std::string make_question_id(const Candidate& c, TestId test) {
  return c.id + "#" + to_string(test);
}

struct Verdict {
  Label label = Label::UNRESOLVED;
  DecisionTrace trace;
  std::vector<Question> pending;
  bool low_confidence = false;

  bool operator==(const Verdict&) const = default;
};

/// Lexicon-backed oracle for one candidate.
inline AnswerOracle lexicon_oracle(const Lexicon& lex, const Candidate& c) {
  return [&lex, c](TestId t) { return evaluate_test(lex, c, t); };
}

/// Traverses with the given oracle and applies the mode's handling of
/// UNKNOWN answers. STRICT stops with one pending question; ASSUME_NO
/// turns each UNKNOWN into NO and marks the verdict low-confidence.
inline Verdict classify_with(const Candidate& c, const AnswerOracle& oracle,
                             TreeVariant variant, Mode mode) {
  const DecisionTree& tree = shared_tree(variant);
  Verdict v;
  if (mode == Mode::STRICT) {
    v.trace = traverse(tree, c, oracle);
    v.label = v.trace.leaf;
    if (v.label == Label::UNRESOLVED) {
      const TraceStep& blocked = v.trace.steps.back();
      v.pending.push_back(Question{make_question_id(c, blocked.test), c, blocked.test,
                                   std::string(test_prompt(blocked.test)), {}, v.trace});
    }
    return v;
  }
  bool assumed = false;
  AnswerOracle coerced = [&](TestId t) -> std::pair<Answer, EvidenceSource> {
    auto r = oracle(t);
    if (r.first == Answer::UNKNOWN) {
      assumed = true;
      return {Answer::NO, EvidenceSource::surface("assumed")};
    }
    return r;
  };
  v.trace = traverse(tree, c, coerced);
  v.label = v.trace.leaf;
  v.low_confidence = assumed;
  return v;
}

inline Verdict classify(const Candidate& c, const Lexicon& lex, TreeVariant variant,
                        Mode mode = Mode::STRICT) {
  return classify_with(c, lexicon_oracle(lex, c), variant, mode);
}

/// Verdict table columns, shared by the classify command and sessions.
inline constexpr std::string_view kVerdictTsvHeader =
    "candidate_id\tverb\tprep\tpred\tnumber\tdeterminers\tadj_modifier\tlabel\t"
    "low_confidence\ttrace";

inline void write_verdict_row(std::ostream& os, const Candidate& c, const Verdict& v) {
  os << c.id << '\t' << c.verb_lemma << '\t' << (c.prep ? *c.prep : "_") << '\t' << c.pred_lemma
     << '\t' << to_string(c.observed_number) << (c.number_defaulted ? "?" : "") << '\t'
     << (c.determiner_pattern.empty() ? "_" : c.determiner_pattern) << '\t'
     << (c.has_adj_modifier ? "yes" : "no") << '\t' << to_string(v.label) << '\t'
     << (v.low_confidence ? "yes" : "no") << '\t' << to_string(v.trace) << '\n';
}

}  // namespace mwe

#endif  // MWE_TRIAGE_CLASSIFY_HPP
