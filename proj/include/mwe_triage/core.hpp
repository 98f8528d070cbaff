#ifndef MWE_TRIAGE_CORE_HPP
#define MWE_TRIAGE_CORE_HPP

// Shared vocabulary: labels, tests, answers, aspect classes, candidates and
// decision traces. Everything here is a plain value type.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwe {

/// Raised for malformed text input (corpus files, lexicon files, category
/// strings). `line` is 1-based, 0 when not applicable.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0,
              std::string context = {})
      : std::runtime_error(what), line_(line), context_(std::move(context)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& context() const noexcept { return context_; }

 private:
  std::size_t line_;
  std::string context_;
};

/// Raised when well-formed input breaks a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::string subject = {})
      : std::runtime_error(what), subject_(std::move(subject)) {}

  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

enum class Label {
  VID,
  LVC_FULL,
  LVC_CAUSE,
  LVC_ASP,
  NON_MWE,
  UNANNOTATED,  // corpus side only
  UNRESOLVED,   // engine side only, strict mode
};

inline constexpr std::array<Label, 7> kAllLabels = {
    Label::VID,     Label::LVC_FULL,    Label::LVC_CAUSE, Label::LVC_ASP,
    Label::NON_MWE, Label::UNANNOTATED, Label::UNRESOLVED};

/// Parses a PARSEME category string as it appears in the MWE column.
/// The empty string denotes absence of annotation.
inline Label label_parse(std::string_view text) {
  if (text.empty()) return Label::UNANNOTATED;
  if (text == "VID") return Label::VID;
  if (text == "LVC.full") return Label::LVC_FULL;
  if (text == "LVC.cause") return Label::LVC_CAUSE;
  if (text == "LVC.asp") return Label::LVC_ASP;
  throw FormatError("unrecognized MWE category '" + std::string(text) + "'",
                    0, std::string(text));
}

/// Inverse of label_parse. Labels without a category string (NON_MWE,
/// UNANNOTATED) format as the empty string; UNRESOLVED never reaches a file.
inline std::string label_format(Label label) {
  switch (label) {
    case Label::VID: return "VID";
    case Label::LVC_FULL: return "LVC.full";
    case Label::LVC_CAUSE: return "LVC.cause";
    case Label::LVC_ASP: return "LVC.asp";
    case Label::NON_MWE:
    case Label::UNANNOTATED: return "";
    case Label::UNRESOLVED: break;
  }
  throw std::logic_error("UNRESOLVED has no corpus category string");
}

/// True for labels that correspond to an annotated MWE span.
inline bool is_mwe(Label label) {
  return label == Label::VID || label == Label::LVC_FULL ||
         label == Label::LVC_CAUSE || label == Label::LVC_ASP;
}

/// Display name used in reports and tables.
inline std::string to_string(Label label) {
  switch (label) {
    case Label::NON_MWE: return "NON_MWE";
    case Label::UNANNOTATED: return "UNANNOTATED";
    case Label::UNRESOLVED: return "UNRESOLVED";
    default: return label_format(label);
  }
}

inline Label label_from_display(std::string_view text) {
  for (Label l : kAllLabels)
    if (to_string(l) == text) return l;
  throw FormatError("unknown label '" + std::string(text) + "'", 0,
                    std::string(text));
}

enum class TestId {
  LVC0,
  LVC1,
  LVC2,
  LVC3,
  LVC4,
  LVC0BIS,
  LVC1BIS,
  LVC2BIS,
  VID2,
  VID3,
  ASP1,
  ASP2,
  PPI1,
  COP1,
};

inline constexpr std::array<TestId, 14> kAllTests = {
    TestId::LVC0,    TestId::LVC1,    TestId::LVC2,    TestId::LVC3,
    TestId::LVC4,    TestId::LVC0BIS, TestId::LVC1BIS, TestId::LVC2BIS,
    TestId::VID2,    TestId::VID3,    TestId::ASP1,    TestId::ASP2,
    TestId::PPI1,    TestId::COP1};

inline std::string to_string(TestId test) {
  switch (test) {
    case TestId::LVC0: return "LVC0";
    case TestId::LVC1: return "LVC1";
    case TestId::LVC2: return "LVC2";
    case TestId::LVC3: return "LVC3";
    case TestId::LVC4: return "LVC4";
    case TestId::LVC0BIS: return "LVC0BIS";
    case TestId::LVC1BIS: return "LVC1BIS";
    case TestId::LVC2BIS: return "LVC2BIS";
    case TestId::VID2: return "VID2";
    case TestId::VID3: return "VID3";
    case TestId::ASP1: return "ASP1";
    case TestId::ASP2: return "ASP2";
    case TestId::PPI1: return "PPI1";
    case TestId::COP1: return "COP1";
  }
  return "?";
}

inline TestId test_from_string(std::string_view text) {
  for (TestId t : kAllTests)
    if (to_string(t) == text) return t;
  throw FormatError("unknown test id '" + std::string(text) + "'", 0,
                    std::string(text));
}

enum class Answer { YES, NO, UNKNOWN };

inline std::string to_string(Answer a) {
  switch (a) {
    case Answer::YES: return "YES";
    case Answer::NO: return "NO";
    case Answer::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

inline Answer answer_from_string(std::string_view text) {
  if (text == "YES") return Answer::YES;
  if (text == "NO") return Answer::NO;
  if (text == "UNKNOWN") return Answer::UNKNOWN;
  throw FormatError("unknown answer '" + std::string(text) + "'", 0,
                    std::string(text));
}

/// Aspectual notion contributed by a verb substituted for a light verb.
enum class AspectClass { INCHOATIVE, RESUMPTIVE, TERMINATIVE, DURATIVE, ITERATIVE };

inline constexpr std::array<AspectClass, 5> kAllAspects = {
    AspectClass::INCHOATIVE, AspectClass::RESUMPTIVE, AspectClass::TERMINATIVE,
    AspectClass::DURATIVE, AspectClass::ITERATIVE};

inline std::string to_string(AspectClass a) {
  switch (a) {
    case AspectClass::INCHOATIVE: return "INCHOATIVE";
    case AspectClass::RESUMPTIVE: return "RESUMPTIVE";
    case AspectClass::TERMINATIVE: return "TERMINATIVE";
    case AspectClass::DURATIVE: return "DURATIVE";
    case AspectClass::ITERATIVE: return "ITERATIVE";
  }
  return "?";
}

/// Short gloss of the notion each class adds.
inline std::string_view aspect_notion(AspectClass a) {
  switch (a) {
    case AspectClass::INCHOATIVE: return "beginning";
    case AspectClass::RESUMPTIVE: return "regaining";
    case AspectClass::TERMINATIVE: return "cessation";
    case AspectClass::DURATIVE: return "duration";
    case AspectClass::ITERATIVE: return "repetition";
  }
  return "";
}

inline AspectClass aspect_from_string(std::string_view text) {
  for (AspectClass a : kAllAspects)
    if (to_string(a) == text) return a;
  throw FormatError("unknown aspect class '" + std::string(text) + "'", 0,
                    std::string(text));
}

enum class GrammaticalNumber { SINGULAR, PLURAL };

inline std::string to_string(GrammaticalNumber n) {
  return n == GrammaticalNumber::SINGULAR ? "SINGULAR" : "PLURAL";
}

struct SentenceRef {
  std::string document;
  std::size_t sentence_index = 0;
  std::vector<int> token_indices;  // strictly increasing, non-empty

  bool operator==(const SentenceRef&) const = default;
};

/// One verb + single dependent occurrence. Lemma level only; surface forms
/// are reachable through `sentence_ref`.
struct Candidate {
  std::string id;
  std::string verb_lemma;
  std::optional<std::string> prep;  // present iff the dependent is a PP
  std::string pred_lemma;
  GrammaticalNumber observed_number = GrammaticalNumber::SINGULAR;
  bool number_defaulted = false;  // no Number feature on the noun
  std::string determiner_pattern;
  bool has_adj_modifier = false;
  SentenceRef sentence_ref;
  std::string language = "fr";

  bool operator==(const Candidate&) const = default;

  bool is_prepositional() const { return prep.has_value(); }
};

/// "verb [prep] pred" at lemma level.
inline std::string describe(const Candidate& c) {
  std::string out = c.verb_lemma;
  if (c.prep) out += " " + *c.prep;
  out += " " + c.pred_lemma;
  return out;
}

struct EvidenceSource {
  enum class Kind { LEXICON, HUMAN, SURFACE };
  Kind kind = Kind::SURFACE;
  std::string ref;  // entry id, session id, or surface feature name

  bool operator==(const EvidenceSource&) const = default;

  static EvidenceSource lexicon(std::string entry) {
    return {Kind::LEXICON, std::move(entry)};
  }
  static EvidenceSource human(std::string session) {
    return {Kind::HUMAN, std::move(session)};
  }
  static EvidenceSource surface(std::string feature) {
    return {Kind::SURFACE, std::move(feature)};
  }
};

inline std::string to_string(const EvidenceSource& e) {
  switch (e.kind) {
    case EvidenceSource::Kind::LEXICON: return "lex:" + e.ref;
    case EvidenceSource::Kind::HUMAN: return "human:" + e.ref;
    case EvidenceSource::Kind::SURFACE: return "surface:" + e.ref;
  }
  return "?";
}

struct TraceStep {
  TestId test;
  Answer answer;
  EvidenceSource evidence;

  bool operator==(const TraceStep&) const = default;
};

struct DecisionTrace {
  std::vector<TraceStep> steps;
  Label leaf = Label::UNRESOLVED;

  bool operator==(const DecisionTrace&) const = default;

  bool contains(TestId t) const {
    for (const auto& s : steps)
      if (s.test == t) return true;
    return false;
  }
  std::optional<Answer> answer_for(TestId t) const {
    for (const auto& s : steps)
      if (s.test == t) return s.answer;
    return std::nullopt;
  }
};

/// Compact single-line rendering: `LVC0=YES(lex:bain) LVC1=...`.
inline std::string to_string(const DecisionTrace& trace) {
  std::string out;
  for (const auto& s : trace.steps) {
    if (!out.empty()) out += ' ';
    out += to_string(s.test) + "=" + to_string(s.answer) + "(" +
           to_string(s.evidence) + ")";
  }
  return out;
}

}  // namespace mwe

#endif  // MWE_TRIAGE_CORE_HPP
