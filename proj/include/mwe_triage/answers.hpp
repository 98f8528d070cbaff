#ifndef MWE_TRIAGE_ANSWERS_HPP
#define MWE_TRIAGE_ANSWERS_HPP

// Answers log: one JSON object per line, append-only.

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwe_triage/core.hpp"

namespace mwe {

struct AnswerRecord {
  std::string timestamp;
  std::string session_id;
  std::string question_id;
  std::string candidate_id;
  TestId test = TestId::LVC0;
  Answer answer = Answer::YES;
  std::string note;

  bool operator==(const AnswerRecord&) const = default;
};

inline nlohmann::ordered_json to_json(const AnswerRecord& r) {
  nlohmann::ordered_json j;
  j["timestamp"] = r.timestamp;
  j["session_id"] = r.session_id;
  j["question_id"] = r.question_id;
  j["candidate_id"] = r.candidate_id;
  j["test"] = to_string(r.test);
  j["answer"] = to_string(r.answer);
  j["note"] = r.note;
  return j;
}

inline std::string format_answer_line(const AnswerRecord& r) { return to_json(r).dump(); }

inline AnswerRecord parse_answer_line(std::string_view line, std::size_t line_no = 0) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("answers log: ") + e.what(), line_no);
  }
  auto field = [&](const char* key) -> std::string {
    if (!j.is_object() || !j.contains(key) || !j[key].is_string())
      throw FormatError(std::string("answers log: missing string field '") + key + "'", line_no);
    return j[key].get<std::string>();
  };
  AnswerRecord r;
  r.timestamp = field("timestamp");
  r.session_id = field("session_id");
  r.question_id = field("question_id");
  r.candidate_id = field("candidate_id");
  try {
    r.test = test_from_string(field("test"));
    r.answer = answer_from_string(field("answer"));
  } catch (const FormatError& e) {
    throw FormatError(std::string("answers log: ") + e.what(), line_no);
  }
  if (r.answer == Answer::UNKNOWN)
    throw FormatError("answers log: answer must be YES or NO", line_no);
  r.note = j.contains("note") && j["note"].is_string() ? j["note"].get<std::string>() : "";
  return r;
}

/// Blank lines are skipped.
inline std::vector<AnswerRecord> read_answers_log(std::istream& in) {
  std::vector<AnswerRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_answer_line(line, n));
  }
  return out;
}

inline std::string write_answers_log(const std::vector<AnswerRecord>& records) {
  std::string out;
  for (const auto& r : records) out += format_answer_line(r) + "\n";
  return out;
}

}  // namespace mwe

#endif  // MWE_TRIAGE_ANSWERS_HPP
