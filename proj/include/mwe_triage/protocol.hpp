#ifndef MWE_TRIAGE_PROTOCOL_HPP
#define MWE_TRIAGE_PROTOCOL_HPP

// Session protocol. Requests and responses are JSON objects; the same
// handler backs the newline-delimited stdio transport and the HTTP routes.
//
//   {"op":"next-question","session":"s1"}
//   {"op":"answer","session":"s1","question_id":"...","answer":"YES","note":""}
//   {"op":"verdicts","session":"s1"}
//   {"op":"tree","variant":"modified"}
//
// Responses carry "ok"; failures carry {"error":{"kind","message"}}.

#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "mwe_triage/session.hpp"

namespace mwe {

using Json = nlohmann::ordered_json;

inline Json to_json(const Candidate& c) {
  Json j;
  j["id"] = c.id;
  j["verb_lemma"] = c.verb_lemma;
  j["prep"] = c.prep ? Json(*c.prep) : Json(nullptr);
  j["pred_lemma"] = c.pred_lemma;
  j["observed_number"] = to_string(c.observed_number);
  j["number_defaulted"] = c.number_defaulted;
  j["determiner_pattern"] = c.determiner_pattern;
  j["has_adj_modifier"] = c.has_adj_modifier;
  j["sentence_ref"] = {{"document", c.sentence_ref.document},
                       {"sentence_index", c.sentence_ref.sentence_index},
                       {"token_indices", c.sentence_ref.token_indices}};
  j["language"] = c.language;
  return j;
}

inline Json to_json(const DecisionTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"test", to_string(s.test)},
                     {"answer", to_string(s.answer)},
                     {"evidence", to_string(s.evidence)}});
  return {{"steps", steps}, {"leaf", to_string(t.leaf)}};
}

inline Json to_json(const Question& q) {
  return {{"question_id", q.question_id},
          {"candidate", to_json(q.candidate)},
          {"test", to_string(q.test)},
          {"prompt", q.prompt},
          {"sentence_text", q.sentence_text},
          {"partial_trace", to_json(q.partial_trace)}};
}

inline Json verdict_json(const Candidate& c, const Verdict& v) {
  return {{"candidate", to_json(c)},
          {"label", to_string(v.label)},
          {"low_confidence", v.low_confidence},
          {"trace", to_json(v.trace)}};
}

inline Json to_json(const DecisionTree& tree) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const TreeNode& n = tree.node(i);
    Json j = {{"id", i}};
    switch (n.kind) {
      case TreeNode::Kind::LEAF:
        j["kind"] = "leaf";
        j["label"] = to_string(n.label);
        break;
      case TreeNode::Kind::TEST:
        j["kind"] = "test";
        j["test"] = to_string(n.test);
        j["prompt"] = std::string(test_prompt(n.test));
        j["yes"] = n.yes;
        j["no"] = n.no;
        break;
      case TreeNode::Kind::COPULA_GATE:
        j["kind"] = "copula_gate";
        j["yes"] = n.yes;
        j["no"] = n.no;
        break;
    }
    nodes.push_back(std::move(j));
  }
  return {{"variant", to_string(tree.variant())},
          {"entries", {{"direct", tree.entry_direct()}, {"pp", tree.entry_pp()}}},
          {"nodes", nodes}};
}

inline std::string error_kind_name(SessionError::Kind k) {
  switch (k) {
    case SessionError::Kind::UNKNOWN_SESSION: return "unknown_session";
    case SessionError::Kind::UNKNOWN_QUESTION: return "unknown_question";
    case SessionError::Kind::ALREADY_RESOLVED: return "already_resolved";
    case SessionError::Kind::INVALID_ANSWER: return "invalid_answer";
  }
  return "error";
}

inline Json error_json(const std::string& kind, const std::string& message) {
  return {{"ok", false}, {"error", {{"kind", kind}, {"message", message}}}};
}

/// HTTP status for a response produced by SessionHub::handle.
inline int http_status(const Json& response) {
  if (response.value("ok", false)) return 200;
  std::string kind = response["error"].value("kind", "");
  if (kind == "unknown_session" || kind == "unknown_question" || kind == "unknown_variant")
    return 404;
  if (kind == "already_resolved") return 409;
  return 400;
}

/// Owns the live sessions. One writer at a time; sessions are independent.
class SessionHub {
 public:
  using AnswerSink = std::function<void(const AnswerRecord&)>;

  void add(SessionState s) {
    std::lock_guard lock(mu_);
    std::string id = s.session_id;
    sessions_.insert_or_assign(std::move(id), std::move(s));
  }

  /// Called with each newly recorded answer (e.g. to append to a log file).
  void on_answer(AnswerSink sink) { sink_ = std::move(sink); }

  SessionState snapshot(const std::string& id) const {
    std::lock_guard lock(mu_);
    return get(id);
  }

  Json handle(const Json& request) {
    try {
      if (!request.is_object() || !request.contains("op") || !request["op"].is_string())
        return error_json("bad_request", "request needs a string field 'op'");
      const std::string op = request["op"];
      if (op == "tree") return tree_op(request);
      std::lock_guard lock(mu_);
      SessionState& s = get(field(request, "session"));
      if (op == "next-question") return next_question(s);
      if (op == "verdicts") return verdicts(s);
      if (op == "answer") return answer(s, request);
      return error_json("bad_request", "unknown op '" + op + "'");
    } catch (const SessionError& e) {
      return error_json(error_kind_name(e.kind()), e.what());
    } catch (const FormatError& e) {
      return error_json("bad_request", e.what());
    } catch (const nlohmann::json::exception& e) {
      return error_json("bad_request", e.what());
    }
  }

  std::string handle_line(const std::string& line) {
    Json request;
    try {
      request = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      return error_json("bad_request", e.what()).dump();
    }
    return handle(request).dump();
  }

 private:
  static std::string field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
      throw FormatError(std::string("request needs a string field '") + key + "'");
    return j[key].get<std::string>();
  }

  const SessionState& get(const std::string& id) const {
    auto it = sessions_.find(id);
    if (it == sessions_.end())
      throw SessionError(SessionError::Kind::UNKNOWN_SESSION, "no session '" + id + "'");
    return it->second;
  }

  SessionState& get(const std::string& id) {
    return const_cast<SessionState&>(std::as_const(*this).get(id));
  }

  static Json next_question(const SessionState& s) {
    const Question* q = s.next_question();
    return {{"ok", true},
            {"session_id", s.session_id},
            {"finished", q == nullptr},
            {"remaining", remaining_work(s)},
            {"pending", s.pending.size()},
            {"question", q ? to_json(*q) : Json(nullptr)}};
  }

  static Json verdicts(const SessionState& s) {
    Json rows = Json::array();
    for (const auto& [c, v] : verdict_table(s)) rows.push_back(verdict_json(c, v));
    return {{"ok", true},
            {"session_id", s.session_id},
            {"variant", to_string(s.variant)},
            {"finished", s.finished()},
            {"verdicts", rows}};
  }

  Json answer(SessionState& s, const Json& request) {
    const std::string qid = field(request, "question_id");
    Answer a = answer_from_string(field(request, "answer"));
    std::string note = request.contains("note") && request["note"].is_string()
                           ? request["note"].get<std::string>()
                           : "";
    std::string cid;
    for (const auto& q : s.pending)
      if (q.question_id == qid) cid = q.candidate.id;
    bool recorded = apply_answer(s, qid, a, note);
    if (recorded && sink_) sink_(s.log.back());
    Json out = next_question(s);
    out["recorded"] = recorded;
    auto it = s.verdicts.find(cid);
    out["verdict"] = it != s.verdicts.end()
                         ? verdict_json(*detail::find_candidate(s, cid), it->second)
                         : Json(nullptr);
    return out;
  }

  static Json tree_op(const Json& request) {
    TreeVariant v;
    try {
      v = variant_from_string(field(request, "variant"));
    } catch (const FormatError& e) {
      return error_json("unknown_variant", e.what());
    }
    Json out = to_json(shared_tree(v));
    out["ok"] = true;
    return out;
  }

  mutable std::mutex mu_;
  std::map<std::string, SessionState> sessions_;
  AnswerSink sink_;
};

/// Newline-delimited transport: one request per line, one response per line.
inline void serve_ndjson(SessionHub& hub, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << hub.handle_line(line) << '\n' << std::flush;
  }
}

}  // namespace mwe

#endif  // MWE_TRIAGE_PROTOCOL_HPP
