#ifndef MWE_TRIAGE_CLI_HPP
#define MWE_TRIAGE_CLI_HPP

// Command-line front end: classify | audit | session | export.
// run_cli takes its streams and the lexicon environment default as
// arguments so that it can be driven from tests.

#include <cctype>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mwe_triage/audit.hpp"
#include "mwe_triage/http.hpp"
#include "mwe_triage/protocol.hpp"
#include "mwe_triage/session.hpp"

namespace mwe {

inline constexpr const char* kLexiconEnv = "MWE_TRIAGE_LEXICON";

namespace cli {

inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;
inline constexpr int kError = 2;

/// Bad invocation or unreadable input; reported with exit status 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::shared_ptr<const Corpus> load_corpus_file(const std::string& path) {
  std::string text = read_file(path);
  return std::make_shared<const Corpus>(parse_cupt(text, path));
}

inline std::shared_ptr<const Lexicon> load_lexicon_file(const std::string& path) {
  std::string text = read_file(path);
  try {
    return std::make_shared<const Lexicon>(load_lexicon(text));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what(), e.line(), e.context());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what(), e.subject());
  }
}

inline std::vector<AnswerRecord> load_answers_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return read_answers_log(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
  }
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot write file");
  f << text;
}

struct Options {
  std::string corpus;
  std::string lexicon;
  std::string tree = "modified";
  std::string mode = "strict";
  std::string format = "pretty";
  std::string output;
  std::string absent_as = "unannotated";
  std::string answers;
  std::string rewrite;
  std::string session_id = "session";
  bool session_id_set = false;
  bool stdio = false;
  int port = -1;
  std::string host = "127.0.0.1";
};

inline std::string lexicon_path(const Options& o, const char* env_default) {
  if (!o.lexicon.empty()) return o.lexicon;
  if (env_default && *env_default) return env_default;
  throw InputError(std::string("no lexicon: pass --lexicon or set ") + kLexiconEnv);
}

inline void print_question(std::ostream& out, const Question& q, std::size_t pending,
                           std::size_t remaining) {
  out << "\n[" << pending << " pending, " << remaining << " tests at most] " << q.question_id
      << "\n  " << q.sentence_text << "\n  candidate: " << describe(q.candidate)
      << "\n  so far: " << (q.partial_trace.steps.size() > 1 ? "" : "(start)");
  for (std::size_t i = 0; i + 1 < q.partial_trace.steps.size(); ++i) {
    const auto& s = q.partial_trace.steps[i];
    out << to_string(s.test) << "=" << to_string(s.answer) << " ";
  }
  out << "\n  " << to_string(q.test) << ": " << q.prompt << "\n  answer [y/n, optional note; q to stop]> ";
}

/// Terminal loop. Each answer goes to `sink` as soon as it is recorded.
inline void run_terminal(SessionState& s, std::istream& in, std::ostream& out,
                         const SessionHub::AnswerSink& sink) {
  while (const Question* q = s.next_question()) {
    print_question(out, *q, s.pending.size(), remaining_work(s));
    std::string line;
    if (!std::getline(in, line)) break;
    std::istringstream words(line);
    std::string word;
    words >> word;
    for (auto& ch : word) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (word == "q" || word == "quit") break;
    Answer a;
    if (word == "y" || word == "yes") {
      a = Answer::YES;
    } else if (word == "n" || word == "no") {
      a = Answer::NO;
    } else {
      out << "  please answer y or n\n";
      continue;
    }
    std::string note;
    std::getline(words >> std::ws, note);
    if (apply_answer(s, q->question_id, a, note) && sink) sink(s.log.back());
  }
  out << "\n" << render_verdict_table(s);
}

inline int cmd_classify(const Options& o, const char* env, std::ostream& out) {
  auto corpus = load_corpus_file(o.corpus);
  auto lex = load_lexicon_file(lexicon_path(o, env));
  TreeVariant variant = variant_from_string(o.tree);
  Mode mode = mode_from_string(o.mode);
  std::ostringstream os;
  os << kVerdictTsvHeader << '\n';
  for (const auto& c : extract_candidates(*corpus)) write_verdict_row(os, c, classify(c, *lex, variant, mode));
  write_output(o.output, os.str(), out);
  return kOk;
}

inline AbsenceConvention absence_from_string(const std::string& s) {
  if (s == "unannotated") return AbsenceConvention::UNANNOTATED;
  if (s == "non-mwe") return AbsenceConvention::NON_MWE;
  throw InputError("unknown --absent-as value '" + s + "'");
}

inline int cmd_audit(const Options& o, const char* env, std::ostream& out, std::ostream& err) {
  auto corpus = load_corpus_file(o.corpus);
  auto lex = load_lexicon_file(lexicon_path(o, env));
  std::vector<AnswerRecord> answers;
  if (!o.answers.empty()) answers = load_answers_file(o.answers);
  AuditReport report = audit_corpus(*corpus, *lex, absence_from_string(o.absent_as), answers);
  write_output(o.output, report_render(report, format_from_string(o.format)), out);
  if (!o.rewrite.empty()) {
    std::vector<Candidate> candidates;
    std::map<std::string, Label> labels;
    for (const auto& r : report.rows) {
      candidates.push_back(r.candidate);
      labels[r.candidate.id] = r.modified.label;
    }
    write_output(o.rewrite, emit_cupt(apply_labels(*corpus, candidates, labels)), out);
  }
  if (!report.human_conflicts.empty())
    err << "warning: " << report.human_conflicts.size()
        << " human answer(s) contradicted by the lexicon\n";
  return report.inconsistent_clusters.empty() ? kOk : kFindings;
}

inline SessionState open_session(const Options& o, const char* env, bool resume_log) {
  auto corpus = load_corpus_file(o.corpus);
  auto lex = load_lexicon_file(lexicon_path(o, env));
  std::vector<AnswerRecord> previous;
  if (resume_log && !o.answers.empty() && std::ifstream(o.answers).good())
    previous = load_answers_file(o.answers);
  std::string id = o.session_id;
  if (!o.session_id_set && !previous.empty()) id = previous.front().session_id;
  SessionState s = session_start(corpus, lex, variant_from_string(o.tree), id);
  try {
    session_replay(s, previous);
  } catch (const SessionError& e) {
    throw InputError(o.answers + ": cannot replay: " + e.what());
  }
  return s;
}

inline SessionHub::AnswerSink log_sink(const std::string& path) {
  if (path.empty()) return {};
  return [path](const AnswerRecord& r) {
    std::ofstream f(path, std::ios::app);
    f << format_answer_line(r) << '\n';
  };
}

inline int cmd_session(const Options& o, const char* env, std::istream& in, std::ostream& out,
                       std::ostream& err) {
  SessionState s = open_session(o, env, true);
  auto sink = log_sink(o.answers);
  if (o.port >= 0) {
    const std::string id = s.session_id;
    SessionHub hub;
    hub.add(std::move(s));
    hub.on_answer(sink);
    httplib::Server server;
    install_routes(server, hub);
    int port = o.port;
    if (port == 0) port = server.bind_to_any_port(o.host);
    else if (!server.bind_to_port(o.host, port)) throw InputError("cannot bind " + o.host + ":" + std::to_string(port));
    err << "serving session '" << o.session_id << "' on http://" << o.host << ":" << port << "\n";
    server.listen_after_bind();
    return kOk;
  }
  if (o.stdio) {
    SessionHub hub;
    hub.add(std::move(s));
    hub.on_answer(sink);
    serve_ndjson(hub, in, out);
    return kOk;
  }
  run_terminal(s, in, out, sink);
  return kOk;
}

inline int cmd_export(const Options& o, const char* env, std::ostream& out) {
  if (o.answers.empty()) throw InputError("export needs --answers-log");
  if (!std::ifstream(o.answers).good()) throw InputError(o.answers + ": cannot open file");
  SessionState s = open_session(o, env, true);
  SessionExport ex = session_export(s);
  write_output(o.output, emit_cupt(ex.corpus), out);
  if (!o.rewrite.empty()) write_output(o.rewrite, render_verdict_table(s), out);
  return kOk;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, const char* env_lexicon, std::istream& in,
                   std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify French verb + noun / verb + PP candidates as verbal MWEs"};
  app.require_subcommand(1);
  cli::Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "CUPT corpus file")->required();
    sub->add_option("--lexicon", o.lexicon,
                    std::string("lexicon JSON file (default: $") + kLexiconEnv + ")");
  };
  auto add_tree = [&](CLI::App* sub) {
    sub->add_option("--tree", o.tree, "decision tree")
        ->check(CLI::IsMember({"baseline", "modified"}))
        ->capture_default_str();
  };

  auto* classify_cmd = app.add_subcommand("classify", "label every candidate of a corpus");
  add_common(classify_cmd);
  add_tree(classify_cmd);
  classify_cmd->add_option("--mode", o.mode, "handling of undecided tests")
      ->check(CLI::IsMember({"strict", "assume-no"}))
      ->capture_default_str();
  classify_cmd->add_option("--output,-o", o.output, "TSV output file (default: stdout)");

  auto* audit_cmd = app.add_subcommand("audit", "compare corpus labels with both trees");
  add_common(audit_cmd);
  audit_cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"tsv", "pretty"}))
      ->capture_default_str();
  audit_cmd->add_option("--output,-o", o.output, "report file (default: stdout)");
  audit_cmd->add_option("--absent-as", o.absent_as, "reading of unannotated candidates")
      ->check(CLI::IsMember({"unannotated", "non-mwe"}))
      ->capture_default_str();
  audit_cmd->add_option("--answers-log", o.answers,
                        "session answers to check against the lexicon");
  audit_cmd->add_option("--rewrite", o.rewrite, "also write the corpus relabelled with the modified tree");

  auto* session_cmd = app.add_subcommand("session", "answer the questions the lexicon cannot");
  add_common(session_cmd);
  add_tree(session_cmd);
  session_cmd->add_option("--answers-log", o.answers,
                          "answers log; replayed on start, appended to on each answer");
  session_cmd->add_option("--session-id", o.session_id, "session identifier")
      ->each([&](const std::string&) { o.session_id_set = true; });
  auto* stdio_flag = session_cmd->add_flag("--stdio", o.stdio, "newline-delimited JSON on stdin/stdout");
  session_cmd->add_option("--serve", o.port, "serve the HTTP protocol on this port (0: any)")
      ->excludes(stdio_flag);
  session_cmd->add_option("--host", o.host, "address to bind with --serve")->capture_default_str();

  auto* export_cmd = app.add_subcommand("export", "replay an answers log and write the labelled corpus");
  add_common(export_cmd);
  add_tree(export_cmd);
  export_cmd->add_option("--answers-log", o.answers, "answers log to replay")->required();
  export_cmd->add_option("--session-id", o.session_id, "session identifier (default: from the log)")
      ->each([&](const std::string&) { o.session_id_set = true; });
  export_cmd->add_option("--output,-o", o.output, "CUPT output file (default: stdout)");
  export_cmd->add_option("--verdicts", o.rewrite, "also write the verdict table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return cli::kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return cli::kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return cli::kError;
  }

  try {
    if (*classify_cmd) return cli::cmd_classify(o, env_lexicon, out);
    if (*audit_cmd) return cli::cmd_audit(o, env_lexicon, out, err);
    if (*session_cmd) return cli::cmd_session(o, env_lexicon, in, out, err);
    if (*export_cmd) return cli::cmd_export(o, env_lexicon, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return cli::kError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return cli::kError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return cli::kError;
  }
  return cli::kError;
}

}  // namespace mwe

#endif  // MWE_TRIAGE_CLI_HPP
