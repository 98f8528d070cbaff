// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expected values come from oracles written independently of the
// code under test (hand-derived gold rows, brute-force enumeration, raw
// JSON reads of the seed lexicon).

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "gold.hpp"
#include "mwe_triage/audit.hpp"
#include "mwe_triage/cli.hpp"
#include "mwe_triage/session.hpp"
#include "support.hpp"

using namespace mwe;
namespace ts = testing_support;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

using Assignment = std::map<TestId, bool>;

AnswerOracle from_assignment(const Assignment& a) {
  return [a](TestId t) -> std::pair<Answer, EvidenceSource> {
    auto it = a.find(t);
    if (it == a.end()) return {Answer::UNKNOWN, EvidenceSource::surface("unset")};
    return {it->second ? Answer::YES : Answer::NO, EvidenceSource::surface("oracle")};
  };
}

Assignment random_assignment(std::mt19937& rng) {
  Assignment a;
  for (TestId t : kAllTests) a[t] = rng() & 1u;
  return a;
}

// Criterion 1: the hand-derived gold rows, within one second.
Outcome gold_table() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  const Lexicon& lex = ts::seed_lexicon();
  for (const auto& g : ts::gold_rows()) {
    Candidate c = ts::fixture_candidate(g.verb, g.prep, g.pred);
    std::string name = describe(c);
    Verdict m = classify(c, lex, TreeVariant::MODIFIED);
    if (m.label != g.modified)
      o.fail(name + ": modified " + to_string(m.label) + " != " + to_string(g.modified));
    Verdict b = classify(c, lex, TreeVariant::BASELINE);
    if (g.baseline && b.label != *g.baseline)
      o.fail(name + ": baseline " + to_string(b.label) + " != " + to_string(*g.baseline));
    if (g.baseline_via && (b.trace.steps.empty() || b.trace.steps.back().test != *g.baseline_via))
      o.fail(name + ": baseline decided by " + to_string(b.trace) + ", expected via " +
             to_string(*g.baseline_via));
    if (g.aspect) {
      MeaningDelta d = analyse_meaning(lex, c);
      if (!(d == MeaningDelta::of(*g.aspect)))
        o.fail(name + ": meaning " + to_string(d) + " != " + to_string(*g.aspect));
    }
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  if (ms.count() >= 1000) o.fail("took " + std::to_string(ms.count()) + " ms");
  return o;
}

bool path_matches(const TreePath& p, const Assignment& a, bool copula) {
  for (const auto& b : p.assignment) {
    bool value = b.kind == Branch::Kind::COPULA_GATE ? copula : a.at(b.test);
    if (value != b.value) return false;
  }
  return true;
}

// Criterion 2: every complete assignment reaches exactly one path's leaf,
// the same one twice in a row.
Outcome totality() {
  Outcome o;
  for (TreeVariant v : {TreeVariant::BASELINE, TreeVariant::MODIFIED}) {
    const DecisionTree& t = shared_tree(v);
    for (TreeEntry e : {TreeEntry::DIRECT, TreeEntry::PP}) {
      auto paths = enumerate_paths(t, e);
      auto tests = t.tests_below(t.entry(e));
      for (unsigned m = 0; m < (1u << tests.size()); ++m) {
        Assignment a;
        for (std::size_t i = 0; i < tests.size(); ++i) a[tests[i]] = (m >> i) & 1u;
        for (bool cop : {false, true}) {
          DecisionTrace first = traverse(t, e, cop, from_assignment(a));
          DecisionTrace second = traverse(t, e, cop, from_assignment(a));
          std::string where = to_string(v) + "/" + to_string(e) + " mask " + std::to_string(m);
          if (!(first == second)) o.fail(where + ": nondeterministic");
          if (first.leaf == Label::UNRESOLVED) o.fail(where + ": no leaf");
          std::size_t hits = 0;
          for (const auto& p : paths)
            if (path_matches(p, a, cop)) {
              ++hits;
              if (p.leaf != first.leaf) o.fail(where + ": leaf differs from path");
            }
          if (hits != 1) o.fail(where + ": " + std::to_string(hits) + " matching paths");
        }
      }
    }
  }
  return o;
}

// Criteria 3 and 4 share one stream of random oracles.
struct RandomRun {
  Outcome no_idiom_tests_on_asp;
  Outcome full_lvc_preserved;
};

RandomRun random_oracles() {
  RandomRun r;
  std::mt19937 rng(20240611);
  std::size_t asp = 0, full = 0;
  for (int i = 0; i < 1000; ++i) {
    Assignment a = random_assignment(rng);
    TreeEntry e = rng() & 1u ? TreeEntry::PP : TreeEntry::DIRECT;
    bool cop = (rng() % 4) == 0;
    auto oracle = from_assignment(a);
    DecisionTrace b = traverse(shared_tree(TreeVariant::BASELINE), e, cop, oracle);
    DecisionTrace m = traverse(shared_tree(TreeVariant::MODIFIED), e, cop, oracle);
    if (m.leaf == Label::LVC_ASP) {
      ++asp;
      if (m.contains(TestId::VID2) || m.contains(TestId::VID3))
        r.no_idiom_tests_on_asp.fail("LVC.asp trace " + to_string(m));
    }
    if (b.leaf == Label::LVC_FULL) {
      ++full;
      if (!(m == b)) r.full_lvc_preserved.fail("baseline " + to_string(b) + " vs " + to_string(m));
    }
  }
  if (asp == 0) r.no_idiom_tests_on_asp.fail("no LVC.asp verdict sampled");
  if (full == 0) r.full_lvc_preserved.fail("no LVC.full verdict sampled");
  return r;
}

// Criterion 5: a preposition other than the idiom's is accepted only for a
// TERMINATIVE variant recorded with that preposition. The oracle reads the
// raw lexicon document, not the loaded model.
Outcome preposition_mismatch() {
  Outcome o;
  nlohmann::json doc = nlohmann::json::parse(ts::slurp(ts::seed_lexicon_path()));
  std::set<std::string> verbs = {doc.at("copula").get<std::string>(), "rester", "mettre"};
  std::set<std::string> preps = {"à", "de", "en", "entre", "sous", "dans", "sur", "par"};
  for (const auto& e : doc.at("entries")) {
    for (const char* key : {"support_verbs", "frozen_with"})
      if (e.contains(key))
        for (const auto& u : e.at(key)) {
          verbs.insert(u.at("verb").get<std::string>());
          if (u.contains("prep")) preps.insert(u.at("prep").get<std::string>());
        }
    if (e.contains("aspect_variants"))
      for (const auto& v : e.at("aspect_variants")) {
        verbs.insert(v.at("verb_lemma").get<std::string>());
        if (v.contains("prep")) preps.insert(v.at("prep").get<std::string>());
      }
  }
  auto terminative_with = [](const nlohmann::json& e, const std::string& verb,
                             const std::string& prep) {
    if (!e.contains("aspect_variants")) return false;
    for (const auto& v : e.at("aspect_variants"))
      if (v.at("verb_lemma") == verb && v.value("prep", "") == prep && v.at("aspect") == "TERMINATIVE")
        return true;
    return false;
  };

  const Lexicon& lex = ts::seed_lexicon();
  std::size_t true_accepts = 0;
  for (const auto& e : doc.at("entries")) {
    if (e.at("kind") != "PP_IDIOM") continue;
    const std::string id = e.at("entry_id");
    const std::string idiom_prep = e.at("idiom_prep");
    const std::string pred = e.at("pred_lemma");
    for (const auto& verb : verbs)
      for (const auto& prep : preps) {
        if (prep == idiom_prep) continue;
        Candidate c;
        c.id = "probe";
        c.verb_lemma = verb;
        c.prep = prep;
        c.pred_lemma = pred;
        bool expected = terminative_with(e, verb, prep);
        bool accepted = false;
        for (std::size_t i : lex.select_entries(c))
          if (lex.entry(i).entry_id == id) accepted = true;
        auto cp = find_copular_counterpart(lex, c);
        bool cp_accepted = cp && cp->entry_id == id;
        std::string where = verb + " " + prep + " " + pred + " (" + id + ")";
        if (accepted && !expected) o.fail("false accept: " + where);
        if (expected && !accepted) o.fail("missed: " + where);
        if (cp_accepted != expected)
          o.fail("copular counterpart " + std::string(cp_accepted ? "found" : "missing") + ": " + where);
        true_accepts += accepted && expected;
      }
  }
  if (true_accepts == 0) o.fail("no terminative preposition change exercised");
  return o;
}

// Criterion 6: byte-identical round trip and located parse errors.
Outcome cupt_io() {
  Outcome o;
  std::string text = ts::slurp(ts::fixture_corpus_path());
  if (emit_cupt(parse_cupt(text)) != text) o.fail("fixture round trip differs");
  const std::vector<std::pair<std::string, std::size_t>> malformed = {
      {"ten_columns.cupt", 10},  {"non_contiguous.cupt", 11},    {"bad_mwe_tag.cupt", 11},
      {"head_out_of_range.cupt", 12}, {"continuation_first.cupt", 9}};
  for (const auto& [file, line] : malformed) {
    try {
      parse_cupt(ts::slurp(ts::source_path("tests/data/malformed/" + file)));
      o.fail(file + " parsed without error");
    } catch (const FormatError& e) {
      if (e.line() != line)
        o.fail(file + ": line " + std::to_string(e.line()) + " != " + std::to_string(line));
    }
  }
  return o;
}

std::set<std::string> members(const AuditReport& r, const AuditCluster& cl) {
  std::set<std::string> out;
  for (std::size_t i : cl.rows) out.insert(describe(r.rows[i].candidate));
  return out;
}

// Criterion 7: the audit command flags the two disputed clusters.
Outcome audit_findings() {
  Outcome o;
  std::string corpus = ts::fixture_corpus_path();
  std::string lexicon = ts::seed_lexicon_path();
  const char* argv[] = {"mwe-triage", "audit", "--corpus", corpus.c_str(), "--lexicon",
                        lexicon.c_str(), "--format", "tsv"};
  std::istringstream in;
  std::ostringstream out, err;
  int status = run_cli(8, argv, nullptr, in, out, err);
  if (status != 1) o.fail("exit status " + std::to_string(status) + ": " + err.str());

  AuditReport r = audit_corpus(ts::fixture_corpus(), ts::seed_lexicon());
  if (r.inconsistent_clusters.size() < 2) o.fail("fewer than two inconsistent clusters");
  for (std::set<std::string> want : {std::set<std::string>{"tomber en panne", "entrer en discussion"},
                                     std::set<std::string>{"tomber à main", "tomber entre main"}}) {
    bool found = false;
    for (std::size_t k : r.inconsistent_clusters) found |= members(r, r.clusters[k]) == want;
    if (!found) o.fail("missing cluster with " + *want.begin());
  }
  std::size_t flagged = 0;
  std::istringstream rows(out.str());
  std::string line;
  while (std::getline(rows, line)) flagged += line.find("\tyes\t") != std::string::npos;
  if (flagged == 0) o.fail("TSV report marks no inconsistent row");
  return o;
}

// Criterion 8: exporting a session and replaying its log gives the same
// verdict table.
Outcome export_replay() {
  Outcome o;
  std::mt19937 rng(8);
  for (int run = 0; run < 50; ++run) {
    TreeVariant v = run % 2 ? TreeVariant::BASELINE : TreeVariant::MODIFIED;
    std::string id = "acc" + std::to_string(run);
    SessionState s = session_start(ts::fixture_corpus_ptr(), ts::seed_lexicon_ptr(), v, id);
    std::size_t steps = rng() % 12;
    for (std::size_t i = 0; i < steps && !s.finished(); ++i)
      apply_answer(s, s.pending[rng() % s.pending.size()].question_id,
                   rng() & 1u ? Answer::YES : Answer::NO, "");
    SessionExport ex = session_export(s);
    std::istringstream log(ex.answers_log);
    SessionState again = session_start(ts::fixture_corpus_ptr(), ts::seed_lexicon_ptr(), v, id);
    session_replay(again, read_answers_log(log));
    if (render_verdict_table(again) != render_verdict_table(s))
      o.fail("run " + std::to_string(run) + ": verdict tables differ");
    if (emit_cupt(session_export(again).corpus) != emit_cupt(ex.corpus))
      o.fail("run " + std::to_string(run) + ": exported corpora differ");
  }
  return o;
}

}  // namespace

int main() {
  std::optional<RandomRun> random;
  auto random_part = [&](bool first) {
    if (!random) random = random_oracles();
    return first ? random->no_idiom_tests_on_asp : random->full_lvc_preserved;
  };
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gold verdicts for the worked examples", gold_table},
      {"trees are total and deterministic", totality},
      {"aspectual verdicts never pass idiom tests", [&] { return random_part(true); }},
      {"full LVC verdicts are preserved", [&] { return random_part(false); }},
      {"preposition change only for terminative variants", preposition_mismatch},
      {"CUPT round trip and located errors", cupt_io},
      {"audit flags the disputed clusters", audit_findings},
      {"export then replay is stable", export_replay},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first
              << " (" << ms << " ms)";
    if (!o.ok) std::cout << " -- " << o.detail;
    std::cout << "\n";
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
