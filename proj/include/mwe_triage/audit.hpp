#ifndef MWE_TRIAGE_AUDIT_HPP
#define MWE_TRIAGE_AUDIT_HPP

// Corpus audit: every candidate is classified under both trees (ASSUME_NO),
// joined with its corpus label, and grouped with candidates that receive
// the same lexical analysis. A group whose members carry different corpus
// labels is reported as inconsistent.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mwe_triage/answers.hpp"
#include "mwe_triage/classify.hpp"
#include "mwe_triage/core.hpp"
#include "mwe_triage/cupt.hpp"
#include "mwe_triage/lexicon.hpp"

namespace mwe {

/// Analysis signature. Candidates without an entry get a key of their own
/// lemma triple so they never merge with unrelated material.
struct ClusterKey {
  std::string entry_kind;  // NOUN_PRED, PP_IDIOM or NONE
  std::string group;       // substitution class, entry id(s), or lemma triple
  MeaningDelta delta;

  bool operator==(const ClusterKey& o) const {
    return entry_kind == o.entry_kind && group == o.group && delta == o.delta;
  }
};

inline std::string to_string(const ClusterKey& k) {
  return k.entry_kind + "/" + k.group + "/" + to_string(k.delta);
}

inline ClusterKey cluster_key(const Lexicon& lex, const Candidate& c) {
  auto selected = lex.select_entries(c);
  if (selected.empty()) {
    std::string g = c.verb_lemma + "_" + (c.prep ? *c.prep + "_" : "") + c.pred_lemma;
    return {"NONE", g, MeaningDelta::other()};
  }
  const PredicateEntry& first = lex.entry(selected.front());
  std::string group;
  if (selected.size() == 1 && first.substitution_class) {
    group = *first.substitution_class;
  } else {
    for (std::size_t i : selected) {
      if (!group.empty()) group += '|';
      group += lex.entry(i).entry_id;
    }
  }
  return {to_string(first.kind), group, analyse_meaning(lex, c)};
}

struct AuditRow {
  Candidate candidate;
  Label corpus_label = Label::UNANNOTATED;
  Verdict baseline;
  Verdict modified;
  bool baseline_agrees = false;
  ClusterKey key;
  std::size_t cluster = 0;

  Label baseline_label() const { return baseline.label; }
  Label modified_label() const { return modified.label; }
};

struct AuditCluster {
  ClusterKey key;
  std::vector<std::size_t> rows;
  std::set<Label> corpus_labels;

  bool inconsistent() const { return corpus_labels.size() >= 2; }
};

/// A human answer that the lexicon now answers differently.
struct HumanConflict {
  AnswerRecord record;
  Answer lexicon_answer = Answer::UNKNOWN;
  EvidenceSource lexicon_evidence;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  std::vector<AuditCluster> clusters;
  std::vector<std::size_t> inconsistent_clusters;  // indices into clusters
  std::vector<HumanConflict> human_conflicts;

  std::size_t baseline_agreements() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const AuditRow& r) { return r.baseline_agrees; }));
  }
};

inline bool labels_agree(Label corpus, Label engine) {
  if (corpus == Label::UNANNOTATED) corpus = Label::NON_MWE;
  return corpus == engine;
}

inline std::vector<HumanConflict> find_human_conflicts(const std::vector<AnswerRecord>& answers,
                                                       const std::vector<Candidate>& candidates,
                                                       const Lexicon& lex) {
  std::map<std::string, const Candidate*> by_id;
  for (const auto& c : candidates) by_id[c.id] = &c;
  std::vector<HumanConflict> out;
  for (const auto& r : answers) {
    auto it = by_id.find(r.candidate_id);
    if (it == by_id.end()) continue;
    auto [a, ev] = evaluate_test(lex, *it->second, r.test);
    if (a != Answer::UNKNOWN && a != r.answer) out.push_back({r, a, ev});
  }
  return out;
}

inline AuditReport audit_corpus(const Corpus& corpus, const Lexicon& lex,
                                AbsenceConvention convention = AbsenceConvention::UNANNOTATED,
                                const std::vector<AnswerRecord>& answers = {},
                                const RelationConfig& rel = {}) {
  AuditReport report;
  auto candidates = extract_candidates(corpus, rel);
  auto corpus_labels = read_annotations(corpus, candidates, convention);
  for (const auto& c : candidates) {
    AuditRow row;
    row.candidate = c;
    row.corpus_label = corpus_labels.at(c.id);
    row.baseline = classify(c, lex, TreeVariant::BASELINE, Mode::ASSUME_NO);
    row.modified = classify(c, lex, TreeVariant::MODIFIED, Mode::ASSUME_NO);
    row.baseline_agrees = labels_agree(row.corpus_label, row.baseline.label);
    row.key = cluster_key(lex, c);
    report.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    AuditRow& row = report.rows[i];
    auto it = std::find_if(report.clusters.begin(), report.clusters.end(),
                           [&](const AuditCluster& cl) { return cl.key == row.key; });
    if (it == report.clusters.end()) {
      report.clusters.push_back(AuditCluster{row.key, {}, {}});
      it = std::prev(report.clusters.end());
    }
    row.cluster = static_cast<std::size_t>(it - report.clusters.begin());
    it->rows.push_back(i);
    it->corpus_labels.insert(row.corpus_label);
  }
  for (std::size_t k = 0; k < report.clusters.size(); ++k)
    if (report.clusters[k].inconsistent()) report.inconsistent_clusters.push_back(k);
  report.human_conflicts = find_human_conflicts(answers, candidates, lex);
  return report;
}

enum class ReportFormat { TSV, PRETTY };

inline ReportFormat format_from_string(std::string_view text) {
  if (text == "tsv") return ReportFormat::TSV;
  if (text == "pretty") return ReportFormat::PRETTY;
  throw FormatError("unknown format '" + std::string(text) + "'", 0, std::string(text));
}

inline constexpr std::string_view kAuditTsvHeader =
    "candidate_id\tverb\tprep\tpred\tnumber\tcorpus\tbaseline\tmodified\tbaseline_agrees\t"
    "assumed\tcluster\tinconsistent\tbaseline_trace\tmodified_trace";

namespace detail {

inline std::string assumed_flags(const AuditRow& r) {
  std::string s;
  if (r.baseline.low_confidence) s += "B";
  if (r.modified.low_confidence) s += "M";
  return s.empty() ? "-" : s;
}

inline void render_tsv(std::ostream& os, const AuditReport& report) {
  os << kAuditTsvHeader << '\n';
  for (const auto& r : report.rows) {
    const Candidate& c = r.candidate;
    os << c.id << '\t' << c.verb_lemma << '\t' << (c.prep ? *c.prep : "_") << '\t'
       << c.pred_lemma << '\t' << to_string(c.observed_number) << (c.number_defaulted ? "?" : "")
       << '\t' << to_string(r.corpus_label) << '\t' << to_string(r.baseline.label) << '\t'
       << to_string(r.modified.label) << '\t' << (r.baseline_agrees ? "yes" : "no") << '\t'
       << assumed_flags(r) << '\t' << to_string(r.key) << '\t'
       << (report.clusters[r.cluster].inconsistent() ? "yes" : "no") << '\t'
       << to_string(r.baseline.trace) << '\t' << to_string(r.modified.trace) << '\n';
  }
}

inline void render_pretty(std::ostream& os, const AuditReport& report) {
  os << "candidates: " << report.rows.size() << "\n";
  os << "baseline agrees with corpus: " << report.baseline_agreements() << "/"
     << report.rows.size() << "\n";
  os << "clusters: " << report.clusters.size()
     << ", inconsistent: " << report.inconsistent_clusters.size() << "\n";
  if (report.inconsistent_clusters.empty()) {
    os << "\nno inconsistencies\n";
  }
  std::size_t n = 0;
  for (std::size_t k : report.inconsistent_clusters) {
    const AuditCluster& cl = report.clusters[k];
    os << "\n[" << ++n << "] " << to_string(cl.key) << "\n";
    for (std::size_t i : cl.rows) {
      const AuditRow& r = report.rows[i];
      os << "    " << r.candidate.id << "  " << describe(r.candidate)
         << "  corpus=" << to_string(r.corpus_label)
         << "  baseline=" << to_string(r.baseline.label)
         << "  modified=" << to_string(r.modified.label);
      if (r.baseline.low_confidence || r.modified.low_confidence)
        os << "  assumed=" << assumed_flags(r);
      os << "\n";
    }
  }
  if (!report.human_conflicts.empty()) {
    os << "\nhuman answers contradicted by the lexicon: " << report.human_conflicts.size()
       << "\n";
    for (const auto& h : report.human_conflicts)
      os << "    " << h.record.question_id << "  human=" << to_string(h.record.answer)
         << "  lexicon=" << to_string(h.lexicon_answer) << " ("
         << to_string(h.lexicon_evidence) << ")\n";
  }
}

}  // namespace detail

inline void report_render(std::ostream& os, const AuditReport& report, ReportFormat format) {
  if (format == ReportFormat::TSV)
    detail::render_tsv(os, report);
  else
    detail::render_pretty(os, report);
}

inline std::string report_render(const AuditReport& report, ReportFormat format) {
  std::ostringstream os;
  report_render(os, report, format);
  return os.str();
}

}  // namespace mwe

#endif  // MWE_TRIAGE_AUDIT_HPP
