#ifndef MWE_TRIAGE_CUPT_HPP
#define MWE_TRIAGE_CUPT_HPP

// CUPT corpora: CoNLL-U with an 11th PARSEME:MWE column.
//
// The model is lossless: comment lines, multiword-token ranges and empty
// nodes are kept verbatim in their original position, so emit_cupt
// reproduces well-formed input byte for byte.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mwe_triage/core.hpp"

namespace mwe {

/// One item of the MWE column: "3" continues MWE 3, "3:VID" opens it.
struct MweItem {
  int id = 0;
  std::optional<std::string> category;

  bool operator==(const MweItem&) const = default;
};

struct Token {
  int index = 0;
  std::array<std::string, 11> columns;  // raw text of every column
  int head = -1;                         // -1 when the column is "_"
  std::vector<MweItem> mwe;              // empty for "*" and "_"

  const std::string& form() const { return columns[1]; }
  const std::string& lemma() const { return columns[2]; }
  const std::string& upos() const { return columns[3]; }
  const std::string& feats() const { return columns[5]; }
  const std::string& deprel() const { return columns[7]; }
  const std::string& mwe_column() const { return columns[10]; }

  /// Value of a morphological feature, e.g. feat("Number") -> "Plur".
  std::optional<std::string> feat(std::string_view name) const {
    const std::string& f = feats();
    std::size_t start = 0;
    while (start < f.size()) {
      std::size_t end = f.find('|', start);
      if (end == std::string::npos) end = f.size();
      std::size_t eq = f.find('=', start);
      if (eq < end && f.compare(start, eq - start, name) == 0)
        return f.substr(eq + 1, end - eq - 1);
      start = end + 1;
    }
    return std::nullopt;
  }

  bool operator==(const Token&) const = default;
};

/// A line carried as-is: comment, multiword range or empty node.
struct RawLine {
  std::string text;
  bool operator==(const RawLine&) const = default;
};

using SentenceLine = std::variant<RawLine, std::size_t>;  // raw, or token position

struct Sentence {
  std::string sent_id;
  std::vector<Token> tokens;  // basic tokens, index i+1 at position i
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<SentenceLine> layout;  // original line order
  std::size_t first_line = 0;        // 1-based line of the first line

  const Token& token(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }

  /// Forms joined by spaces, each highlighted index wrapped in [..].
  std::string text(const std::vector<int>& highlight = {}) const {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out += ' ';
      bool hl = std::find(highlight.begin(), highlight.end(), t.index) != highlight.end();
      out += hl ? "[" + t.form() + "]" : t.form();
    }
    return out;
  }

  bool operator==(const Sentence&) const = default;
};

struct Corpus {
  std::string source_name;
  std::vector<Sentence> sentences;
  bool final_blank_line = true;  // last sentence followed by an empty line

  const Sentence* find(const std::string& sent_id) const {
    for (const auto& s : sentences)
      if (s.sent_id == sent_id) return &s;
    return nullptr;
  }

  bool operator==(const Corpus&) const = default;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace detail

/// Parses one MWE column value. Throws FormatError (line 0) if malformed.
inline std::vector<MweItem> parse_mwe_column(std::string_view text) {
  if (text == "*" || text == "_") return {};
  std::vector<MweItem> items;
  for (const auto& part : detail::split(text, ';')) {
    auto colon = part.find(':');
    std::string num = part.substr(0, colon);
    if (!detail::all_digits(num) || detail::to_int(num) == 0)
      throw FormatError("malformed MWE tag '" + std::string(text) + "'", 0, std::string(text));
    MweItem item{detail::to_int(num), std::nullopt};
    if (colon != std::string::npos) {
      std::string cat = part.substr(colon + 1);
      if (cat.empty() || cat.find_first_of(" \t:") != std::string::npos)
        throw FormatError("malformed MWE tag '" + std::string(text) + "'", 0, std::string(text));
      item.category = cat;
    }
    items.push_back(std::move(item));
  }
  return items;
}

inline std::string format_mwe_column(const std::vector<MweItem>& items) {
  if (items.empty()) return "*";
  std::string out;
  for (const auto& it : items) {
    if (!out.empty()) out += ';';
    out += std::to_string(it.id);
    if (it.category) out += ":" + *it.category;
  }
  return out;
}

namespace detail {

class CuptParser {
 public:
  explicit CuptParser(std::string source) { corpus_.source_name = std::move(source); }

  void line(std::string_view raw) {
    ++line_no_;
    if (raw.empty()) {
      finish_sentence();
      return;
    }
    if (!open_) {
      current_ = Sentence{};
      current_.first_line = line_no_;
      open_ = true;
    }
    if (raw.front() == '#') {
      current_.layout.emplace_back(RawLine{std::string(raw)});
      std::string_view body = raw.substr(1);
      auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key == "sent_id" || key == "source_sent_id") {
          if (key == "sent_id" || current_.sent_id.empty()) current_.sent_id = value;
        }
        current_.metadata.emplace_back(std::move(key), std::move(value));
      }
      return;
    }
    auto cols = split(raw, '\t');
    if (cols.size() != 11)
      fail("expected 11 tab-separated columns, found " + std::to_string(cols.size()));
    const std::string& id = cols[0];
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) {
      current_.layout.emplace_back(RawLine{std::string(raw)});
      return;
    }
    if (!all_digits(id)) fail("malformed token index '" + id + "'");
    Token tok;
    tok.index = to_int(id);
    if (tok.index != static_cast<int>(current_.tokens.size()) + 1)
      fail("token index " + id + " breaks contiguity (expected " +
           std::to_string(current_.tokens.size() + 1) + ")");
    if (cols[6] == "_") {
      tok.head = -1;
    } else if (all_digits(cols[6])) {
      tok.head = to_int(cols[6]);
    } else {
      fail("malformed head '" + cols[6] + "'");
    }
    try {
      tok.mwe = parse_mwe_column(cols[10]);
    } catch (const FormatError& e) {
      fail(e.what());
    }
    std::move(cols.begin(), cols.end(), tok.columns.begin());
    current_.layout.emplace_back(current_.tokens.size());
    current_.tokens.push_back(std::move(tok));
    head_lines_.push_back(line_no_);
  }

  Corpus finish() {
    if (open_) {
      corpus_.final_blank_line = false;
      finish_sentence();
    }
    return std::move(corpus_);
  }

 private:
  static std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(' ');
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(' ');
    return std::string(s.substr(b, e - b + 1));
  }

  [[noreturn]] void fail(const std::string& why, std::size_t line = 0) const {
    std::size_t at = line ? line : line_no_;
    std::string sid = current_.sent_id.empty() ? "?" : current_.sent_id;
    throw FormatError(corpus_.source_name + ":" + std::to_string(at) + ": sentence " + sid +
                          ": " + why,
                      at, sid);
  }

  void finish_sentence() {
    if (!open_) return;
    open_ = false;
    const int n = static_cast<int>(current_.tokens.size());
    for (std::size_t i = 0; i < current_.tokens.size(); ++i)
      if (current_.tokens[i].head > n)
        fail("head " + std::to_string(current_.tokens[i].head) + " out of range", head_lines_[i]);
    // MWE numbering: every id must be opened with a category exactly once.
    std::map<int, std::size_t> opened;
    for (std::size_t i = 0; i < current_.tokens.size(); ++i)
      for (const auto& item : current_.tokens[i].mwe)
        if (item.category && !opened.emplace(item.id, i).second)
          fail("MWE " + std::to_string(item.id) + " opened twice", head_lines_[i]);
    for (std::size_t i = 0; i < current_.tokens.size(); ++i)
      for (const auto& item : current_.tokens[i].mwe) {
        auto it = opened.find(item.id);
        if (it == opened.end() || it->second > i)
          fail("MWE " + std::to_string(item.id) + " continued before its category is given",
               head_lines_[i]);
      }
    if (current_.sent_id.empty())
      current_.sent_id = corpus_.source_name + "#" + std::to_string(corpus_.sentences.size() + 1);
    for (const auto& s : corpus_.sentences)
      if (s.sent_id == current_.sent_id)
        fail("duplicate sent_id '" + current_.sent_id + "'", current_.first_line);
    corpus_.sentences.push_back(std::move(current_));
    head_lines_.clear();
  }

  Corpus corpus_;
  Sentence current_;
  bool open_ = false;
  std::size_t line_no_ = 0;
  std::vector<std::size_t> head_lines_;
};

}  // namespace detail

/// Parses CUPT text. Errors carry the 1-based line number and sentence id.
inline Corpus parse_cupt(std::string_view text, std::string source_name = "<corpus>") {
  detail::CuptParser p(std::move(source_name));
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      p.line(text.substr(start));
      break;
    }
    p.line(text.substr(start, nl - start));
    start = nl + 1;
  }
  return p.finish();
}

inline Corpus parse_cupt(std::istream& in, std::string source_name = "<corpus>") {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_cupt(text, std::move(source_name));
}

inline std::string emit_cupt(const Corpus& corpus) {
  std::string out;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence& sent = corpus.sentences[s];
    for (const auto& item : sent.layout) {
      if (const auto* raw = std::get_if<RawLine>(&item)) {
        out += raw->text;
      } else {
        const Token& t = sent.tokens[std::get<std::size_t>(item)];
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
          if (c) out += '\t';
          out += t.columns[c];
        }
      }
      out += '\n';
    }
    if (s + 1 < corpus.sentences.size() || corpus.final_blank_line) out += '\n';
  }
  return out;
}

// -- MWE spans ---------------------------------------------------------------

struct MweSpan {
  int id = 0;
  std::string category;
  std::vector<int> tokens;  // increasing

  bool operator==(const MweSpan&) const = default;
};

/// Spans of one sentence, ordered by id.
inline std::vector<MweSpan> mwe_spans(const Sentence& s) {
  std::map<int, MweSpan> spans;
  for (const auto& t : s.tokens)
    for (const auto& item : t.mwe) {
      MweSpan& span = spans[item.id];
      span.id = item.id;
      if (item.category) span.category = *item.category;
      span.tokens.push_back(t.index);
    }
  std::vector<MweSpan> out;
  for (auto& [id, span] : spans) out.push_back(std::move(span));
  return out;
}

/// Replaces the MWE column of a sentence with the given spans, renumbered
/// 1..n by first token.
inline void set_mwe_spans(Sentence& s, std::vector<MweSpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const MweSpan& a, const MweSpan& b) {
    return a.tokens.front() != b.tokens.front() ? a.tokens.front() < b.tokens.front()
                                                : a.category < b.category;
  });
  for (auto& t : s.tokens) t.mwe.clear();
  int next = 1;
  for (const auto& span : spans) {
    bool first = true;
    for (int idx : span.tokens) {
      auto& tok = s.tokens.at(static_cast<std::size_t>(idx - 1));
      tok.mwe.push_back(MweItem{next, first ? std::optional(span.category) : std::nullopt});
      first = false;
    }
    ++next;
  }
  for (auto& t : s.tokens) t.columns[10] = format_mwe_column(t.mwe);
}

// -- Candidate extraction ------------------------------------------------------

/// Dependency relations the extractor looks at. Defaults follow Universal
/// Dependencies; a relation matches either exactly or by its part before ':'.
struct RelationConfig {
  std::set<std::string> object = {"obj"};
  std::set<std::string> oblique = {"obl", "nmod", "iobj"};
  std::set<std::string> case_marker = {"case"};
  std::set<std::string> determiner = {"det"};
  std::set<std::string> adj_modifier = {"amod"};
  std::set<std::string> copula = {"cop"};
  std::set<std::string> verb_upos = {"VERB"};
  std::set<std::string> noun_upos = {"NOUN"};
  std::string default_language = "fr";

  static bool in(const std::set<std::string>& set, const std::string& rel) {
    if (set.count(rel)) return true;
    auto colon = rel.find(':');
    return colon != std::string::npos && set.count(rel.substr(0, colon));
  }
};

namespace detail {

inline std::vector<const Token*> children(const Sentence& s, int head) {
  std::vector<const Token*> out;
  for (const auto& t : s.tokens)
    if (t.head == head) out.push_back(&t);
  return out;
}

inline void fill_noun_features(Candidate& c, const Sentence& s, const Token& noun,
                               const RelationConfig& rel, const Token* skip) {
  auto number = noun.feat("Number");
  if (number == "Plur") {
    c.observed_number = GrammaticalNumber::PLURAL;
  } else if (number == "Sing") {
    c.observed_number = GrammaticalNumber::SINGULAR;
  } else {
    c.observed_number = GrammaticalNumber::SINGULAR;
    c.number_defaulted = true;
  }
  std::string dets;
  for (const Token* ch : children(s, noun.index)) {
    if (ch == skip) continue;
    if (RelationConfig::in(rel.determiner, ch->deprel())) {
      if (!dets.empty()) dets += ' ';
      dets += ch->lemma();
    }
    if (RelationConfig::in(rel.adj_modifier, ch->deprel())) c.has_adj_modifier = true;
  }
  c.determiner_pattern = dets;
}

inline std::string sentence_language(const Sentence& s, const RelationConfig& rel) {
  for (const auto& [k, v] : s.metadata)
    if (k == "language" || k == "lang") return v;
  return rel.default_language;
}

}  // namespace detail

/// Verb + dependent candidates of one sentence. `sentence_index` is the
/// sentence's position in its corpus.
inline std::vector<Candidate> extract_candidates(const Sentence& s, std::size_t sentence_index,
                                                 const std::string& document,
                                                 const RelationConfig& rel = {}) {
  std::vector<Candidate> out;
  const std::string language = detail::sentence_language(s, rel);
  auto make = [&](const Token& verb, const Token& noun, const Token* prep) {
    Candidate c;
    c.id = s.sent_id + ":" + std::to_string(verb.index) + "-" + std::to_string(noun.index);
    c.verb_lemma = verb.lemma();
    if (prep) c.prep = prep->lemma();
    c.pred_lemma = noun.lemma();
    detail::fill_noun_features(c, s, noun, rel, prep);
    c.sentence_ref.document = document;
    c.sentence_ref.sentence_index = sentence_index;
    std::vector<int> idx = {verb.index, noun.index};
    if (prep) idx.push_back(prep->index);
    std::sort(idx.begin(), idx.end());
    c.sentence_ref.token_indices = idx;
    c.language = language;
    return c;
  };
  auto case_child = [&](const Token& noun) -> const Token* {
    for (const Token* ch : detail::children(s, noun.index))
      if (RelationConfig::in(rel.case_marker, ch->deprel())) return ch;
    return nullptr;
  };
  for (const auto& verb : s.tokens) {
    if (rel.verb_upos.count(verb.upos())) {
      for (const Token* dep : detail::children(s, verb.index)) {
        if (!rel.noun_upos.count(dep->upos())) continue;
        if (RelationConfig::in(rel.object, dep->deprel())) {
          out.push_back(make(verb, *dep, nullptr));
        } else if (RelationConfig::in(rel.oblique, dep->deprel())) {
          if (const Token* p = case_child(*dep)) out.push_back(make(verb, *dep, p));
        }
      }
    }
    // Copular clauses: the predicate noun heads the clause, the copula
    // hangs off it.
    if (RelationConfig::in(rel.copula, verb.deprel()) && verb.head > 0) {
      const Token& noun = s.token(verb.head);
      if (rel.noun_upos.count(noun.upos()))
        if (const Token* p = case_child(noun)) out.push_back(make(verb, noun, p));
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.sentence_ref.token_indices < b.sentence_ref.token_indices;
  });
  return out;
}

inline std::vector<Candidate> extract_candidates(const Corpus& corpus,
                                                 const RelationConfig& rel = {}) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    auto part = extract_candidates(corpus.sentences[i], i, corpus.source_name, rel);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// Token indices a candidate occupies that must fall inside one span: the
/// verb and the predicate noun (the preposition is not required).
inline std::pair<int, int> verb_and_pred_tokens(const Candidate& c) {
  const auto& id = c.id;
  auto colon = id.rfind(':');
  auto dash = id.rfind('-');
  return {detail::to_int(std::string_view(id).substr(colon + 1, dash - colon - 1)),
          detail::to_int(std::string_view(id).substr(dash + 1))};
}

// -- Annotations ---------------------------------------------------------------

/// How absence of annotation is read.
enum class AbsenceConvention { UNANNOTATED, NON_MWE };

/// PARSEME categories outside this engine's label set; spans carrying them
/// are ignored when reading candidate labels.
inline bool is_out_of_scope_category(std::string_view cat) {
  static const std::set<std::string, std::less<>> other = {
      "IRV", "VPC.full", "VPC.semi", "MVC", "IAV", "LS.ICV", "NotMWE"};
  return other.count(cat) > 0;
}

/// Label of each candidate according to the corpus MWE column. A candidate
/// is labeled L iff its verb and predicate tokens lie in one span of
/// category L. `in_scope` decides which unannotated candidates become
/// NON_MWE under the NON_MWE convention (default: all).
template <typename InScope>
std::map<std::string, Label> read_annotations(const Corpus& corpus,
                                              const std::vector<Candidate>& candidates,
                                              AbsenceConvention convention, InScope in_scope) {
  std::map<std::string, Label> out;
  std::map<std::size_t, std::vector<MweSpan>> cache;
  for (const auto& c : candidates) {
    const std::size_t si = c.sentence_ref.sentence_index;
    auto it = cache.find(si);
    if (it == cache.end()) {
      const Sentence& s = corpus.sentences.at(si);
      auto spans = mwe_spans(s);
      for (const auto& sp : spans)
        if (sp.category.empty())
          throw FormatError("sentence " + s.sent_id + ": MWE " + std::to_string(sp.id) +
                                " has no category",
                            s.first_line, s.sent_id);
      it = cache.emplace(si, std::move(spans)).first;
    }
    auto [v, p] = verb_and_pred_tokens(c);
    Label label = Label::UNANNOTATED;
    for (const auto& sp : it->second) {
      bool has_v = std::binary_search(sp.tokens.begin(), sp.tokens.end(), v);
      bool has_p = std::binary_search(sp.tokens.begin(), sp.tokens.end(), p);
      if (!has_v || !has_p || is_out_of_scope_category(sp.category)) continue;
      Label l;
      try {
        l = label_parse(sp.category);
      } catch (const FormatError& e) {
        const Sentence& s = corpus.sentences.at(si);
        throw FormatError("sentence " + s.sent_id + ": " + e.what(), s.first_line, s.sent_id);
      }
      if (label != Label::UNANNOTATED && label != l) {
        const Sentence& s = corpus.sentences.at(si);
        throw FormatError("sentence " + s.sent_id + ": candidate " + c.id +
                              " lies in spans with conflicting categories",
                          s.first_line, s.sent_id);
      }
      label = l;
    }
    if (label == Label::UNANNOTATED && convention == AbsenceConvention::NON_MWE && in_scope(c))
      label = Label::NON_MWE;
    out[c.id] = label;
  }
  return out;
}

inline std::map<std::string, Label> read_annotations(
    const Corpus& corpus, const std::vector<Candidate>& candidates,
    AbsenceConvention convention = AbsenceConvention::UNANNOTATED) {
  return read_annotations(corpus, candidates, convention, [](const Candidate&) { return true; });
}

inline std::map<std::string, Label> read_annotations(
    const Corpus& corpus, AbsenceConvention convention = AbsenceConvention::UNANNOTATED) {
  return read_annotations(corpus, extract_candidates(corpus), convention);
}

/// Copy of the corpus where each candidate's span carries the given label:
/// spans covering the candidate's verb and predicate are dropped, and a
/// new span (verb, preposition, noun) is written for MWE labels.
inline Corpus apply_labels(const Corpus& corpus, const std::vector<Candidate>& candidates,
                           const std::map<std::string, Label>& labels) {
  Corpus out = corpus;
  std::map<std::size_t, std::vector<MweSpan>> spans;
  std::set<std::size_t> touched;
  for (const auto& c : candidates) {
    auto it = labels.find(c.id);
    if (it == labels.end() || it->second == Label::UNRESOLVED) continue;
    const std::size_t si = c.sentence_ref.sentence_index;
    if (!touched.count(si)) {
      spans[si] = mwe_spans(out.sentences.at(si));
      touched.insert(si);
    }
    auto& list = spans[si];
    auto [v, p] = verb_and_pred_tokens(c);
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](const MweSpan& sp) {
                                return !is_out_of_scope_category(sp.category) &&
                                       std::binary_search(sp.tokens.begin(), sp.tokens.end(), v) &&
                                       std::binary_search(sp.tokens.begin(), sp.tokens.end(), p);
                              }),
               list.end());
    if (is_mwe(it->second))
      list.push_back(MweSpan{0, label_format(it->second), c.sentence_ref.token_indices});
  }
  for (std::size_t si : touched) set_mwe_spans(out.sentences[si], spans[si]);
  return out;
}

}  // namespace mwe

#endif  // MWE_TRIAGE_CUPT_HPP
