#ifndef MWE_TRIAGE_LEXICON_HPP
#define MWE_TRIAGE_LEXICON_HPP

// Predicate lexicon: loading, validation, counterpart lookup and test
// evaluation.
//
// Entries are keyed by the noun lemma. Homographs are separate entries told
// apart by sense_gloss. For a given candidate the engine keeps the entries
// whose verb records mention the candidate's verb; when none do, every
// sense stays in play and tests on which the senses disagree come back
// UNKNOWN.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwe_triage/core.hpp"

namespace mwe {

enum class PredicateKind { NOUN_PRED, PP_IDIOM };

inline std::string to_string(PredicateKind k) {
  return k == PredicateKind::NOUN_PRED ? "NOUN_PRED" : "PP_IDIOM";
}

enum class NumberConstraint { FREE, SINGULAR_ONLY, PLURAL_ONLY };

inline std::string to_string(NumberConstraint n) {
  switch (n) {
    case NumberConstraint::FREE: return "FREE";
    case NumberConstraint::SINGULAR_ONLY: return "SINGULAR_ONLY";
    case NumberConstraint::PLURAL_ONLY: return "PLURAL_ONLY";
  }
  return "?";
}

struct ArgSlot {
  enum class Realization { SUBJECT, PREP, GENITIVE };
  std::string role;
  Realization realization = Realization::SUBJECT;
  std::string prep;  // only for PREP

  bool operator==(const ArgSlot&) const = default;
};

/// A verb paired with a predicate, optionally through a preposition.
struct VerbUse {
  std::string verb;
  std::optional<std::string> prep;

  bool operator==(const VerbUse&) const = default;
};

struct AspectVariant {
  std::string verb_lemma;
  AspectClass aspect = AspectClass::INCHOATIVE;
  std::optional<std::string> prep;

  bool operator==(const AspectVariant&) const = default;
};

struct PredicateEntry {
  std::string entry_id;
  PredicateKind kind = PredicateKind::NOUN_PRED;
  std::string pred_lemma;
  std::optional<std::string> idiom_prep;
  std::string sense_gloss;
  bool abstract = false;
  bool predicative = false;
  std::vector<ArgSlot> arg_frame;
  std::vector<VerbUse> support_verbs;
  bool copular_support = false;
  std::vector<AspectVariant> aspect_variants;
  NumberConstraint number_constraint = NumberConstraint::FREE;
  std::optional<std::string> substitution_class;
  // Verb combinations recorded as lexically frozen with this sense; they
  // make VID2 positive whatever the substitution class says.
  std::vector<VerbUse> frozen_with;

  bool operator==(const PredicateEntry&) const = default;

  bool has_subject_slot() const {
    return std::any_of(arg_frame.begin(), arg_frame.end(), [](const ArgSlot& s) {
      return s.realization == ArgSlot::Realization::SUBJECT;
    });
  }

  // Preposition a verb record effectively uses: idiom entries default to
  // their idiom preposition.
  std::optional<std::string> effective_prep(const std::optional<std::string>& p) const {
    if (p) return p;
    if (kind == PredicateKind::PP_IDIOM) return idiom_prep;
    return std::nullopt;
  }
};

struct Alternation {
  std::string lv;
  std::string variant;
  AspectClass aspect = AspectClass::INCHOATIVE;

  bool operator==(const Alternation&) const = default;
};

/// Light verb / aspectual variant pairs known to produce an aspect change
/// independently of the predicate.
class AlternationTable {
 public:
  AlternationTable() = default;

  void add(Alternation row) {
    if (lookup(row.lv, row.variant))
      throw ValidationError("duplicate alternation (" + row.lv + ", " + row.variant + ")",
                            row.lv + "/" + row.variant);
    rows_.push_back(std::move(row));
  }

  std::optional<AspectClass> lookup(const std::string& lv, const std::string& variant) const {
    for (const auto& r : rows_)
      if (r.lv == lv && r.variant == variant) return r.aspect;
    return std::nullopt;
  }

  const std::vector<Alternation>& rows() const { return rows_; }
  bool operator==(const AlternationTable&) const = default;

  static AlternationTable defaults() {
    using A = AspectClass;
    AlternationTable t;
    const Alternation rows[] = {
        // English pairs
        {"have", "take", A::INCHOATIVE},
        {"have", "gain", A::INCHOATIVE},
        {"have", "keep", A::DURATIVE},
        {"have", "lose", A::TERMINATIVE},
        {"have", "regain", A::RESUMPTIVE},
        {"make", "start", A::INCHOATIVE},
        {"undergo", "fall under", A::INCHOATIVE},
        // French pairs
        {"avoir", "prendre", A::INCHOATIVE},
        {"avoir", "garder", A::DURATIVE},
        {"avoir", "conserver", A::DURATIVE},
        {"avoir", "perdre", A::TERMINATIVE},
        {"avoir", "retrouver", A::RESUMPTIVE},
        {"avoir", "abandonner", A::TERMINATIVE},
        {"faire", "entamer", A::INCHOATIVE},
        {"faire", "multiplier", A::ITERATIVE},
        {"subir", "tomber", A::INCHOATIVE},
        {"être", "entrer", A::INCHOATIVE},
        {"être", "tomber", A::INCHOATIVE},
        {"être", "sortir", A::TERMINATIVE},
        {"être", "rester", A::DURATIVE},
        {"être", "demeurer", A::DURATIVE},
    };
    for (const auto& r : rows) t.add(r);
    return t;
  }

 private:
  std::vector<Alternation> rows_;
};

struct Counterpart {
  enum class Kind { TRANSITIVE_LVC, COPULAR };
  std::size_t entry_index = 0;
  std::string entry_id;
  std::string base_verb;
  std::optional<std::string> base_prep;
  Kind kind = Kind::TRANSITIVE_LVC;

  bool operator==(const Counterpart&) const = default;
};

inline std::string describe(const Counterpart& cp, const std::string& pred) {
  std::string out = cp.base_verb;
  if (cp.base_prep) out += " " + *cp.base_prep;
  return out + " " + pred;
}

struct MeaningDelta {
  enum class Kind { NONE, ASPECT, OTHER };
  Kind kind = Kind::OTHER;
  AspectClass aspect = AspectClass::INCHOATIVE;  // meaningful for ASPECT

  bool operator==(const MeaningDelta& o) const {
    return kind == o.kind && (kind != Kind::ASPECT || aspect == o.aspect);
  }

  static MeaningDelta none() { return {Kind::NONE, AspectClass::INCHOATIVE}; }
  static MeaningDelta other() { return {Kind::OTHER, AspectClass::INCHOATIVE}; }
  static MeaningDelta of(AspectClass a) { return {Kind::ASPECT, a}; }
};

inline std::string to_string(const MeaningDelta& d) {
  switch (d.kind) {
    case MeaningDelta::Kind::NONE: return "NONE";
    case MeaningDelta::Kind::OTHER: return "OTHER";
    case MeaningDelta::Kind::ASPECT: return "ASPECT(" + to_string(d.aspect) + ")";
  }
  return "?";
}

class Lexicon {
 public:
  Lexicon() : alternations_(AlternationTable::defaults()) {}

  const std::string& language() const { return language_; }
  const std::string& copula() const { return copula_; }
  const std::vector<PredicateEntry>& entries() const { return entries_; }
  const PredicateEntry& entry(std::size_t i) const { return entries_.at(i); }
  const AlternationTable& alternations() const { return alternations_; }
  bool empty() const { return entries_.empty(); }

  std::optional<std::size_t> find_entry(const std::string& id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].entry_id == id) return i;
    return std::nullopt;
  }

  /// All entries (any kind) sharing the lemma.
  std::vector<std::size_t> entries_for_lemma(const std::string& lemma) const {
    auto it = by_lemma_.find(lemma);
    return it == by_lemma_.end() ? std::vector<std::size_t>{} : it->second;
  }

  /// Preferred entry set for a candidate (see file comment).
  std::vector<std::size_t> select_entries(const Candidate& c) const;

  bool verb_licensed(const PredicateEntry& e, const Candidate& c) const;

  // Builders used by the loader and by tests.
  void set_language(std::string lang, std::string copula) {
    language_ = std::move(lang);
    copula_ = std::move(copula);
  }
  void set_alternations(AlternationTable t) { alternations_ = std::move(t); }
  void add_entry(PredicateEntry e);
  void validate() const;

 private:
  std::string language_ = "fr";
  std::string copula_ = "être";
  std::vector<PredicateEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> by_lemma_;
  AlternationTable alternations_;
};

namespace detail {

inline bool uses_match(const PredicateEntry& e, const VerbUse& use, const Candidate& c) {
  return use.verb == c.verb_lemma && e.effective_prep(use.prep) == c.prep;
}

inline bool any_use_matches(const PredicateEntry& e, const std::vector<VerbUse>& uses,
                            const Candidate& c) {
  return std::any_of(uses.begin(), uses.end(),
                     [&](const VerbUse& u) { return uses_match(e, u, c); });
}

inline const AspectVariant* matching_variant(const PredicateEntry& e, const Candidate& c) {
  for (const auto& v : e.aspect_variants)
    if (v.verb_lemma == c.verb_lemma && e.effective_prep(v.prep) == c.prep) return &v;
  return nullptr;
}

inline bool is_support_use(const Lexicon& lex, const PredicateEntry& e, const Candidate& c) {
  if (any_use_matches(e, e.support_verbs, c)) return true;
  return e.kind == PredicateKind::PP_IDIOM && e.copular_support &&
         c.verb_lemma == lex.copula() && c.prep == e.idiom_prep;
}

// The cessative path: a TERMINATIVE variant may come with its own
// preposition.
inline bool terminative_prep_match(const PredicateEntry& e, const Candidate& c) {
  const AspectVariant* v = matching_variant(e, c);
  return v && v->aspect == AspectClass::TERMINATIVE;
}

inline bool pp_entry_matches(const PredicateEntry& e, const Candidate& c) {
  if (e.kind != PredicateKind::PP_IDIOM || !c.prep || e.pred_lemma != c.pred_lemma)
    return false;
  return e.idiom_prep == c.prep || terminative_prep_match(e, c);
}

inline bool noun_entry_takes_prep(const PredicateEntry& e, const std::string& prep) {
  auto has = [&](const std::optional<std::string>& p) { return p && *p == prep; };
  for (const auto& u : e.support_verbs)
    if (has(u.prep)) return true;
  for (const auto& u : e.frozen_with)
    if (has(u.prep)) return true;
  for (const auto& v : e.aspect_variants)
    if (has(v.prep)) return true;
  return false;
}

}  // namespace detail

inline bool Lexicon::verb_licensed(const PredicateEntry& e, const Candidate& c) const {
  return detail::is_support_use(*this, e, c) || detail::matching_variant(e, c) ||
         detail::any_use_matches(e, e.frozen_with, c);
}

inline std::vector<std::size_t> Lexicon::select_entries(const Candidate& c) const {
  std::vector<std::size_t> pool;
  for (std::size_t i : entries_for_lemma(c.pred_lemma)) {
    const PredicateEntry& e = entries_[i];
    if (!c.prep) {
      if (e.kind == PredicateKind::NOUN_PRED) pool.push_back(i);
    } else if (detail::pp_entry_matches(e, c)) {
      pool.push_back(i);
    }
  }
  if (pool.empty() && c.prep) {
    for (std::size_t i : entries_for_lemma(c.pred_lemma)) {
      const PredicateEntry& e = entries_[i];
      if (e.kind == PredicateKind::NOUN_PRED && detail::noun_entry_takes_prep(e, *c.prep))
        pool.push_back(i);
    }
  }
  std::vector<std::size_t> licensed;
  for (std::size_t i : pool)
    if (verb_licensed(entries_[i], c)) licensed.push_back(i);
  return licensed.empty() ? pool : licensed;
}

inline void Lexicon::add_entry(PredicateEntry e) {
  by_lemma_[e.pred_lemma].push_back(entries_.size());
  entries_.push_back(std::move(e));
}

/// Throws ValidationError naming the first offending entry.
inline void Lexicon::validate() const {
  std::set<std::string> ids;
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (const auto& e : entries_) {
    auto fail = [&](const std::string& why) {
      throw ValidationError("entry '" + e.entry_id + "': " + why, e.entry_id);
    };
    if (e.entry_id.empty()) throw ValidationError("entry with empty entry_id");
    if (!ids.insert(e.entry_id).second) fail("duplicate entry_id");
    if (e.pred_lemma.empty()) fail("empty pred_lemma");
    if (!keys.insert({e.pred_lemma, e.idiom_prep.value_or(""), e.sense_gloss}).second)
      fail("duplicate (pred_lemma, idiom_prep, sense_gloss)");
    if ((e.kind == PredicateKind::PP_IDIOM) != e.idiom_prep.has_value())
      fail("idiom_prep is required for PP_IDIOM entries and only for them");
    if (!e.support_verbs.empty() && !e.predicative)
      fail("support_verbs require predicative = true");
    if (!e.aspect_variants.empty() && !e.predicative)
      fail("aspect_variants require predicative = true");
    if (e.predicative && !e.has_subject_slot())
      fail("a predicative entry needs a SUBJECT slot in arg_frame");
    std::set<std::string> roles;
    for (const auto& s : e.arg_frame) {
      if (!roles.insert(s.role).second) fail("duplicate role '" + s.role + "'");
      if (s.realization == ArgSlot::Realization::PREP && s.prep.empty())
        fail("PREP slot '" + s.role + "' without preposition");
    }
    std::set<std::pair<std::string, std::string>> variants;
    for (const auto& v : e.aspect_variants) {
      if (!variants.insert({v.verb_lemma, e.effective_prep(v.prep).value_or("")}).second)
        fail("duplicate aspect variant '" + v.verb_lemma + "'");
      if (e.kind == PredicateKind::PP_IDIOM && v.aspect != AspectClass::TERMINATIVE &&
          e.effective_prep(v.prep) != e.idiom_prep)
        fail("only TERMINATIVE variants may change the idiom preposition ('" +
             v.verb_lemma + "')");
      for (const auto& s : e.support_verbs)
        if (s.verb == v.verb_lemma && e.effective_prep(s.prep) == e.effective_prep(v.prep))
          fail("'" + v.verb_lemma + "' is both support verb and aspect variant");
    }
    for (const auto& f : e.frozen_with)
      for (const auto& s : e.support_verbs)
        if (s.verb == f.verb && e.effective_prep(s.prep) == e.effective_prep(f.prep))
          fail("'" + f.verb + "' is both support verb and frozen");
  }
}

// -- Loading ---------------------------------------------------------------

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text,
                                                    std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class EntryReader {
 public:
  EntryReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError(where_ + ": " + why, where_);
  }

  void only(std::initializer_list<const char*> allowed) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) fail("unknown field '" + it.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  std::string str(const char* key) const {
    if (!has(key)) fail(std::string("missing field '") + key + "'");
    if (!j_.at(key).is_string()) fail(std::string("field '") + key + "' must be a string");
    return j_.at(key).get<std::string>();
  }
  std::string str_or(const char* key, std::string def) const {
    return has(key) ? str(key) : def;
  }
  std::optional<std::string> opt_str(const char* key) const {
    if (!has(key)) return std::nullopt;
    return str(key);
  }
  bool boolean(const char* key) const {
    if (!has(key)) fail(std::string("missing field '") + key + "'");
    if (!j_.at(key).is_boolean()) fail(std::string("field '") + key + "' must be a boolean");
    return j_.at(key).get<bool>();
  }
  bool boolean_or(const char* key, bool def) const { return has(key) ? boolean(key) : def; }
  const nlohmann::json& array(const char* key) const {
    static const nlohmann::json empty = nlohmann::json::array();
    if (!has(key)) return empty;
    if (!j_.at(key).is_array()) fail(std::string("field '") + key + "' must be a list");
    return j_.at(key);
  }
  const std::string& where() const { return where_; }

 private:
  const nlohmann::json& j_;
  std::string where_;
};

inline AspectClass parse_aspect(const EntryReader& r, const std::string& s) {
  try {
    return aspect_from_string(s);
  } catch (const FormatError&) {
    r.fail("unknown aspect class '" + s + "'");
  }
}

inline ArgSlot parse_slot(const nlohmann::json& j, const std::string& where) {
  EntryReader r(j, where + " arg_frame");
  r.only({"role", "realization"});
  ArgSlot s;
  s.role = r.str("role");
  std::string real = r.str("realization");
  if (real == "SUBJECT") {
    s.realization = ArgSlot::Realization::SUBJECT;
  } else if (real == "GENITIVE") {
    s.realization = ArgSlot::Realization::GENITIVE;
  } else if (real.rfind("PREP:", 0) == 0 && real.size() > 5) {
    s.realization = ArgSlot::Realization::PREP;
    s.prep = real.substr(5);
  } else {
    r.fail("realization must be SUBJECT, GENITIVE or PREP:<prep>, got '" + real + "'");
  }
  return s;
}

inline VerbUse parse_use(const nlohmann::json& j, const std::string& where) {
  EntryReader r(j, where);
  r.only({"verb", "prep"});
  return VerbUse{r.str("verb"), r.opt_str("prep")};
}

inline PredicateEntry parse_entry(const nlohmann::json& j, std::size_t index) {
  std::string where = "entry #" + std::to_string(index + 1);
  if (j.is_object() && j.contains("entry_id") && j.at("entry_id").is_string())
    where = "entry '" + j.at("entry_id").get<std::string>() + "'";
  EntryReader r(j, where);
  r.only({"entry_id", "kind", "pred_lemma", "idiom_prep", "sense_gloss", "abstract",
          "predicative", "arg_frame", "support_verbs", "copular_support",
          "aspect_variants", "number_constraint", "substitution_class", "frozen_with"});
  PredicateEntry e;
  e.entry_id = r.str("entry_id");
  std::string kind = r.str("kind");
  if (kind == "NOUN_PRED") e.kind = PredicateKind::NOUN_PRED;
  else if (kind == "PP_IDIOM") e.kind = PredicateKind::PP_IDIOM;
  else r.fail("kind must be NOUN_PRED or PP_IDIOM");
  e.pred_lemma = r.str("pred_lemma");
  e.idiom_prep = r.opt_str("idiom_prep");
  e.sense_gloss = r.str_or("sense_gloss", "");
  e.abstract = r.boolean("abstract");
  e.predicative = r.boolean("predicative");
  for (const auto& s : r.array("arg_frame")) e.arg_frame.push_back(parse_slot(s, where));
  for (const auto& s : r.array("support_verbs"))
    e.support_verbs.push_back(parse_use(s, where + " support_verbs"));
  e.copular_support = r.boolean_or("copular_support", false);
  for (const auto& v : r.array("aspect_variants")) {
    EntryReader vr(v, where + " aspect_variants");
    vr.only({"verb_lemma", "aspect", "prep"});
    e.aspect_variants.push_back(
        AspectVariant{vr.str("verb_lemma"), parse_aspect(vr, vr.str("aspect")), vr.opt_str("prep")});
  }
  std::string num = r.str_or("number_constraint", "FREE");
  if (num == "FREE") e.number_constraint = NumberConstraint::FREE;
  else if (num == "SINGULAR_ONLY") e.number_constraint = NumberConstraint::SINGULAR_ONLY;
  else if (num == "PLURAL_ONLY") e.number_constraint = NumberConstraint::PLURAL_ONLY;
  else r.fail("number_constraint must be FREE, SINGULAR_ONLY or PLURAL_ONLY");
  e.substitution_class = r.opt_str("substitution_class");
  for (const auto& s : r.array("frozen_with"))
    e.frozen_with.push_back(parse_use(s, where + " frozen_with"));
  return e;
}

}  // namespace detail

/// Parses and validates a lexicon document. The document is either a list
/// of entries or an object with `entries` plus optional `language`,
/// `copula`, `alternations` and `replace_default_alternations`.
inline Lexicon load_lexicon(const std::string& text) {
  Lexicon lex;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return lex;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte);
    throw FormatError("lexicon parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what(),
                      line);
  }
  const nlohmann::json* entries = &doc;
  if (doc.is_object()) {
    detail::EntryReader r(doc, "lexicon");
    r.only({"language", "copula", "alternations", "replace_default_alternations",
            "entries"});
    lex.set_language(r.str_or("language", "fr"), r.str_or("copula", "être"));
    AlternationTable table = r.boolean_or("replace_default_alternations", false)
                                 ? AlternationTable{}
                                 : AlternationTable::defaults();
    for (const auto& a : r.array("alternations")) {
      detail::EntryReader ar(a, "alternation");
      ar.only({"lv", "variant", "aspect"});
      table.add(Alternation{ar.str("lv"), ar.str("variant"),
                            detail::parse_aspect(ar, ar.str("aspect"))});
    }
    lex.set_alternations(std::move(table));
    entries = &r.array("entries");
  } else if (!doc.is_array()) {
    throw ValidationError("lexicon: top level must be a list of entries or an object");
  }
  for (std::size_t i = 0; i < entries->size(); ++i)
    lex.add_entry(detail::parse_entry((*entries)[i], i));
  lex.validate();
  return lex;
}

inline Lexicon load_lexicon(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_lexicon(text);
}

// -- Queries ---------------------------------------------------------------

namespace detail {

inline std::optional<Counterpart> lvc_counterpart_in(const Lexicon& lex, std::size_t i,
                                                     const Candidate& c) {
  const PredicateEntry& e = lex.entry(i);
  if (e.support_verbs.empty() || e.arg_frame.empty()) return std::nullopt;
  const VerbUse* chosen = nullptr;
  for (const auto& sv : e.support_verbs) {
    if (sv.verb == c.verb_lemma) continue;
    if (!chosen) chosen = &sv;
    if (lex.alternations().lookup(sv.verb, c.verb_lemma)) {
      chosen = &sv;
      break;
    }
  }
  if (!chosen) return std::nullopt;
  return Counterpart{i, e.entry_id, chosen->verb, e.effective_prep(chosen->prep),
                     Counterpart::Kind::TRANSITIVE_LVC};
}

inline std::optional<Counterpart> copular_counterpart_in(const Lexicon& lex, std::size_t i,
                                                         const Candidate& c) {
  const PredicateEntry& e = lex.entry(i);
  if (!c.prep || !e.copular_support || !pp_entry_matches(e, c)) return std::nullopt;
  return Counterpart{i, e.entry_id, lex.copula(), e.idiom_prep, Counterpart::Kind::COPULAR};
}

inline std::optional<Counterpart> any_counterpart_in(const Lexicon& lex, std::size_t i,
                                                     const Candidate& c) {
  if (auto cp = lvc_counterpart_in(lex, i, c)) return cp;
  return copular_counterpart_in(lex, i, c);
}

inline MeaningDelta meaning_in(const Lexicon& lex, std::size_t i, const Candidate& c,
                               const std::optional<Counterpart>& cp) {
  const PredicateEntry& e = lex.entry(i);
  if (is_support_use(lex, e, c)) return MeaningDelta::none();
  if (const AspectVariant* v = matching_variant(e, c)) return MeaningDelta::of(v->aspect);
  if (any_use_matches(e, e.frozen_with, c)) return MeaningDelta::other();
  if (cp) {
    if (auto a = lex.alternations().lookup(cp->base_verb, c.verb_lemma))
      return MeaningDelta::of(*a);
  }
  return MeaningDelta::other();
}

inline bool verb_recorded(const Lexicon& lex, const PredicateEntry& e, const Candidate& c) {
  return lex.verb_licensed(e, c);
}

// A verb that relates to the entry through a regular alternation with one
// of its light verbs.
inline bool regular_relation(const Lexicon& lex, const PredicateEntry& e, const Candidate& c) {
  if (is_support_use(lex, e, c) || matching_variant(e, c)) return true;
  for (const auto& sv : e.support_verbs)
    if (lex.alternations().lookup(sv.verb, c.verb_lemma)) return true;
  return e.copular_support && lex.alternations().lookup(lex.copula(), c.verb_lemma);
}

inline std::pair<Answer, EvidenceSource> evaluate_in(const Lexicon& lex, std::size_t i,
                                                     const Candidate& c, TestId test) {
  const PredicateEntry& e = lex.entry(i);
  auto lexical = [&](bool yes) {
    return std::pair{yes ? Answer::YES : Answer::NO, EvidenceSource::lexicon(e.entry_id)};
  };
  auto unknown = [&] { return std::pair{Answer::UNKNOWN, EvidenceSource::lexicon(e.entry_id)}; };
  switch (test) {
    case TestId::LVC0:
    case TestId::LVC0BIS:
      return lexical(e.abstract);
    case TestId::LVC1:
      return lexical(e.kind == PredicateKind::NOUN_PRED && e.predicative);
    case TestId::LVC1BIS:
      return lexical(e.kind == PredicateKind::PP_IDIOM && e.predicative);
    case TestId::LVC2:
    case TestId::LVC2BIS:
      if (e.arg_frame.empty()) return unknown();
      return lexical(e.has_subject_slot());
    case TestId::LVC3:
      return lexical(meaning_in(lex, i, c, any_counterpart_in(lex, i, c)).kind ==
                     MeaningDelta::Kind::NONE);
    case TestId::LVC4:
      if (e.kind == PredicateKind::PP_IDIOM) return lexical(false);
      return lexical(e.predicative && !e.arg_frame.empty());
    case TestId::VID2:
      if (any_use_matches(e, e.frozen_with, c)) return lexical(true);
      if (e.substitution_class) return lexical(false);
      return lexical(!regular_relation(lex, e, c));
    case TestId::VID3: {
      if (e.number_constraint == NumberConstraint::FREE) return lexical(false);
      auto required = e.number_constraint == NumberConstraint::SINGULAR_ONLY
                          ? GrammaticalNumber::SINGULAR
                          : GrammaticalNumber::PLURAL;
      if (!c.number_defaulted && c.observed_number != required)
        return std::pair{Answer::NO, EvidenceSource::surface("observed_number")};
      return lexical(true);
    }
    case TestId::ASP1:
      return lexical(any_counterpart_in(lex, i, c).has_value());
    case TestId::ASP2: {
      auto cp = any_counterpart_in(lex, i, c);
      MeaningDelta d = meaning_in(lex, i, c, cp);
      if (d.kind == MeaningDelta::Kind::ASPECT) return lexical(true);
      if (d.kind == MeaningDelta::Kind::OTHER && !cp && !verb_recorded(lex, e, c))
        return unknown();
      return lexical(false);
    }
    case TestId::PPI1:
      return lexical(pp_entry_matches(e, c));
    case TestId::COP1:
      return lexical(copular_counterpart_in(lex, i, c).has_value());
  }
  return unknown();
}

inline std::string join_ids(const Lexicon& lex, const std::vector<std::size_t>& idx) {
  std::string out;
  for (std::size_t i : idx) {
    if (!out.empty()) out += '|';
    out += lex.entry(i).entry_id;
  }
  return out;
}

}  // namespace detail

/// An LVC proper sharing the candidate's predicate, with a light verb other
/// than the candidate's own verb.
inline std::optional<Counterpart> find_lvc_counterpart(const Lexicon& lex, const Candidate& c) {
  for (std::size_t i : lex.select_entries(c))
    if (auto cp = detail::lvc_counterpart_in(lex, i, c)) return cp;
  return std::nullopt;
}

/// The copula with the same PP predicate. The candidate's preposition must
/// be the idiom's, unless the candidate's verb is a TERMINATIVE variant
/// recorded with its own preposition.
inline std::optional<Counterpart> find_copular_counterpart(const Lexicon& lex,
                                                           const Candidate& c) {
  if (!c.prep) return std::nullopt;
  for (std::size_t i : lex.select_entries(c))
    if (auto cp = detail::copular_counterpart_in(lex, i, c)) return cp;
  return std::nullopt;
}

/// What the candidate's verb adds relative to the counterpart (or to the
/// lexicon's light verbs when no counterpart is given). Entry-level
/// variants take precedence over the alternation table.
inline MeaningDelta classify_added_meaning(const Lexicon& lex, const Candidate& c,
                                           const std::optional<Counterpart>& cp) {
  if (cp) return detail::meaning_in(lex, cp->entry_index, c, cp);
  auto selected = lex.select_entries(c);
  if (selected.empty()) return MeaningDelta::other();
  MeaningDelta first = detail::meaning_in(lex, selected.front(), c, std::nullopt);
  for (std::size_t i : selected)
    if (!(detail::meaning_in(lex, i, c, std::nullopt) == first)) return MeaningDelta::other();
  return first;
}

/// Meaning delta against the candidate's own best counterpart.
inline MeaningDelta analyse_meaning(const Lexicon& lex, const Candidate& c) {
  auto cp = find_lvc_counterpart(lex, c);
  if (!cp) cp = find_copular_counterpart(lex, c);
  return classify_added_meaning(lex, c, cp);
}

/// Answers a decision-tree test from lexicon evidence. UNKNOWN when no
/// entry covers the candidate, when the entry lacks the needed field, or
/// when several senses disagree.
inline std::pair<Answer, EvidenceSource> evaluate_test(const Lexicon& lex, const Candidate& c,
                                                       TestId test) {
  auto selected = lex.select_entries(c);
  if (selected.empty()) {
    if (test == TestId::PPI1 && !lex.entries_for_lemma(c.pred_lemma).empty())
      return {Answer::NO, EvidenceSource::lexicon(
                              detail::join_ids(lex, lex.entries_for_lemma(c.pred_lemma)))};
    return {Answer::UNKNOWN, EvidenceSource::lexicon("")};
  }
  auto first = detail::evaluate_in(lex, selected.front(), c, test);
  for (std::size_t k = 1; k < selected.size(); ++k) {
    auto other = detail::evaluate_in(lex, selected[k], c, test);
    if (other.first != first.first)
      return {Answer::UNKNOWN, EvidenceSource::lexicon(detail::join_ids(lex, selected))};
  }
  if (selected.size() > 1 && first.second.kind == EvidenceSource::Kind::LEXICON)
    first.second.ref = detail::join_ids(lex, selected);
  return first;
}

}  // namespace mwe

#endif  // MWE_TRIAGE_LEXICON_HPP
