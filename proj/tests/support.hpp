#ifndef MWE_TRIAGE_TESTS_SUPPORT_HPP
#define MWE_TRIAGE_TESTS_SUPPORT_HPP

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mwe_triage/cupt.hpp"
#include "mwe_triage/lexicon.hpp"

namespace testing_support {

inline std::string source_path(const std::string& rel) {
  return std::string(MWE_TRIAGE_SOURCE_DIR) + "/" + rel;
}

inline std::string fixture_corpus_path() { return source_path("data/corpus/fixtures.cupt"); }
inline std::string seed_lexicon_path() { return source_path("data/lexicon/fr_seed.json"); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const mwe::Lexicon& seed_lexicon() {
  static const mwe::Lexicon lex = mwe::load_lexicon(slurp(seed_lexicon_path()));
  return lex;
}

inline std::shared_ptr<const mwe::Lexicon> seed_lexicon_ptr() {
  static const auto ptr = std::make_shared<const mwe::Lexicon>(seed_lexicon());
  return ptr;
}

inline const mwe::Corpus& fixture_corpus() {
  static const mwe::Corpus c = mwe::parse_cupt(slurp(fixture_corpus_path()), "fixtures.cupt");
  return c;
}

inline std::shared_ptr<const mwe::Corpus> fixture_corpus_ptr() {
  static const auto ptr = std::make_shared<const mwe::Corpus>(fixture_corpus());
  return ptr;
}

/// The fixture candidate with the given lemmas (prep "" for direct ones).
inline mwe::Candidate fixture_candidate(const std::string& verb, const std::string& prep,
                                        const std::string& pred) {
  for (const auto& c : mwe::extract_candidates(fixture_corpus()))
    if (c.verb_lemma == verb && c.pred_lemma == pred && c.prep.value_or("") == prep) return c;
  throw std::runtime_error("no fixture candidate " + verb + " " + prep + " " + pred);
}

}  // namespace testing_support

#endif  // MWE_TRIAGE_TESTS_SUPPORT_HPP
