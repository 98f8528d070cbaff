#ifndef MWE_TRIAGE_TESTS_GOLD_HPP
#define MWE_TRIAGE_TESTS_GOLD_HPP

#include <optional>
#include <string>
#include <vector>

#include "mwe_triage/core.hpp"

namespace testing_support {

struct GoldRow {
  std::string verb, prep, pred;
  std::optional<mwe::Label> baseline;          // nullopt: not asserted
  std::optional<mwe::TestId> baseline_via;     // last test on the baseline trace
  mwe::Label modified;
  std::optional<mwe::AspectClass> aspect;      // expected added meaning
};

inline const std::vector<GoldRow>& gold_rows() {
  using L = mwe::Label;
  using T = mwe::TestId;
  using A = mwe::AspectClass;
  static const std::vector<GoldRow> rows = {
      {"prendre", "", "bain", L::LVC_FULL, std::nullopt, L::LVC_FULL, std::nullopt},
      {"prendre", "", "garde", L::VID, std::nullopt, L::VID, std::nullopt},
      {"prendre", "", "responsabilité", L::VID, std::nullopt, L::VID, std::nullopt},
      {"prendre", "", "conscience", L::NON_MWE, std::nullopt, L::LVC_ASP, A::INCHOATIVE},
      {"prendre", "", "place", L::VID, T::VID3, L::LVC_ASP, A::INCHOATIVE},
      {"tomber", "en", "panne", L::VID, T::VID2, L::LVC_ASP, A::INCHOATIVE},
      {"entrer", "en", "discussion", L::NON_MWE, std::nullopt, L::LVC_ASP, A::INCHOATIVE},
      {"prendre", "", "pouvoir", L::NON_MWE, std::nullopt, L::LVC_ASP, A::INCHOATIVE},
      {"multiplier", "", "allusion", L::NON_MWE, std::nullopt, L::LVC_ASP, A::ITERATIVE},
      {"être", "en", "panne", L::NON_MWE, std::nullopt, L::LVC_FULL, std::nullopt},
      {"entrer", "en", "vigueur", L::VID, std::nullopt, L::LVC_ASP, A::INCHOATIVE},
      {"tomber", "entre", "main", std::nullopt, std::nullopt, L::LVC_ASP, A::INCHOATIVE},
      {"sortir", "de", "affiche", std::nullopt, std::nullopt, L::LVC_ASP, A::TERMINATIVE},
  };
  return rows;
}

}  // namespace testing_support

#endif  // MWE_TRIAGE_TESTS_GOLD_HPP
