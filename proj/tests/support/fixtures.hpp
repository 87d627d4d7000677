#pragma once

// Shared graph fixtures used across the unit and acceptance suites.

#include <string>

namespace fixtures {

// "He was searching for a clue": the canonical small UMR with person/number
// features, aspect, and modal strength.
inline const std::string kSearchUmr = R"((s / search-01
  :Arg0 (p / person
    :refer-person 3rd
    :refer-number Singular)
  :Arg1 (c / clue
    :refer-number Singular)
  :aspect Activity
  :modstr FullAff))";

// Hand-applied default rules: aspect/modstr and the refer features go away,
// the 3rd-person singular person becomes "they", :argN casing normalizes.
inline const std::string kSearchConvertedAmr =
    "(s / search-01 :ARG0 (p / they) :ARG1 (c / clue))";

inline const std::string kPleasureAmr = "(p / pleasure)";

inline const std::string kPleasureUmr = R"((s29s / say-01
    :ARG0 (s29p / person)
    :ARG1 (s29h / have-experience-91
        :ARG1 s29p
        :ARG2 (s29p3 / pleasure)
        :ARG3 (s29t / thing)
        :aspect state)
    :ARG2 (s29p2 / person)
    :aspect performance))";

inline const std::string kPleasureConvertedAmr = R"((s29s / say-01
    :ARG0 (s29p / person)
    :ARG1 (s29h / have-experience-91
        :ARG1 s29p
        :ARG2 (s29p3 / pleasure)
        :ARG3 (s29t / thing))
    :ARG2 (s29p2 / person)))";

inline const std::string kSelfLoop = "(a / alpha :ARG0 a)";

}  // namespace fixtures
