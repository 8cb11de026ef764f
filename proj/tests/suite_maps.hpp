#pragma once

#include <string>
#include <vector>

#include "tt/words.hpp"

#include "../tests/helpers.hpp"

namespace tth {

// The endomorphism suite used by the acceptance criteria. The first ten are
// injective non-surjective maps of ranks 2-4 whose rose representatives are
// train track maps with bounded cancellation constant exactly 1 in the PF
// metric and nu = 1 - 2/(lambda - 1) in (0,1]; the last two are automorphisms
// (whose cancellation constants scale with lambda^k at every power, so the
// growth-rate constants stay in the fallback regime).
struct SuiteMap {
    std::string name;
    int rank;
    std::vector<std::string> images;
    bool automorphism;
    bool nu_positive;
};

inline const std::vector<SuiteMap>& suite_maps() {
    static const std::vector<SuiteMap> maps = {
        {"r2_lambda4", 2, {"b a a a", "b b a b"}, false, true},
        {"r2_lambda5_sym", 2, {"b a a a a", "b b a b b"}, false, true},
        {"r2_lambda5_skew", 2, {"b a a a a", "b b b a b"}, false, true},
        {"r2_lambda6_tail", 2, {"b a a a a a", "b b a b b b"}, false, true},
        {"r2_lambda6_head", 2, {"b a a a a a", "b b b b a b"}, false, true},
        {"r3_lambda5_a", 3, {"b a a c a", "b b c a b", "b c a c c"}, false, true},
        {"r3_lambda5_b", 3, {"b a c c a", "b b a a b", "b c a c c"}, false, true},
        {"r3_lambda5_c", 3, {"b a c a a", "b b a c b", "b c c a c"}, false, true},
        {"r4_lambda6_a", 4,
         {"b a a c d a", "b b c a d b", "b c d a c c", "b d a c d d"}, false, true},
        {"r4_lambda6_b", 4,
         {"b a c d a a", "b b d c a b", "b c a d c c", "b d c a d d"}, false, true},
        {"fibonacci", 2, {"b", "a b"}, true, false},
        {"cyclic_shift", 3, {"a b", "a c", "a"}, true, false},
    };
    return maps;
}

inline tt::Endomorphism suite_endo(const SuiteMap& m) {
    tt::Endomorphism e;
    e.alphabet = tt::Alphabet::standard(m.rank);
    for (const auto& s : m.images) e.images.push_back(tt::parse_word(e.alphabet, s));
    return e;
}

}  // namespace tth
