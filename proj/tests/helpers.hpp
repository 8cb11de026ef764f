#pragma once

#include <random>
#include <string>
#include <vector>

#include "tt/words.hpp"

namespace tth {

inline tt::Endomorphism make_endo(int rank, const std::vector<std::string>& images) {
    tt::Endomorphism e;
    e.alphabet = tt::Alphabet::standard(rank);
    for (const auto& s : images) e.images.push_back(tt::parse_word(e.alphabet, s));
    return e;
}

// a |-> b, b |-> ab
inline tt::Endomorphism fibonacci() { return make_endo(2, {"b", "a b"}); }
// a |-> ab, b |-> ba
inline tt::Endomorphism sapir() { return make_endo(2, {"a b", "b a"}); }
// a |-> aa on rank 1
inline tt::Endomorphism doubling() { return make_endo(1, {"a a"}); }

inline tt::Word random_reduced_word(const tt::Alphabet& ab, int len, std::mt19937_64& rng) {
    std::vector<tt::Letter> raw;
    std::uniform_int_distribution<int> gen(1, ab.rank);
    std::uniform_int_distribution<int> sign(0, 1);
    while (static_cast<int>(raw.size()) < len) {
        tt::Letter x = gen(rng) * (sign(rng) ? 1 : -1);
        if (!raw.empty() && raw.back() == tt::inv(x)) continue;
        raw.push_back(x);
    }
    return tt::Word(std::move(raw));
}

}  // namespace tth
