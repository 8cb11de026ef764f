#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tt/errors.hpp"

namespace tt {

// Letters are signed 1-based generator indices; -i is the inverse of i.
using Letter = std::int32_t;

inline Letter inv(Letter x) { return -x; }

struct Alphabet {
    int rank = 0;
    std::vector<std::string> names;  // names[i-1] is generator i

    static Alphabet standard(int rank);

    bool valid_letter(Letter x) const { return x != 0 && x >= -rank && x <= rank; }
    const std::string& name(int gen) const { return names[gen - 1]; }
    // -1 if unknown
    int index_of(const std::string& name) const;

    bool operator==(const Alphabet&) const = default;
};

// Freely reduced word. The empty word is the identity.
struct Word {
    std::vector<Letter> letters;

    Word() = default;
    explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;
};

Word reduce(const Alphabet& ab, std::span<const Letter> raw);
Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);  // reduced product

struct CyclicReduction {
    Word core;        // cyclically reduced
    Word conjugator;  // w == conjugator * core * conjugator^-1
};
CyclicReduction cyclic_reduce(const Word& w);

// ||w||: length of the cyclically reduced core.
std::size_t conjugacy_length(const Word& w);

struct Endomorphism {
    Alphabet alphabet;
    std::vector<Word> images;  // images[i-1] is the image of generator i

    const Word& image(int gen) const { return images[gen - 1]; }
};

Word apply_endo(const Endomorphism& phi, const Word& w);
Endomorphism compose(const Endomorphism& f, const Endomorphism& g);  // f after g
Endomorphism endo_power(const Endomorphism& phi, int k);
Endomorphism identity_endo(const Alphabet& ab);

// Scans reduced words of length <= radius in length-then-lex order; returns the
// first nontrivial word killed by phi, or nullopt if none exists on the ball.
std::optional<Word> injectivity_counterexample_on_ball(const Endomorphism& phi, int radius);

// Serialization: whitespace-separated tokens, "a" or "a^-1"; "" is the identity.
std::string format_word(const Alphabet& ab, const Word& w);
Word parse_word(const Alphabet& ab, const std::string& text);

}  // namespace tt
