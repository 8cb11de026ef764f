#include "tt/words.hpp"

#include <algorithm>
#include <sstream>

namespace tt {

Alphabet Alphabet::standard(int rank) {
    Alphabet ab;
    ab.rank = rank;
    ab.names.reserve(rank);
    for (int i = 0; i < rank; ++i) {
        if (i < 26) {
            ab.names.push_back(std::string(1, char('a' + i)));
        } else {
            ab.names.push_back("x" + std::to_string(i));
        }
    }
    return ab;
}

int Alphabet::index_of(const std::string& name) const {
    for (int i = 0; i < rank; ++i)
        if (names[i] == name) return i + 1;
    return -1;
}

Word reduce(const Alphabet& ab, std::span<const Letter> raw) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter x : raw) {
        if (!ab.valid_letter(x))
            throw unknown_letter("letter " + std::to_string(x) + " outside alphabet of rank " +
                                 std::to_string(ab.rank));
        if (!out.empty() && out.back() == inv(x))
            out.pop_back();
        else
            out.push_back(x);
    }
    return Word(std::move(out));
}

Word inverse(const Word& w) {
    std::vector<Letter> out(w.letters.rbegin(), w.letters.rend());
    for (Letter& x : out) x = inv(x);
    return Word(std::move(out));
}

Word concat(const Word& u, const Word& v) {
    std::size_t i = 0;
    while (i < u.size() && i < v.size() && u.letters[u.size() - 1 - i] == inv(v.letters[i])) ++i;
    std::vector<Letter> out;
    out.reserve(u.size() + v.size() - 2 * i);
    out.insert(out.end(), u.letters.begin(), u.letters.end() - i);
    out.insert(out.end(), v.letters.begin() + i, v.letters.end());
    return Word(std::move(out));
}

CyclicReduction cyclic_reduce(const Word& w) {
    std::size_t a = 0, b = w.size();
    while (b - a >= 2 && w.letters[a] == inv(w.letters[b - 1])) {
        ++a;
        --b;
    }
    CyclicReduction r;
    r.conjugator = Word(std::vector<Letter>(w.letters.begin(), w.letters.begin() + a));
    r.core = Word(std::vector<Letter>(w.letters.begin() + a, w.letters.begin() + b));
    return r;
}

std::size_t conjugacy_length(const Word& w) { return cyclic_reduce(w).core.size(); }

Word apply_endo(const Endomorphism& phi, const Word& w) {
    std::vector<Letter> out;
    for (Letter x : w.letters) {
        const Word& im = phi.image(std::abs(x));
        if (x > 0) {
            for (Letter y : im.letters) {
                if (!out.empty() && out.back() == inv(y))
                    out.pop_back();
                else
                    out.push_back(y);
            }
        } else {
            for (auto it = im.letters.rbegin(); it != im.letters.rend(); ++it) {
                Letter y = inv(*it);
                if (!out.empty() && out.back() == inv(y))
                    out.pop_back();
                else
                    out.push_back(y);
            }
        }
    }
    return Word(std::move(out));
}

Endomorphism compose(const Endomorphism& f, const Endomorphism& g) {
    Endomorphism h;
    h.alphabet = g.alphabet;
    h.images.reserve(g.images.size());
    for (const Word& w : g.images) h.images.push_back(apply_endo(f, w));
    return h;
}

Endomorphism endo_power(const Endomorphism& phi, int k) {
    Endomorphism out = identity_endo(phi.alphabet);
    for (int i = 0; i < k; ++i) out = compose(phi, out);
    return out;
}

Endomorphism identity_endo(const Alphabet& ab) {
    Endomorphism e;
    e.alphabet = ab;
    for (int i = 1; i <= ab.rank; ++i) e.images.push_back(Word({i}));
    return e;
}

namespace {

// letters ordered +1, -1, +2, -2, ... for deterministic scans
std::vector<Letter> letter_order(const Alphabet& ab) {
    std::vector<Letter> ls;
    for (int i = 1; i <= ab.rank; ++i) {
        ls.push_back(i);
        ls.push_back(-i);
    }
    return ls;
}

bool scan_ball(const Endomorphism& phi, const std::vector<Letter>& order, std::vector<Letter>& cur,
               int depth, std::optional<Word>& found) {
    if (depth == 0) {
        Word w{std::vector<Letter>(cur)};
        if (!w.empty() && apply_endo(phi, w).empty()) {
            found = w;
            return true;
        }
        return false;
    }
    for (Letter x : order) {
        if (!cur.empty() && cur.back() == inv(x)) continue;
        cur.push_back(x);
        if (scan_ball(phi, order, cur, depth - 1, found)) return true;
        cur.pop_back();
    }
    return false;
}

}  // namespace

std::optional<Word> injectivity_counterexample_on_ball(const Endomorphism& phi, int radius) {
    auto order = letter_order(phi.alphabet);
    for (int len = 1; len <= radius; ++len) {
        std::vector<Letter> cur;
        std::optional<Word> found;
        if (scan_ball(phi, order, cur, len, found)) return found;
    }
    return std::nullopt;
}

std::string format_word(const Alphabet& ab, const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        Letter x = w.letters[i];
        out += ab.name(std::abs(x));
        if (x < 0) out += "^-1";
    }
    return out;
}

Word parse_word(const Alphabet& ab, const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::vector<Letter> raw;
    while (in >> tok) {
        bool neg = false;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            neg = true;
            tok = tok.substr(0, tok.size() - 3);
        }
        int idx = ab.index_of(tok);
        if (idx < 0) throw unknown_letter("unknown generator '" + tok + "'");
        raw.push_back(neg ? -idx : idx);
    }
    return reduce(ab, raw);
}

}  // namespace tt
