#include "tt/words.hpp"

#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace tt;

TEST_CASE("free reduction") {
    Alphabet ab = Alphabet::standard(2);
    SUBCASE("cancellation pair") {
        std::vector<Letter> raw{1, -1, 2};
        CHECK(reduce(ab, raw) == parse_word(ab, "b"));
    }
    SUBCASE("identity element") {
        std::vector<Letter> raw;
        CHECK(reduce(ab, raw).empty());
    }
    SUBCASE("single cancellation") {
        std::vector<Letter> raw{1, 2, -2, 1};
        CHECK(reduce(ab, raw) == parse_word(ab, "a a"));
    }
    SUBCASE("unknown letter") {
        std::vector<Letter> raw{3};
        CHECK_THROWS_AS(reduce(ab, raw), unknown_letter);
    }
    SUBCASE("idempotent on random input") {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 200; ++t) {
            Word w = tth::random_reduced_word(ab, 30, rng);
            CHECK(reduce(ab, w.letters) == w);
        }
    }
}

TEST_CASE("cyclic reduction") {
    Alphabet ab = Alphabet::standard(2);
    SUBCASE("conjugate") {
        auto r = cyclic_reduce(parse_word(ab, "a b a^-1"));
        CHECK(r.core == parse_word(ab, "b"));
        CHECK(r.conjugator == parse_word(ab, "a"));
    }
    SUBCASE("already cyclically reduced") {
        auto r = cyclic_reduce(parse_word(ab, "a b"));
        CHECK(r.core == parse_word(ab, "a b"));
        CHECK(r.conjugator.empty());
    }
    SUBCASE("two step") {
        // ||a^-1 b a a|| = 2: the contract is w = c * core * c^-1, core cyclically
        // reduced; here core reads "b a" with conjugator "a^-1"
        Word w = parse_word(ab, "a^-1 b a a");
        auto r = cyclic_reduce(w);
        CHECK(r.core.size() == 2);
        CHECK(concat(concat(r.conjugator, r.core), inverse(r.conjugator)) == w);
        CHECK(r.conjugator == parse_word(ab, "a^-1"));
        // brute force: no conjugator of length <= 3 does better than 2
        std::mt19937_64 rng(3);
        for (int t = 0; t < 500; ++t) {
            Word g = tth::random_reduced_word(ab, 3, rng);
            Word c = concat(concat(g, w), inverse(g));
            CHECK(c.size() >= 2);
        }
    }
    SUBCASE("conjugacy invariance of the length") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 200; ++t) {
            Word w = tth::random_reduced_word(ab, 12, rng);
            Word g = tth::random_reduced_word(ab, 6, rng);
            Word c = concat(concat(g, w), inverse(g));
            CHECK(conjugacy_length(c) == conjugacy_length(w));
        }
    }
}

TEST_CASE("endomorphism application") {
    Alphabet ab = Alphabet::standard(2);
    SUBCASE("fibonacci") {
        CHECK(apply_endo(tth::fibonacci(), parse_word(ab, "a b")) == parse_word(ab, "b a b"));
    }
    SUBCASE("identity") {
        Endomorphism id = identity_endo(ab);
        std::mt19937_64 rng(5);
        for (int t = 0; t < 50; ++t) {
            Word w = tth::random_reduced_word(ab, 20, rng);
            CHECK(apply_endo(id, w) == w);
        }
    }
    SUBCASE("doubling") {
        Alphabet r1 = Alphabet::standard(1);
        CHECK(apply_endo(tth::doubling(), parse_word(r1, "a")) == parse_word(r1, "a a"));
    }
    SUBCASE("homomorphism property") {
        std::mt19937_64 rng(17);
        Endomorphism phi = tth::fibonacci();
        for (int t = 0; t < 500; ++t) {
            Word u = tth::random_reduced_word(ab, 50, rng);
            Word v = tth::random_reduced_word(ab, 50, rng);
            CHECK(apply_endo(phi, concat(u, v)) == concat(apply_endo(phi, u), apply_endo(phi, v)));
        }
    }
}

TEST_CASE("concat length bounds") {
    Alphabet ab = Alphabet::standard(3);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        Word u = tth::random_reduced_word(ab, 20, rng);
        Word v = tth::random_reduced_word(ab, 14, rng);
        Word c = concat(u, v);
        auto lu = static_cast<long>(u.size()), lv = static_cast<long>(v.size());
        auto lc = static_cast<long>(c.size());
        CHECK(lc >= std::abs(lu - lv));
        CHECK(lc <= lu + lv);
        CHECK((lc - lu - lv) % 2 == 0);
    }
}

TEST_CASE("injectivity screen") {
    SUBCASE("killer found") {
        Endomorphism phi = tth::make_endo(2, {"a b", "a b"});
        auto cx = injectivity_counterexample_on_ball(phi, 2);
        REQUIRE(cx.has_value());
        CHECK(*cx == parse_word(phi.alphabet, "a b^-1"));
    }
    SUBCASE("fibonacci clean on radius 6") {
        CHECK(!injectivity_counterexample_on_ball(tth::fibonacci(), 6).has_value());
    }
    SUBCASE("identity clean on radius 10") {
        CHECK(!injectivity_counterexample_on_ball(identity_endo(Alphabet::standard(2)), 10)
                   .has_value());
    }
}

TEST_CASE("word serialization round trip") {
    Alphabet ab = Alphabet::standard(3);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        Word w = tth::random_reduced_word(ab, 15, rng);
        CHECK(parse_word(ab, format_word(ab, w)) == w);
    }
    CHECK(parse_word(ab, "").empty());
    CHECK(format_word(ab, Word{}) == "");
}
