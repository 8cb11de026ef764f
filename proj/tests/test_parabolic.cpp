#include "tt/parabolic.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tt/constants.hpp"

using namespace tt;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

ParabolicFamily family_of(const Alphabet& ab, const std::vector<std::vector<std::string>>& gens) {
    std::vector<std::vector<Word>> ws;
    for (const auto& sub : gens) {
        std::vector<Word> one;
        for (const auto& s : sub) one.push_back(parse_word(ab, s));
        ws.push_back(one);
    }
    return make_family(ab, ws);
}

GraphMap metric_rose(const Endomorphism& phi) {
    GraphMap f = rose_representative(phi);
    f.g = assign_metric(f, pf_eigen(transpose(transition_matrix(f))));
    return f;
}

}  // namespace

TEST_CASE("coned length") {
    Alphabet ab = Alphabet::standard(2);
    GraphMap f = rose_representative(tth::fibonacci());  // unit metric rose
    SUBCASE("trivial family keeps the metric length") {
        RealizedFamily none;
        CHECK(coned_length({1, 2, 1}, f.g, none) == doctest::Approx(3.0));
    }
    SUBCASE("runs into the a-core collapse to cost one") {
        ParabolicFamily fam = family_of(ab, {{"a"}});
        RealizedFamily rf = realize_family(fam, f.g);
        // a a a b a a: run aaa -> 1, b -> 1, run aa -> 1
        EdgePath rho{1, 1, 1, 2, 1, 1};
        CHECK(coned_length(rho, f.g, rf) == doctest::Approx(3.0));
        CHECK(coned_length({1, 1, 1}, f.g, rf) == doctest::Approx(1.0));
        CHECK(coned_length({2}, f.g, rf) == doctest::Approx(1.0));
    }
    SUBCASE("path inside one core costs one") {
        ParabolicFamily fam = family_of(ab, {{"a"}});
        RealizedFamily rf = realize_family(fam, f.g);
        CHECK(coned_length({1, 1, 1, 1}, f.g, rf) == doctest::Approx(1.0));
    }
    SUBCASE("coned never exceeds metric; equality off the cores") {
        ParabolicFamily fam = family_of(ab, {{"a b a^-1 b^-1"}});
        RealizedFamily rf = realize_family(fam, f.g);
        std::mt19937_64 rng(4);
        for (int t = 0; t < 200; ++t) {
            EdgePath p;
            for (int i = 0; i < 12; ++i) {
                auto dirs = f.g.directions_at(0);
                std::vector<int> ok;
                for (int d : dirs)
                    if (p.empty() || d != -p.back()) ok.push_back(d);
                p.push_back(ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)]);
            }
            CHECK(coned_length(p, f.g, rf) <= f.g.path_length(p) + 1e-9);
        }
        CHECK(coned_length({1, 1, 1}, f.g, rf) == doctest::Approx(3.0));
    }
}

TEST_CASE("transversality constant") {
    SUBCASE("trivial family") {
        GraphMap f = metric_rose(tth::fibonacci());
        GateStructure gs = gate_structure(f);
        RealizedFamily none;
        CHECK(transversality_constant(f, none, gs) == doctest::Approx(1.0));
    }
    SUBCASE("legal loop inside a core is rejected") {
        GraphMap f = metric_rose(tth::fibonacci());
        GateStructure gs = gate_structure(f);
        ParabolicFamily fam = family_of(f.g.alphabet, {{"a"}});
        RealizedFamily rf = realize_family(fam, f.g);
        // the fibonacci gates make (a-bar, a) legal, so the a-loop is legal
        CHECK_THROWS_AS(transversality_constant(f, rf, gs), legal_cycle_in_parabolic);
    }
    SUBCASE("fibonacci relative to the commutator: 3 + 2 phi") {
        GraphMap f = metric_rose(tth::fibonacci());
        GateStructure gs = gate_structure(f);
        ParabolicFamily fam = family_of(f.g.alphabet, {{"a b a^-1 b^-1"}});
        RealizedFamily rf = realize_family(fam, f.g);
        double c = transversality_constant(f, rf, gs);
        // the longest legal path in the 4-cycle core reads a^-1 b^-1 a b,
        // of metric length 2 + 2 phi; the constant is that plus 1
        CHECK(c == doctest::Approx(3 + 2 * kGolden).epsilon(1e-9));
        // the defining inequality on random legal paths
        std::mt19937_64 rng(8);
        int checked = 0;
        for (int t = 0; t < 3000 && checked < 1000; ++t) {
            EdgePath p;
            for (int i = 0; i < 10; ++i) {
                auto dirs = f.g.directions_at(0);
                std::vector<int> ok;
                for (int d : dirs)
                    if ((p.empty() || d != -p.back()) &&
                        (p.empty() || gs.legal_turn(-p.back(), d)))
                        ok.push_back(d);
                if (ok.empty()) break;
                p.push_back(ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)]);
            }
            if (p.empty()) continue;
            ++checked;
            CHECK(coned_length(p, f.g, rf) >= f.g.path_length(p) / c - 1e-9);
        }
        CHECK(checked == 1000);
    }
}

TEST_CASE("malnormality") {
    Alphabet ab = Alphabet::standard(2);
    SUBCASE("commutator family is malnormal") {
        CHECK(check_malnormality(family_of(ab, {{"a b a^-1 b^-1"}})).malnormal);
    }
    SUBCASE("distinct letters are malnormal") {
        CHECK(check_malnormality(family_of(ab, {{"a"}, {"b"}})).malnormal);
    }
    SUBCASE("overlapping pair reported with a witness") {
        auto rep = check_malnormality(family_of(ab, {{"a"}, {"b a b^-1"}}));
        CHECK(!rep.malnormal);
        CHECK(rep.i == 1);
        CHECK(rep.j == 2);
        CHECK(!rep.witness.empty());
    }
    SUBCASE("proper power meets its own conjugates") {
        auto rep = check_malnormality(family_of(ab, {{"a a"}}));
        CHECK(!rep.malnormal);
        CHECK(rep.i == 1);
        CHECK(rep.j == 1);
    }
}

TEST_CASE("strictly type preserving") {
    SUBCASE("fibonacci fixes the commutator subgroup") {
        auto fam = family_of(Alphabet::standard(2), {{"a b a^-1 b^-1"}});
        StpResult r = check_strictly_type_preserving(tth::fibonacci(), fam);
        REQUIRE(r.ok);
        CHECK(r.targets[0]->first == 1);
        CHECK(r.targets[0]->second.empty());
    }
    SUBCASE("the a-core is not preserved by fibonacci") {
        auto fam = family_of(Alphabet::standard(2), {{"a"}});
        StpResult r = check_strictly_type_preserving(tth::fibonacci(), fam);
        CHECK(!r.ok);
        CHECK(r.failing_index == 1);
    }
    SUBCASE("trivial family is vacuously preserved") {
        ParabolicFamily fam = make_family(Alphabet::standard(2), {});
        CHECK(check_strictly_type_preserving(tth::fibonacci(), fam).ok);
    }
}

TEST_CASE("parabolic orbits") {
    SUBCASE("fibonacci commutator: period one, identity conjugator") {
        auto fam = family_of(Alphabet::standard(2), {{"a b a^-1 b^-1"}});
        OrbitReport rep = parabolic_orbits(tth::fibonacci(), fam, 16);
        CHECK(rep.K == 1);
        REQUIRE(rep.periodic.size() == 1);
        CHECK(rep.periodic[0]);
        CHECK(rep.period[0] == 1);
        CHECK(rep.hnn_conjugator[0].empty());
        CHECK(rep.description[0] == "<P_1, t^1>");
    }
    SUBCASE("pre-periodic chain P1 -> P2 -> P2") {
        // phi: a -> b, b -> a b a^-1 sends <a> to <b> and <b> to a<b>a^-1
        auto phi = tth::make_endo(2, {"b", "a b a^-1"});
        CHECK(!injectivity_counterexample_on_ball(phi, 4).has_value());
        auto fam = family_of(Alphabet::standard(2), {{"a"}, {"b"}});
        OrbitReport rep = parabolic_orbits(phi, fam, 16);
        CHECK(rep.K == 1);
        CHECK(!rep.periodic[0]);
        CHECK(rep.target[0] == 2);
        CHECK(rep.periodic[1]);
        CHECK(rep.period[1] == 1);
    }
    SUBCASE("empty family") {
        ParabolicFamily fam = make_family(Alphabet::standard(2), {});
        OrbitReport rep = parabolic_orbits(tth::fibonacci(), fam, 8);
        CHECK(rep.K == 1);
        CHECK(rep.target.empty());
    }
}

TEST_CASE("invariant factor system") {
    SUBCASE("a fixed, b over ab yields the a-subgroup") {
        auto r = find_invariant_factor_system(tth::make_endo(2, {"a", "a b"}), 3);
        REQUIRE(r.has_value());
        REQUIRE(r->subgroup_gens.size() == 1);
        CHECK(r->subgroup_gens[0] == std::vector<Word>{Word({1})});
        CHECK(r->chain.size() == 2);
        CHECK(r->chain[0].power == 1);
        CHECK(r->chain[0].complexity == 1);
    }
    SUBCASE("fibonacci irreducible at all powers up to six") {
        CHECK(!find_invariant_factor_system(tth::fibonacci(), 6).has_value());
    }
    SUBCASE("doubling irreducible") {
        CHECK(!find_invariant_factor_system(tth::doubling(), 4).has_value());
    }
}

TEST_CASE("orbit agreement with stepwise application") {
    auto fam = family_of(Alphabet::standard(2), {{"a"}, {"b"}});
    Endomorphism phi = tth::make_endo(2, {"b", "a b a^-1"});
    OrbitReport rep = parabolic_orbits(phi, fam, 16);
    for (int i = 0; i < fam.size(); ++i) {
        std::vector<Word> gens = fam.subgroup_gens[i];
        int cur = i + 1;
        for (int step = 0; step < 3; ++step) {
            std::vector<Word> image;
            for (const Word& w : gens) image.push_back(apply_endo(phi, w));
            int expect = rep.target[cur - 1];
            auto g = subgroup_conjugate_into(2, image, fam.subgroup_gens[expect - 1]);
            CHECK(g.has_value());
            gens = std::move(image);
            cur = expect;
        }
    }
}
