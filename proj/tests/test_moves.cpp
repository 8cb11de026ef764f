#include "tt/moves.hpp"

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace tt;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

double lambda_of(const GraphMap& f) { return pf_eigen(transition_matrix(f)).lambda; }

}  // namespace

TEST_CASE("subdivision") {
    SUBCASE("fibonacci edge b split after prefix a") {
        GraphMap f = rose_representative(tth::fibonacci());
        GraphMap g = subdivide(f, 2, 1);
        g.validate();
        CHECK(g.g.num_edges() == 3);
        CHECK(g.g.num_vertices() == 2);
        CHECK(g.marking_compatible());
        CHECK(lambda_of(g) == doctest::Approx(kGolden).epsilon(1e-8));
    }
    SUBCASE("doubling split at the midpoint") {
        GraphMap f = rose_representative(tth::doubling());
        GraphMap g = subdivide(f, 1, 1);
        g.validate();
        CHECK(g.g.num_edges() == 2);
        CHECK(g.marking_compatible());
        CHECK(lambda_of(g) == doctest::Approx(2.0));
    }
    SUBCASE("endpoint positions rejected") {
        GraphMap f = rose_representative(tth::fibonacci());
        CHECK_THROWS_AS(subdivide(f, 2, 0), not_a_vertex_image);
        CHECK_THROWS_AS(subdivide(f, 2, 2), not_a_vertex_image);
    }
    SUBCASE("lambda unchanged across a subdivision chain") {
        GraphMap f = rose_representative(tth::make_endo(2, {"b a a a", "b b a b"}));
        double l0 = lambda_of(f);
        GraphMap g = subdivide(f, 1, 2);
        g = subdivide(g, 2, 1);
        g.validate();
        CHECK(g.marking_compatible());
        CHECK(lambda_of(g) == doctest::Approx(l0).epsilon(1e-8));
    }
}

TEST_CASE("folding") {
    SUBCASE("equal loop images kill a loop and flag the marking") {
        GraphMap f = rose_representative(tth::make_endo(3, {"c", "c", "a b"}));
        GraphMap g = fold(f, Turn{1, 2});
        CHECK(!g.g.marking_ok);
    }
    SUBCASE("pre-subdivision fold on a shared prefix") {
        GraphMap f = rose_representative(tth::make_endo(3, {"c a", "c b", "a b c c"}));
        GraphMap g = fold(f, Turn{1, 2});
        g.validate();
        CHECK(g.marking_compatible());
        CHECK(g.g.euler_rank() == 3);
        CHECK(lambda_of(g) <= lambda_of(f) + 1e-7);
    }
    SUBCASE("no common initial segment") {
        GraphMap f = rose_representative(tth::fibonacci());
        CHECK_THROWS_AS(fold(f, Turn{1, 2}), illegal_fold_request);
    }
}

TEST_CASE("valence one removal") {
    // rank-2 marked graph with a hanging edge c: v0 --c--> v1, image of c is a
    GraphMap f;
    f.g.alphabet = Alphabet::standard(2);
    f.g.verts.resize(2);
    f.g.base = 0;
    f.g.eorig = {0, 0, 0};
    f.g.eterm = {0, 0, 1};
    f.g.elen = {1, 1, 1};
    f.g.eword = {Word({1}), Word({2}), Word{}};
    f.g.marking = {{1}, {2}};
    f.vimage = {0, 0};
    f.eimage = {{2}, {1, 2}, {1}};
    f.phi = tth::fibonacci();
    f.validate();
    SUBCASE("hanging edge removed, map restored to the rose") {
        GraphMap g = remove_valence_one(f, 1);
        g.validate();
        CHECK(g.g.num_edges() == 2);
        CHECK(g.g.num_vertices() == 1);
        CHECK(g.marking_compatible());
        CHECK(lambda_of(g) == doctest::Approx(kGolden).epsilon(1e-8));
    }
    SUBCASE("rose vertex is not valence one") {
        GraphMap r = rose_representative(tth::fibonacci());
        CHECK_THROWS_AS(remove_valence_one(r, 0), not_valence_one);
    }
    SUBCASE("non-free vertices are never removed") {
        GraphMap g = f;
        g.g.verts[1].free = false;
        g.g.verts[1].label = "H1";
        CHECK_THROWS_AS(remove_valence_one(g, 1), not_valence_one);
    }
}

TEST_CASE("valence two removal") {
    SUBCASE("subdivide then remove returns to the rose") {
        GraphMap f = rose_representative(tth::fibonacci());
        GraphMap g = subdivide(f, 2, 1);
        TransitionMatrix m = transition_matrix(g);
        g.g = assign_metric(g, pf_eigen(transpose(m)));
        GraphMap h = remove_valence_two(g, 1);
        h.validate();
        CHECK(h.g.num_edges() == 2);
        CHECK(h.g.num_vertices() == 1);
        CHECK(h.marking_compatible());
        CHECK(lambda_of(h) == doctest::Approx(kGolden).epsilon(1e-8));
    }
    SUBCASE("valence three rejected") {
        GraphMap f = rose_representative(tth::fibonacci());
        CHECK_THROWS_AS(remove_valence_two(f, 0), not_valence_two);
    }
    SUBCASE("symmetric eigenvector entries: either choice keeps lambda") {
        GraphMap f = rose_representative(tth::sapir());
        GraphMap g = subdivide(f, 1, 1);
        TransitionMatrix m = transition_matrix(g);
        g.g = assign_metric(g, pf_eigen(transpose(m)));
        double before = pf_eigen(m).lambda;
        GraphMap h = remove_valence_two(g, 1);
        h.validate();
        CHECK(h.marking_compatible());
        CHECK(lambda_of(h) <= before + 1e-7);
    }
}

TEST_CASE("one gate repair") {
    SUBCASE("two petals with the commutator image collapse to one petal") {
        GraphMap f = rose_representative(tth::make_endo(2, {"a b a^-1 b^-1", "a b a^-1 b^-1"}));
        GraphMap g = fix_one_gate_vertex(f, 0);
        CHECK(g.g.num_edges() == 1);
        CHECK(!g.g.marking_ok);  // the identification kills a loop: rank drops
    }
    SUBCASE("two gates rejected") {
        GraphMap f = rose_representative(tth::fibonacci());
        CHECK_THROWS_AS(fix_one_gate_vertex(f, 0), not_one_gate);
    }
    SUBCASE("doubling has two gates") {
        GraphMap f = rose_representative(tth::doubling());
        CHECK_THROWS_AS(fix_one_gate_vertex(f, 0), not_one_gate);
    }
}

TEST_CASE("pretrivial collapse") {
    // c maps to a point: its forward orbit meets no cycle and the edge alone is
    // an invariant tree component, so it collapses
    GraphMap f;
    f.g.alphabet = Alphabet::standard(2);
    f.g.verts.resize(2);
    f.g.base = 0;
    f.g.eorig = {0, 0, 0};
    f.g.eterm = {0, 0, 1};
    f.g.elen = {1, 1, 1};
    f.g.eword = {Word({1}), Word({2}), Word{}};
    f.g.marking = {{1}, {2}};
    f.vimage = {0, 0};
    f.eimage = {{2}, {1, 2}, {}};
    f.phi = tth::fibonacci();
    f.validate();
    GraphMap g = collapse_pretrivial(f);
    g.validate();
    CHECK(g.g.num_edges() == 2);
    CHECK(g.g.num_vertices() == 1);
    CHECK(g.marking_compatible());

    // an edge whose image leaves the candidate set is kept
    GraphMap h = f;
    h.eimage[2] = {1};
    h.vimage = {0, 0};
    CHECK(collapse_pretrivial(h).g.num_edges() == 3);
}

TEST_CASE("train track driver") {
    SUBCASE("fibonacci: already train track, empty move log") {
        auto out = train_track_algorithm(tth::fibonacci());
        REQUIRE(out.status == TrainTrackOutcome::Status::success);
        CHECK(out.result->perron.lambda == doctest::Approx(kGolden).epsilon(1e-9));
        CHECK(out.log.moves.empty());
        CHECK(check_train_track(out.result->map).ok());
        CHECK(out.result->map.marking_compatible());
    }
    SUBCASE("doubling") {
        auto out = train_track_algorithm(tth::doubling());
        REQUIRE(out.status == TrainTrackOutcome::Status::success);
        CHECK(out.result->perron.lambda == doctest::Approx(2.0));
    }
    SUBCASE("reducible input reports the invariant subgraph") {
        auto out = train_track_algorithm(tth::make_endo(2, {"a", "a b"}));
        REQUIRE(out.status == TrainTrackOutcome::Status::not_irreducible);
        CHECK(out.witness == std::vector<int>{1});
    }
    SUBCASE("identity: reducible at the start") {
        auto out = train_track_algorithm(identity_endo(Alphabet::standard(2)));
        CHECK(out.status == TrainTrackOutcome::Status::not_irreducible);
    }
    SUBCASE("permutation: lambda = 1 success") {
        auto out = train_track_algorithm(tth::make_endo(2, {"b", "a"}));
        REQUIRE(out.status == TrainTrackOutcome::Status::success);
        CHECK(out.result->perron.lambda == doctest::Approx(1.0));
    }
    SUBCASE("map with an illegal image turn gets folded to a train track map") {
        auto phi = tth::make_endo(2, {"a b^-1 a", "a b"});
        CHECK(!injectivity_counterexample_on_ball(phi, 4).has_value());
        auto out = train_track_algorithm(phi, 10000);
        REQUIRE(out.status == TrainTrackOutcome::Status::success);
        const GraphMap& f = out.result->map;
        CHECK(check_train_track(f).ok());
        CHECK(f.marking_compatible());
        CHECK(!out.log.moves.empty());
        double rose_lambda = pf_eigen(transition_matrix(rose_representative(phi))).lambda;
        CHECK(out.result->perron.lambda <= rose_lambda + 1e-7);
    }
    SUBCASE("every driver output satisfies the marking exactly") {
        for (auto images : {std::vector<std::string>{"a b^-1 a", "a b"},
                            std::vector<std::string>{"b a a a", "b b a b"},
                            std::vector<std::string>{"b", "a b"}}) {
            auto out = train_track_algorithm(tth::make_endo(2, images));
            if (out.status == TrainTrackOutcome::Status::success)
                CHECK(out.result->map.marking_compatible());
        }
    }
}

TEST_CASE("budget exhaustion is resumable") {
    auto phi = tth::make_endo(2, {"a b^-1 a", "a b"});
    auto out = train_track_algorithm(phi, 0);
    REQUIRE(out.status == TrainTrackOutcome::Status::budget_exhausted);
    REQUIRE(out.state.has_value());
    auto resumed = train_track_algorithm_from(*out.state, 10000);
    REQUIRE(resumed.status == TrainTrackOutcome::Status::success);
    CHECK(check_train_track(resumed.result->map).ok());
}

TEST_CASE("stretch factor never increases along the move log") {
    auto phi = tth::make_endo(2, {"a b^-1 a", "a b"});
    auto out = train_track_algorithm(phi);
    REQUIRE(out.status == TrainTrackOutcome::Status::success);
    for (const auto& mv : out.log.moves)
        CHECK(mv.lambda_after <= mv.lambda_before + mv.radius_before + mv.radius_after + 1e-7);
}
