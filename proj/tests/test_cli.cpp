#include "tt/json_io.hpp"

#include "doctest.h"
#include "tt/core_graph.hpp"
#include "helpers.hpp"

using namespace tt;

namespace {

json fib_doc() {
    return json{{"schema_version", 1},
                {"rank", 2},
                {"generators", {"a", "b"}},
                {"images", {{"a", "b"}, {"b", "a b"}}}};
}

}  // namespace

TEST_CASE("endomorphism document round trip") {
    Endomorphism phi = endo_from_json(fib_doc());
    CHECK(phi.image(1) == parse_word(phi.alphabet, "b"));
    CHECK(endo_from_json(endo_to_json(phi)).images == phi.images);
    SUBCASE("schema violations") {
        json bad = fib_doc();
        bad.erase("rank");
        CHECK_THROWS_AS(endo_from_json(bad), schema_error);
        bad = fib_doc();
        bad["schema_version"] = 7;
        CHECK_THROWS_AS(endo_from_json(bad), schema_error);
        bad = fib_doc();
        bad["images"].erase("b");
        CHECK_THROWS_AS(endo_from_json(bad), schema_error);
        bad = fib_doc();
        bad["generators"] = {"a", "a"};
        CHECK_THROWS_AS(endo_from_json(bad), schema_error);
    }
}

TEST_CASE("graph and map documents round trip") {
    GraphMap f = rose_representative(tth::fibonacci());
    json doc = map_to_json(f);
    GraphMap g = map_from_json(doc);
    CHECK(g.eimage == f.eimage);
    CHECK(g.vimage == f.vimage);
    CHECK(g.g.marking == f.g.marking);
    CHECK(g.marking_compatible());
    CHECK(map_to_json(g) == doc);
}

TEST_CASE("traintrack pipeline") {
    SUBCASE("fibonacci artifact") {
        JobOptions opt;
        CliResult res = run_traintrack(fib_doc(), opt);
        CHECK(res.exit_code == 0);
        CHECK(res.artifact.at("lambda").get<std::string>().substr(0, 12) == "1.6180339887");
        // the stored map re-parses and revalidates
        GraphMap f = map_from_json(res.artifact.at("map"));
        CHECK(f.marking_compatible());
    }
    SUBCASE("identity artifact") {
        json doc{{"schema_version", 1},
                 {"rank", 2},
                 {"generators", {"a", "b"}},
                 {"images", {{"a", "a"}, {"b", "b"}}}};
        JobOptions opt;
        CliResult res = run_traintrack(doc, opt);
        // the identity transition matrix is reducible: exits 3 with a witness
        CHECK(res.exit_code == 3);
    }
    SUBCASE("reducible without relative-auto exits 3") {
        json doc{{"schema_version", 1},
                 {"rank", 2},
                 {"generators", {"a", "b"}},
                 {"images", {{"a", "a"}, {"b", "a b"}}}};
        JobOptions opt;
        CliResult res = run_traintrack(doc, opt);
        CHECK(res.exit_code == 3);
        CHECK(res.artifact.at("not_irreducible") == json(std::vector<int>{1}));
    }
    SUBCASE("reducible with relative-auto reports the family") {
        json doc{{"schema_version", 1},
                 {"rank", 2},
                 {"generators", {"a", "b"}},
                 {"images", {{"a", "a"}, {"b", "a b"}}}};
        JobOptions opt;
        opt.relative_auto = true;
        CliResult res = run_traintrack(doc, opt);
        CHECK(res.exit_code == 3);
        CHECK(res.artifact.contains("invariant_family"));
        CHECK(res.artifact.at("invariant_family").at("subgroups")[0][0] == "a");
    }
    SUBCASE("schema error exits 2") {
        CliResult res = run_traintrack(json{{"bogus", 1}}, JobOptions{});
        CHECK(res.exit_code == 2);
    }
}

TEST_CASE("analyze pipeline determinism") {
    json fam{{"subgroups", {{"a b a^-1 b^-1"}}}};
    JobOptions opt;
    opt.do_atoroidal = true;
    opt.ato_k = 2;
    opt.ato_d = 1;
    opt.ato_len = 4;
    opt.growth_words = {"a"};
    opt.horizon = 8;
    CliResult r1 = run_analyze(fib_doc(), &fam, opt);
    CliResult r2 = run_analyze(fib_doc(), &fam, opt);
    CHECK(r1.exit_code == 0);
    CHECK(r1.artifact.dump() == r2.artifact.dump());
    CHECK(r1.artifact.at("atoroidal").at("witness").at("k") == 2);
    CHECK(r1.artifact.at("parabolic").at("malnormal") == true);
    CHECK(r1.artifact.at("parabolic").at("orbits").at("K") == 1);
    CHECK(r1.artifact.at("constants").at("power") == 4);
}

TEST_CASE("rank-one pipelines") {
    json doc{{"schema_version", 1},
             {"rank", 1},
             {"generators", {"a"}},
             {"images", {{"a", "a a"}}}};
    SUBCASE("doubling atoroidal scan in the report") {
        JobOptions opt;
        opt.do_atoroidal = true;
        opt.ato_k = 2;
        opt.ato_d = 2;
        opt.ato_len = 4;
        CliResult res = run_analyze(doc, nullptr, opt);
        CHECK(res.exit_code == 0);
        auto w = res.artifact.at("atoroidal").at("witness");
        CHECK(w.at("g") == "a");
        CHECK(w.at("k") == 1);
        CHECK(w.at("d") == 2);
        CHECK(w.at("baumslag_solitar") == true);
    }
    SUBCASE("flare on rank one reports the exclusion") {
        JobOptions opt;
        opt.do_flare = true;
        opt.flare_lambda = 2;
        opt.flare_m = 4;
        opt.flare_len = 6;
        CliResult res = run_analyze(doc, nullptr, opt);
        CHECK(res.exit_code == 0);
        CHECK(res.artifact.at("flare").contains("error"));
        std::string msg = res.artifact.at("flare").at("error");
        CHECK(msg.find("Z") != std::string::npos);
    }
}

TEST_CASE("core graph document round trip") {
    Alphabet ab = Alphabet::standard(2);
    CoreGraph c = stallings_core(2, {parse_word(ab, "a b a^-1 b^-1")});
    CoreGraph back = core_from_json(core_to_json(c));
    CHECK(back.num_vertices() == c.num_vertices());
    CHECK(back.loops_at_base(parse_word(ab, "a b a^-1 b^-1")));
    CHECK(!back.loops_at_base(parse_word(ab, "a")));
}
