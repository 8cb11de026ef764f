#pragma once

#include <string>

#include "json.hpp"
#include "tt/dynamics.hpp"
#include "tt/moves.hpp"

namespace tt {

using json = nlohmann::json;

// decimal string with 12 significant digits, the exchange format for reals
std::string decimal(double x);

json endo_to_json(const Endomorphism& phi);
Endomorphism endo_from_json(const json& doc);  // throws schema_error

json family_to_json(const Alphabet& ab, const std::vector<std::vector<Word>>& gens);
std::vector<std::vector<Word>> family_from_json(const Alphabet& ab, const json& doc);

json graph_to_json(const MarkedGraph& g);
MarkedGraph graph_from_json(const json& doc);

json core_to_json(const CoreGraph& c);
CoreGraph core_from_json(const json& doc);

// one JSON object per line, the exchange form of a move log
std::string move_log_to_jsonl(const MoveLog& log);

json map_to_json(const GraphMap& f);
GraphMap map_from_json(const json& doc);

json perron_to_json(const PerronData& pd);
json matrix_to_json(const TransitionMatrix& m);
json move_log_to_json(const MoveLog& log);
json constants_to_json(const Constants& c);
json nielsen_to_json(const MarkedGraph& g, const NielsenReport& rep);
json growth_to_json(const Alphabet& ab, const Word& g, const GrowthVerdict& v);
json flare_to_json(const Alphabet& ab, const FlareCertificate& cert);
json orbits_to_json(const Alphabet& ab, const OrbitReport& rep);

// --- CLI pipelines -----------------------------------------------------------

struct JobOptions {
    int budget = 10000;
    int horizon = 12;
    double tol = kDefaultTol;
    bool relative_auto = false;
    unsigned seed = 12345;
    // analyze sections
    bool do_flare = false;
    double flare_lambda = 2.0;
    int flare_m = 8;
    int flare_len = 10;
    bool do_atoroidal = false;
    int ato_k = 3, ato_d = 3, ato_len = 4;
    std::vector<std::string> growth_words;
    int nielsen_period_max = 4;
};

struct CliResult {
    int exit_code = 0;
    json artifact;
};

CliResult run_traintrack(const json& endo_doc, const JobOptions& opt);
CliResult run_analyze(const json& endo_doc, const json* family_doc, const JobOptions& opt);

}  // namespace tt
