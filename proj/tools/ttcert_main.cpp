#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tt/json_io.hpp"

namespace {

tt::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tt::schema_error("cannot open " + path);
    tt::json doc;
    try {
        in >> doc;
    } catch (const tt::json::exception& e) {
        throw tt::schema_error(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return doc;
}

void emit(const tt::json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << doc.dump(2) << "\n";
    }
}

// move logs also ship as JSON lines next to the artifact
void emit_move_log(const tt::json& doc, const std::string& out_path) {
    if (out_path.empty() || !doc.contains("move_log")) return;
    std::ofstream out(out_path + ".moves.jsonl");
    for (const auto& mv : doc.at("move_log")) out << mv.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"train track representatives and relative hyperbolicity certificates"};
    app.require_subcommand(1);

    std::string in_path, family_path, out_path;
    tt::JobOptions opt;
    std::vector<double> flare_args;
    std::vector<int> ato_args;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--in", in_path, "endomorphism JSON document")->required();
        cmd->add_option("--out", out_path, "output path (stdout when omitted)");
        cmd->add_option("--budget", opt.budget, "move budget for the train track driver");
        cmd->add_option("--tol", opt.tol, "Perron-Frobenius enclosure tolerance");
        cmd->add_option("--seed", opt.seed, "seed for randomized sections");
        cmd->add_flag("--relative-auto", opt.relative_auto,
                      "on reducibility, produce an invariant factor system");
    };

    CLI::App* tt_cmd = app.add_subcommand("traintrack", "compute a train track representative");
    add_common(tt_cmd);

    CLI::App* an_cmd = app.add_subcommand("analyze", "constants, Nielsen, growth, scans, flaring");
    add_common(an_cmd);
    an_cmd->add_option("--family", family_path, "parabolic family JSON document");
    an_cmd->add_option("--horizon", opt.horizon, "growth horizon");
    an_cmd->add_option("--words", opt.growth_words, "words to classify for growth");
    an_cmd->add_option("--nielsen-period", opt.nielsen_period_max, "Nielsen period bound");
    an_cmd->add_option("--flare", flare_args, "lambda M L for the flaring certificate")
        ->expected(3);
    an_cmd->add_option("--atoroidal", ato_args, "k d l for the atoroidal scan")->expected(3);

    CLI11_PARSE(app, argc, argv);

    try {
        tt::json endo = load_json(in_path);
        tt::CliResult res;
        if (tt_cmd->parsed()) {
            res = tt::run_traintrack(endo, opt);
        } else {
            if (!flare_args.empty()) {
                opt.do_flare = true;
                opt.flare_lambda = flare_args[0];
                opt.flare_m = static_cast<int>(flare_args[1]);
                opt.flare_len = static_cast<int>(flare_args[2]);
            }
            if (!ato_args.empty()) {
                opt.do_atoroidal = true;
                opt.ato_k = ato_args[0];
                opt.ato_d = ato_args[1];
                opt.ato_len = ato_args[2];
            }
            tt::json family;
            bool have_family = !family_path.empty();
            if (have_family) family = load_json(family_path);
            res = tt::run_analyze(endo, have_family ? &family : nullptr, opt);
        }
        emit(res.artifact, out_path);
        if (tt_cmd->parsed()) emit_move_log(res.artifact, out_path);
        return res.exit_code;
    } catch (const tt::schema_error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
