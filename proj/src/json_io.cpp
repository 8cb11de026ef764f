#include "tt/json_io.hpp"

#include <cstdio>

namespace tt {

std::string decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json endo_to_json(const Endomorphism& phi) {
    json images = json::object();
    for (int i = 1; i <= phi.alphabet.rank; ++i)
        images[phi.alphabet.name(i)] = format_word(phi.alphabet, phi.image(i));
    return json{{"schema_version", 1},
                {"rank", phi.alphabet.rank},
                {"generators", phi.alphabet.names},
                {"images", images}};
}

Endomorphism endo_from_json(const json& doc) {
    try {
        if (!doc.is_object()) throw schema_error("endomorphism document must be an object");
        if (doc.value("schema_version", 0) != 1) throw schema_error("unsupported schema_version");
        Endomorphism phi;
        phi.alphabet.rank = doc.at("rank").get<int>();
        if (phi.alphabet.rank < 1) throw schema_error("rank must be >= 1");
        phi.alphabet.names = doc.at("generators").get<std::vector<std::string>>();
        if (static_cast<int>(phi.alphabet.names.size()) != phi.alphabet.rank)
            throw schema_error("generators list must match the rank");
        for (int i = 0; i < phi.alphabet.rank; ++i)
            for (int j = i + 1; j < phi.alphabet.rank; ++j)
                if (phi.alphabet.names[i] == phi.alphabet.names[j])
                    throw schema_error("generator names must be distinct");
        const json& images = doc.at("images");
        for (int i = 1; i <= phi.alphabet.rank; ++i) {
            const std::string& name = phi.alphabet.name(i);
            if (!images.contains(name)) throw schema_error("missing image for " + name);
            phi.images.push_back(parse_word(phi.alphabet, images.at(name).get<std::string>()));
        }
        return phi;
    } catch (const json::exception& e) {
        throw schema_error(std::string("malformed endomorphism document: ") + e.what());
    } catch (const unknown_letter& e) {
        throw schema_error(std::string("malformed word: ") + e.what());
    }
}

json family_to_json(const Alphabet& ab, const std::vector<std::vector<Word>>& gens) {
    json subs = json::array();
    for (const auto& g : gens) {
        json one = json::array();
        for (const Word& w : g) one.push_back(format_word(ab, w));
        subs.push_back(one);
    }
    return json{{"subgroups", subs}};
}

std::vector<std::vector<Word>> family_from_json(const Alphabet& ab, const json& doc) {
    try {
        std::vector<std::vector<Word>> out;
        for (const auto& sub : doc.at("subgroups")) {
            std::vector<Word> gens;
            for (const auto& s : sub) gens.push_back(parse_word(ab, s.get<std::string>()));
            out.push_back(gens);
        }
        return out;
    } catch (const json::exception& e) {
        throw schema_error(std::string("malformed family document: ") + e.what());
    } catch (const unknown_letter& e) {
        throw schema_error(std::string("malformed family word: ") + e.what());
    }
}

json graph_to_json(const MarkedGraph& g) {
    json verts = json::array();
    for (const auto& v : g.verts) verts.push_back(json{{"free", v.free}, {"label", v.label}});
    json edges = json::array();
    for (int e = 0; e < g.num_edges(); ++e)
        edges.push_back(json{{"from", g.eorig[e]},
                             {"to", g.eterm[e]},
                             {"length", decimal(g.elen[e])},
                             {"word", format_word(g.alphabet, g.eword[e])}});
    return json{{"vertices", verts},
                {"edges", edges},
                {"base", g.base},
                {"marking", g.marking},
                {"rank", g.alphabet.rank},
                {"generators", g.alphabet.names}};
}

MarkedGraph graph_from_json(const json& doc) {
    try {
        MarkedGraph g;
        g.alphabet.rank = doc.at("rank").get<int>();
        g.alphabet.names = doc.at("generators").get<std::vector<std::string>>();
        for (const auto& v : doc.at("vertices"))
            g.verts.push_back({v.at("free").get<bool>(), v.at("label").get<std::string>()});
        for (const auto& e : doc.at("edges")) {
            g.eorig.push_back(e.at("from").get<int>());
            g.eterm.push_back(e.at("to").get<int>());
            g.elen.push_back(std::stod(e.at("length").get<std::string>()));
            g.eword.push_back(parse_word(g.alphabet, e.at("word").get<std::string>()));
        }
        g.base = doc.at("base").get<int>();
        g.marking = doc.at("marking").get<std::vector<EdgePath>>();
        g.validate(false);
        return g;
    } catch (const json::exception& e) {
        throw schema_error(std::string("malformed graph document: ") + e.what());
    }
}

json map_to_json(const GraphMap& f) {
    return json{{"graph", graph_to_json(f.g)},
                {"vertex_images", f.vimage},
                {"edge_images", f.eimage},
                {"endomorphism", endo_to_json(f.phi)}};
}

GraphMap map_from_json(const json& doc) {
    try {
        GraphMap f;
        f.g = graph_from_json(doc.at("graph"));
        f.vimage = doc.at("vertex_images").get<std::vector<int>>();
        f.eimage = doc.at("edge_images").get<std::vector<EdgePath>>();
        f.phi = endo_from_json(doc.at("endomorphism"));
        f.validate();
        return f;
    } catch (const json::exception& e) {
        throw schema_error(std::string("malformed map document: ") + e.what());
    }
}

json core_to_json(const CoreGraph& c) {
    json arrows = json::array();
    for (int v = 0; v < c.num_vertices(); ++v)
        for (int lab = 1; lab <= c.num_labels; ++lab)
            if (c.step(v, lab) >= 0)
                arrows.push_back(json{{"from", v}, {"label", lab}, {"to", c.step(v, lab)}});
    return json{{"vertices", c.num_vertices()},
                {"labels", c.num_labels},
                {"base", c.base},
                {"arrows", arrows}};
}

CoreGraph core_from_json(const json& doc) {
    try {
        CoreGraph c;
        c.num_labels = doc.at("labels").get<int>();
        int nv = doc.at("vertices").get<int>();
        for (int i = 0; i < nv; ++i) c.add_vertex();
        for (const auto& a : doc.at("arrows"))
            c.set_arrow(a.at("from").get<int>(), a.at("label").get<int>(), a.at("to").get<int>());
        c.base = doc.at("base").get<int>();
        return c;
    } catch (const json::exception& e) {
        throw schema_error(std::string("malformed core document: ") + e.what());
    }
}

std::string move_log_to_jsonl(const MoveLog& log) {
    std::string out;
    for (const auto& mv : log.moves) {
        json line{{"kind", mv.kind},
                  {"detail", mv.detail},
                  {"lambda_before", decimal(mv.lambda_before)},
                  {"radius_before", decimal(mv.radius_before)},
                  {"lambda_after", decimal(mv.lambda_after)},
                  {"radius_after", decimal(mv.radius_after)}};
        out += line.dump();
        out += '\n';
    }
    return out;
}

json perron_to_json(const PerronData& pd) {
    json ev = json::array();
    for (double x : pd.eigenvector) ev.push_back(decimal(x));
    return json{{"lambda", decimal(pd.lambda)},
                {"enclosure_radius", decimal(pd.radius)},
                {"eigenvector", ev},
                {"tolerance", decimal(pd.tol)}};
}

json matrix_to_json(const TransitionMatrix& m) {
    json rows = json::array();
    for (const auto& r : m.a) rows.push_back(r);
    return json{{"size", m.size()}, {"rows", rows}};
}

json move_log_to_json(const MoveLog& log) {
    json moves = json::array();
    for (const auto& mv : log.moves)
        moves.push_back(json{{"kind", mv.kind},
                             {"detail", mv.detail},
                             {"lambda_before", decimal(mv.lambda_before)},
                             {"radius_before", decimal(mv.radius_before)},
                             {"lambda_after", decimal(mv.lambda_after)},
                             {"radius_after", decimal(mv.radius_after)}});
    return moves;
}

json constants_to_json(const Constants& c) {
    json out{{"power", c.power},
             {"lambda", decimal(c.lambda)},
             {"lambda_radius", decimal(c.perron.radius)},
             {"c_bcl", decimal(c.c_bcl)},
             {"c_transversality", decimal(c.c_tr)},
             {"expanding", c.expanding},
             {"critical_defined", c.critical_defined},
             {"nu_ok", c.nu_ok},
             {"k_li", decimal(c.k_li)},
             {"m_nielsen", c.m_nielsen}};
    if (c.critical_defined) {
        out["critical"] = decimal(c.critical);
        out["nu"] = decimal(c.nu);
    }
    return out;
}

json nielsen_to_json(const MarkedGraph& g, const NielsenReport& rep) {
    json paths = json::array();
    for (const auto& np : rep.paths)
        paths.push_back(json{{"path", np.path},
                             {"period", np.period},
                             {"translation", format_word(g.alphabet, np.translation)}});
    return json{{"paths", paths},
                {"search_bound", decimal(rep.search_bound)},
                {"m_nielsen", rep.m_nielsen},
                {"chain_saturated", rep.chain_saturated}};
}

json growth_to_json(const Alphabet& ab, const Word& g, const GrowthVerdict& v) {
    json out{{"word", format_word(ab, g)}, {"lengths", v.lengths}};
    if (v.kind == GrowthVerdict::Kind::exponential) {
        out["kind"] = "exponential";
        out["certificate"] = json{{"iterate", v.certificate_iterate},
                                  {"segment", v.certificate_segment},
                                  {"length", decimal(v.certificate_length)},
                                  {"growth_guarantee", v.growth_guarantee}};
    } else {
        out["kind"] = "polynomial_up_to_horizon";
        out["horizon"] = v.horizon;
        out["fitted_degree"] = v.fitted_degree;
        out["fit_stabilized"] = v.fit_stabilized;
    }
    return out;
}

json flare_to_json(const Alphabet& ab, const FlareCertificate& cert) {
    json failures = json::array();
    for (const auto& c : cert.failures)
        failures.push_back(json{{"word", format_word(ab, c.word)},
                                {"cyclic", c.cyclic},
                                {"l0", decimal(c.l0)},
                                {"lM", decimal(c.lM)},
                                {"l2M", decimal(c.l2M)}});
    return json{{"lambda_flare", decimal(cert.lambda_flare)},
                {"M", cert.M},
                {"valid", cert.valid},
                {"max_word_length", cert.max_word_length},
                {"candidates", cert.candidate_count},
                {"failures", failures},
                {"case_counts",
                 json{{"case1", cert.case_counts[1]},
                      {"case2", cert.case_counts[2]},
                      {"case3", cert.case_counts[3]},
                      {"case4", cert.case_counts[4]}}},
                {"fresh_samples", cert.fresh_samples},
                {"fresh_violations", cert.fresh_violations},
                {"note", cert.note}};
}

json orbits_to_json(const Alphabet& ab, const OrbitReport& rep) {
    json entries = json::array();
    for (std::size_t i = 0; i < rep.target.size(); ++i)
        entries.push_back(json{{"target", rep.target[i]},
                               {"conjugator", format_word(ab, rep.conjugator[i])},
                               {"periodic", static_cast<bool>(rep.periodic[i])},
                               {"period", rep.period[i]},
                               {"hnn_conjugator", format_word(ab, rep.hnn_conjugator[i])},
                               {"description", rep.description[i]}});
    return json{{"K", rep.K}, {"subgroups", entries}};
}

CliResult run_traintrack(const json& endo_doc, const JobOptions& opt) {
    CliResult res;
    Endomorphism phi;
    try {
        phi = endo_from_json(endo_doc);
    } catch (const schema_error& e) {
        res.exit_code = 2;
        res.artifact = json{{"error", e.what()}};
        return res;
    }
    json out{{"schema_version", 1}, {"command", "traintrack"}};
    auto screen = injectivity_counterexample_on_ball(phi, 3);
    if (screen)
        out["injectivity_warning"] = format_word(phi.alphabet, *screen);

    TrainTrackOutcome tto = train_track_algorithm(phi, opt.budget, opt.tol);
    out["move_log"] = move_log_to_json(tto.log);
    if (tto.status == TrainTrackOutcome::Status::not_irreducible) {
        if (!opt.relative_auto) {
            out["not_irreducible"] = tto.witness;
            res.exit_code = 3;
            res.artifact = out;
            return res;
        }
        auto fam = find_invariant_factor_system(phi, 6);
        json chain = json::array();
        if (fam) {
            for (const auto& step : fam->chain)
                chain.push_back(json{{"power", step.power},
                                     {"witness", step.witness_letters},
                                     {"components", step.component_count},
                                     {"complexity", step.complexity}});
            out["invariant_family"] = family_to_json(phi.alphabet, fam->subgroup_gens);
        }
        out["not_irreducible"] = tto.witness;
        out["invariant_chain"] = chain;
        res.exit_code = 3;
        res.artifact = out;
        return res;
    }
    if (tto.status == TrainTrackOutcome::Status::budget_exhausted) {
        out["budget_exhausted"] = true;
        out["state"] = map_to_json(*tto.state);
        res.exit_code = 4;
        res.artifact = out;
        return res;
    }
    const TrainTrackSuccess& ok = *tto.result;
    out["map"] = map_to_json(ok.map);
    out["perron"] = perron_to_json(ok.perron);
    out["lambda"] = decimal(ok.perron.lambda);
    out["transition_matrix"] = matrix_to_json(transition_matrix(ok.map));
    res.artifact = out;
    return res;
}

CliResult run_analyze(const json& endo_doc, const json* family_doc, const JobOptions& opt) {
    CliResult res;
    Endomorphism phi;
    std::vector<std::vector<Word>> fam_gens;
    try {
        phi = endo_from_json(endo_doc);
        if (family_doc) fam_gens = family_from_json(phi.alphabet, *family_doc);
    } catch (const schema_error& e) {
        res.exit_code = 2;
        res.artifact = json{{"error", e.what()}};
        return res;
    }
    json out{{"schema_version", 1}, {"command", "analyze"}, {"seed", opt.seed}};

    TrainTrackOutcome tto = train_track_algorithm(phi, opt.budget, opt.tol);
    if (tto.status == TrainTrackOutcome::Status::not_irreducible) {
        json sect{{"witness", tto.witness}};
        if (opt.relative_auto) {
            auto fam = find_invariant_factor_system(phi, 6);
            if (fam) sect["invariant_family"] = family_to_json(phi.alphabet, fam->subgroup_gens);
        }
        out["not_irreducible"] = sect;
        res.exit_code = 3;
        res.artifact = out;
        return res;
    }
    if (tto.status == TrainTrackOutcome::Status::budget_exhausted) {
        out["budget_exhausted"] = true;
        res.exit_code = 4;
        res.artifact = out;
        return res;
    }
    const GraphMap& f = tto.result->map;
    out["traintrack"] = json{{"lambda", decimal(tto.result->perron.lambda)},
                             {"map", map_to_json(f)},
                             {"move_log", move_log_to_json(tto.log)}};

    ParabolicFamily family = make_family(phi.alphabet, fam_gens);
    json famsec = json::object();
    if (!family.trivial()) {
        json cores = json::array();
        for (const auto& c : family.based_cores) cores.push_back(core_to_json(c));
        famsec["cores"] = cores;
        auto mal = check_malnormality(family);
        famsec["malnormal"] = mal.malnormal;
        if (!mal.malnormal) {
            famsec["overlap"] = json{{"i", mal.i},
                                     {"j", mal.j},
                                     {"witness", format_word(phi.alphabet, mal.witness)}};
        }
        try {
            StpResult stp = check_strictly_type_preserving(phi, family);
            famsec["strictly_type_preserving"] = stp.ok;
            if (stp.ok) famsec["orbits"] = orbits_to_json(phi.alphabet, parabolic_orbits(phi, family, 64));
            else famsec["failing_index"] = stp.failing_index;
        } catch (const error& e) {
            famsec["error"] = e.what();
        }
    }
    out["parabolic"] = famsec;

    // constants relative to the family
    std::optional<ConstantsResult> consts;
    json constsec = json::object();
    try {
        GateStructure gates0 = gate_structure(f);
        RealizedFamily rfam = realize_family(family, f.g);
        double c_tr = transversality_constant(f, rfam, gates0);
        consts = compute_constants(f, c_tr);
        constsec = constants_to_json(consts->c);
    } catch (const error& e) {
        constsec["error"] = e.what();
    }

    json nielsec = json::object();
    std::optional<NielsenReport> nielsen;
    try {
        GateStructure gates0 = gate_structure(f);
        nielsen = enumerate_nielsen_paths(f, gates0, opt.nielsen_period_max, opt.tol);
        if (consts) consts->c.m_nielsen = nielsen->m_nielsen;
        nielsec = nielsen_to_json(f.g, *nielsen);
    } catch (const error& e) {
        nielsec["error"] = e.what();
    }
    if (consts) constsec = constants_to_json(consts->c);
    out["constants"] = constsec;
    out["nielsen"] = nielsec;

    json growth = json::array();
    for (const std::string& ws : opt.growth_words) {
        json one;
        try {
            Word g = parse_word(phi.alphabet, ws);
            GateStructure gates_p = gate_structure(consts ? consts->map : f);
            RealizedFamily rfam =
                realize_family(family, (consts ? consts->map : f).g);
            GrowthVerdict v = classify_growth(consts ? consts->map : f, gates_p,
                                              consts ? std::optional<Constants>(consts->c)
                                                     : std::nullopt,
                                              g, opt.horizon, family.trivial() ? nullptr : &rfam);
            one = growth_to_json(phi.alphabet, g, v);
        } catch (const error& e) {
            one = json{{"word", ws}, {"error", e.what()}};
        }
        growth.push_back(one);
    }
    out["growth"] = growth;

    if (opt.do_atoroidal) {
        auto witness = atoroidal_scan(phi, opt.ato_k, opt.ato_d, opt.ato_len);
        json sect{{"k_max", opt.ato_k}, {"d_max", opt.ato_d}, {"len_max", opt.ato_len}};
        if (witness) {
            sect["witness"] = json{{"g", format_word(phi.alphabet, witness->g)},
                                   {"k", witness->k},
                                   {"d", witness->d},
                                   {"baumslag_solitar", witness->baumslag_solitar}};
        } else {
            sect["witness"] = nullptr;
        }
        out["atoroidal"] = sect;
    }

    if (opt.do_flare) {
        json sect;
        try {
            if (!consts) throw no_critical_constant("constants unavailable");
            GateStructure gates_b = gate_structure(f);
            RealizedFamily rfam = realize_family(family, f.g);
            FlareCertificate cert =
                flare_certificate(f, gates_b, consts->c, family, rfam, opt.flare_lambda,
                                  opt.flare_m, opt.flare_len, 500, opt.seed);
            sect = flare_to_json(phi.alphabet, cert);
        } catch (const error& e) {
            sect = json{{"error", e.what()}};
        }
        out["flare"] = sect;
    }

    res.artifact = out;
    return res;
}

}  // namespace tt
