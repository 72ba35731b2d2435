#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mrf/io.hpp"
#include "mrf/lp.hpp"
#include "mrf/solvers.hpp"

namespace mrf {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

std::size_t env_limit(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end == v || *end) throw ValidationError(std::string(name) + " is not an integer");
    return static_cast<std::size_t>(n);
}

// Re-validation through instance-level operations only (no solver calls), so a
// witness check is independent of whatever produced the flow.
void check_flow_witness(const InstanceDocument& doc, const PathFlow& flow,
                        const std::optional<Rat>& threshold, const Limits& limits) {
    if (doc.variant == "mrf") {
        std::string why;
        if (!is_feasible(flow, doc.mrf, &why)) throw ValidationError("witness: " + why);
        if (!threshold) throw ValidationError("witness check needs a threshold");
        Rat worst(0);
        for (const Scenario& s :
             enumerate_scenarios(doc.mrf.graph, doc.mrf.k, ScenarioMode::exactly_k, nullptr,
                                 limits.scenarios))
            worst = std::max(worst, loss(flow, s));
        if (flow.total() - worst < *threshold)
            throw ValidationError("witness: robust value " + rat_str(flow.total() - worst) +
                                  " below threshold " + rat_str(*threshold));
    } else if (doc.variant == "mrf_r") {
        std::string why;
        if (!is_feasible(flow, doc.mrf_r, &why)) throw ValidationError("witness: " + why);
        if (flow.total() != doc.mrf_r.demand)
            throw ValidationError("witness: value " + rat_str(flow.total()) +
                                  " != demand " + rat_str(doc.mrf_r.demand));
        Rat bound = rat(doc.mrf_r.k - 1);
        for (const Scenario& s :
             enumerate_scenarios(doc.mrf_r.graph, doc.mrf_r.k, ScenarioMode::at_most_k,
                                 &doc.mrf_r.compat, limits.scenarios))
            if (loss(flow, s) > bound)
                throw ValidationError("witness: clique scenario loses " +
                                      rat_str(loss(flow, s)) + " > " + rat_str(bound));
        if (doc.mrf_r.integral)
            for (const auto& [p, v] : flow.entries)
                if (v != rat(1))
                    throw ValidationError("witness: non-unit path value " + rat_str(v) +
                                          " in an integral instance");
    } else if (doc.variant == "mrf_m") {
        std::string why;
        if (!is_feasible(flow, doc.mrf_m, &why)) throw ValidationError("witness: " + why);
        Rat bound = rat(doc.mrf_m.k) * doc.mrf_m.max_capacity() - 1;
        for (const Scenario& s :
             enumerate_scenarios(doc.mrf_m.graph, doc.mrf_m.k, ScenarioMode::at_most_k,
                                 nullptr, limits.scenarios))
            if (loss(flow, s) > bound)
                throw ValidationError("witness: scenario loses " + rat_str(loss(flow, s)) +
                                      " > " + rat_str(bound));
    } else {
        throw ValidationError("no flow witness for variant " + doc.variant);
    }
}

// The path/scenario LP of the robust-flow problem, assembled here so --dump-lp
// shows exactly the model the document describes.
LinearProgram mrf_lp(const MrfInstance& inst, const Limits& limits) {
    LinearProgram lp;
    std::vector<Path> paths =
        enumerate_st_paths(inst.graph, inst.source, inst.sink, limits.paths);
    std::vector<Scenario> scens = enumerate_scenarios(
        inst.graph, inst.k, ScenarioMode::exactly_k, nullptr, limits.scenarios);
    lp.sense = Sense::maximize;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::string id = "x" + std::to_string(i);
        lp.add_variable(id);
        lp.objective[id] = rat(1);
    }
    lp.add_variable("lam");
    lp.objective["lam"] = rat(-1);
    for (const Arc& a : inst.graph.arcs()) {
        std::map<std::string, Rat> row;
        for (std::size_t i = 0; i < paths.size(); ++i)
            for (int arc : paths[i].arcs)
                if (inst.graph.arc(arc).id == a.id) row["x" + std::to_string(i)] = rat(1);
        lp.add_constraint("cap_" + a.id, std::move(row), Rel::le, a.capacity);
    }
    for (std::size_t s = 0; s < scens.size(); ++s) {
        std::map<std::string, Rat> row;
        for (std::size_t i = 0; i < paths.size(); ++i)
            for (int arc : paths[i].arcs)
                if (std::find(scens[s].begin(), scens[s].end(), arc) != scens[s].end()) {
                    row["x" + std::to_string(i)] = rat(1);
                    break;
                }
        row["lam"] = rat(-1);
        lp.add_constraint("scen_" + std::to_string(s), std::move(row), Rel::le, rat(0));
    }
    return lp;
}

struct StageFiles {
    std::string base;
    std::ostream& out;
    void emit(const std::string& stage, const InstanceDocument& doc, const Provenance& p) {
        std::string inst_path = base + "." + stage + ".json";
        write_file(inst_path, serialize_instance(doc));
        write_file(base + "." + stage + ".provenance.json", serialize_provenance(p));
        out << "wrote " << inst_path << "\n";
    }
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact robust-flow laboratory"};
    app.require_subcommand(1);

    Limits limits;
    limits.paths = env_limit("MRF_PATH_LIMIT", limits.paths);
    limits.scenarios = env_limit("MRF_SCENARIO_LIMIT", limits.scenarios);
    bool canonicalize = false, dump_lp_flag = false;
    app.add_option("--path-limit", limits.paths, "max enumerated paths");
    app.add_option("--scenario-limit", limits.scenarios, "max enumerated scenarios");
    app.add_flag("--canonicalize", canonicalize,
                 "accept unreduced rationals in inputs and canonicalize them");
    app.add_flag("--dump-lp", dump_lp_flag,
                 "print the path/scenario LP of an mrf document before solving");

    std::string file, out_path, threshold_text, to_stage, spec_path, oracle_kind;
    bool check_witness = false;

    CLI::App* solve = app.add_subcommand("solve", "exact robust value of an mrf document");
    solve->add_option("file", file)->required();
    solve->add_option("--out", out_path, "witness file");

    CLI::App* decide = app.add_subcommand("decide", "decide a document, print YES/NO");
    decide->add_option("file", file)->required();
    decide->add_option("--threshold", threshold_text, "threshold L (mrf variant)");
    decide->add_option("--out", out_path, "witness file on YES");
    decide->add_flag("--check-witness", check_witness,
                     "re-validate the witness through instance operations");

    CLI::App* reduce = app.add_subcommand("reduce", "run reduction stages");
    reduce->add_option("file", file)->required();
    reduce->add_option("--to", to_stage, "mrfm | mrf | full")->required();
    reduce->add_option("--out", out_path, "output base path")->required();

    CLI::App* verify = app.add_subcommand("verify", "stage-equivalence report");
    verify->add_option("file", file)->required();

    CLI::App* oracle = app.add_subcommand("oracle", "reference oracles");
    oracle->add_option("kind", oracle_kind, "chif | clique-interdiction")->required();
    oracle->add_option("file", file)->required();

    CLI::App* gen = app.add_subcommand("gen", "generate an instance from a seeded spec");
    gen->add_option("--spec", spec_path)->required();
    gen->add_option("--out", out_path)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    bool strict = !canonicalize;

    if (gen->parsed()) {
        GeneratorSpec spec = parse_generator_spec(read_file(spec_path));
        InstanceDocument doc = generate(spec);
        write_file(out_path, serialize_instance(doc));
        out << "wrote " << out_path << " (" << doc.variant << ")\n";
        return 0;
    }

    if (oracle->parsed()) {
        InstanceDocument doc = parse_instance(read_file(file), strict);
        if (oracle_kind == "chif") {
            if (doc.variant != "coloring")
                throw ValidationError("oracle chif needs a coloring document");
            auto [chi, y] = fractional_chromatic_number(doc.graph);
            out << "chi_f = " << rat_str(chi) << "\n";
            out << (chi <= rat(doc.ell) ? "YES" : "NO") << "\n";
        } else if (oracle_kind == "clique-interdiction") {
            if (doc.variant != "clique_interdiction")
                throw ValidationError("oracle clique-interdiction needs a clique_interdiction document");
            InterdictionResult res = clique_interdiction_bruteforce(doc.graph, doc.ell, doc.r);
            out << (res.yes ? "YES" : "NO") << "\n";
            if (res.yes) {
                out << "remove:";
                for (const std::string& v : res.witness) out << " " << v;
                out << "\n";
            }
        } else {
            throw ValidationError("unknown oracle \"" + oracle_kind + "\"");
        }
        return 0;
    }

    if (solve->parsed()) {
        InstanceDocument doc = parse_instance(read_file(file), strict);
        if (doc.variant != "mrf") throw ValidationError("solve needs an mrf document");
        if (dump_lp_flag) out << dump_lp(mrf_lp(doc.mrf, limits));
        MrfSolution sol = solve_mrf(doc.mrf, limits);
        out << "value = " << rat_str(sol.value) << "\n";
        out << "flow = " << rat_str(sol.flow.total()) << "\n";
        out << "worst_loss = " << rat_str(sol.worst_loss) << "\n";
        if (!out_path.empty()) {
            write_file(out_path, serialize_flow(doc.mrf.graph, sol.flow));
            out << "wrote " << out_path << "\n";
        }
        return 0;
    }

    if (decide->parsed()) {
        InstanceDocument doc = parse_instance(read_file(file), strict);
        bool yes = false;
        PathFlow witness;
        std::optional<Rat> threshold;
        std::string witness_text;  // serialized witness (flow/coloring/vertex set)
        const Digraph* witness_graph = nullptr;

        if (doc.variant == "mrf") {
            if (!threshold_text.empty()) {
                auto r = rat_parse(threshold_text, strict);
                if (!r) throw ValidationError("--threshold is not a rational");
                threshold = *r;
            } else if (doc.mrf.threshold) {
                threshold = doc.mrf.threshold;
            } else {
                throw ValidationError("mrf document has no threshold; pass --threshold");
            }
            if (dump_lp_flag) out << dump_lp(mrf_lp(doc.mrf, limits));
            yes = decide_mrf_star(doc.mrf, *threshold, limits, &witness);
            witness_graph = &doc.mrf.graph;
        } else if (doc.variant == "mrf_r") {
            Decision d = doc.mrf_r.integral ? decide_integral_mrf_r_star(doc.mrf_r, limits)
                                            : decide_mrf_r_star(doc.mrf_r, limits);
            yes = d.yes;
            witness = d.witness;
            witness_graph = &doc.mrf_r.graph;
        } else if (doc.variant == "mrf_m") {
            Decision d = decide_mrf_m_star(doc.mrf_m, limits);
            yes = d.yes;
            witness = d.witness;
            witness_graph = &doc.mrf_m.graph;
        } else if (doc.variant == "coloring") {
            ColoringMrfrArtifact art = reduce_coloring_to_mrfr(doc.graph, doc.ell);
            Decision d = decide_mrf_r_star(art.instance, limits);
            yes = d.yes;
            if (yes) {
                FractionalColoring y = coloring_from_flow(art, d.witness, limits);
                if (check_witness) validate_coloring(doc.graph, y);
                witness_text = serialize_coloring(y);
            }
        } else if (doc.variant == "clique_interdiction") {
            CliqueMrfrArtifact art = reduce_clique_interdiction(doc.graph, doc.ell, doc.r);
            Decision d = decide_integral_mrf_r_star(art.instance, limits);
            yes = d.yes;
            if (yes) {
                std::vector<std::string> R =
                    interdiction_set_from_flow(art, d.witness, limits);
                nlohmann::ordered_json j;
                j["remove"] = R;
                witness_text = j.dump(2) + "\n";
            }
        } else {
            throw ValidationError("cannot decide variant " + doc.variant);
        }

        if (yes && witness_graph) {
            if (check_witness) check_flow_witness(doc, witness, threshold, limits);
            witness_text = serialize_flow(*witness_graph, witness);
        }
        out << (yes ? "YES" : "NO") << "\n";
        if (yes && !out_path.empty()) {
            write_file(out_path, witness_text);
            out << "wrote " << out_path << "\n";
        }
        if (yes && check_witness) out << "witness ok\n";
        return 0;
    }

    if (reduce->parsed()) {
        if (to_stage != "mrfm" && to_stage != "mrf" && to_stage != "full")
            throw ValidationError("--to must be mrfm, mrf, or full");
        InstanceDocument doc = parse_instance(read_file(file), strict);
        StageFiles files{out_path, out};
        MrfRInstance mrfr;
        if (doc.variant == "coloring") {
            ColoringMrfrArtifact art = reduce_coloring_to_mrfr(doc.graph, doc.ell);
            InstanceDocument stage;
            stage.variant = "mrf_r";
            stage.mrf_r = art.instance;
            files.emit("mrf_r", stage, art.provenance);
            mrfr = art.instance;
        } else if (doc.variant == "mrf_r") {
            mrfr = doc.mrf_r;
        } else {
            throw ValidationError("reduce needs a coloring or mrf_r document");
        }

        MrfrNormalizeArtifact norm = normalize_mrfr(mrfr);
        MrfmArtifact mm = reduce_mrfr_to_mrfm(norm.instance);
        if (to_stage == "mrfm" || to_stage == "full") {
            InstanceDocument stage;
            stage.variant = "mrf_m";
            stage.mrf_m = mm.instance;
            files.emit("mrf_m", stage, mm.provenance);
        }
        if (to_stage == "mrf" || to_stage == "full") {
            MrfArtifact wrap = reduce_mrfm_to_mrf(mm, limits);
            ExpandArtifact expand = expand_immune(wrap.instance);
            InstanceDocument stage;
            stage.variant = "mrf";
            stage.mrf = expand.instance;
            Provenance p = expand.provenance;
            for (const auto& [id, role] : wrap.provenance.nodes) p.nodes.emplace(id, role);
            for (const auto& [id, role] : wrap.provenance.arcs)
                if (!p.arcs.count(id)) p.arcs.emplace(id, role);
            files.emit("mrf", stage, p);
        }
        return 0;
    }

    // verify
    InstanceDocument doc = parse_instance(read_file(file), strict);
    MrfRInstance mrfr;
    if (doc.variant == "coloring") {
        mrfr = reduce_coloring_to_mrfr(doc.graph, doc.ell).instance;
    } else if (doc.variant == "mrf_r") {
        mrfr = doc.mrf_r;
    } else {
        throw ValidationError("verify needs a coloring or mrf_r document");
    }
    bool r_yes = decide_mrf_r_star(mrfr, limits).yes;
    out << "mrf_r: " << (r_yes ? "YES" : "NO") << "\n";
    MrfmArtifact mm = reduce_mrfr_to_mrfm(normalize_mrfr(mrfr).instance);
    bool m_yes = decide_mrf_m_star(mm.instance, limits).yes;
    out << "mrf_m: " << (m_yes ? "YES" : "NO") << "\n";
    bool agree = r_yes == m_yes;
    if (mm.f_pairs.empty()) {
        out << "mrf: skipped (no incompatible pairs to wrap)\n";
    } else {
        MrfArtifact wrap = reduce_mrfm_to_mrf(mm, limits);
        ExpandArtifact expand = expand_immune(wrap.instance);
        bool f_yes = decide_mrf_star(expand.instance, wrap.L, limits);
        out << "mrf: " << (f_yes ? "YES" : "NO") << "\n";
        agree = agree && f_yes == r_yes;
    }
    out << (agree ? "stages agree" : "STAGE MISMATCH") << "\n";
    if (!agree) err << "stage decisions disagree\n";
    return agree ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run(args, out, err);
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mrf
