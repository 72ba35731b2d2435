#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrf/io.hpp"
#include "mrf/solvers.hpp"

using namespace mrf;
namespace fs = std::filesystem;

namespace {

Arc unit(const std::string& id, const std::string& tail, const std::string& head) {
    return Arc{id, tail, head, rat(1), false};
}

MrfRInstance tiny_yes() {
    Digraph g = Digraph::build({"s", "t"}, {unit("a", "s", "t"), unit("c", "s", "t")});
    return MrfRInstance{g, "s", "t", 2, CompatGraph{}, rat(2), false, {}};
}

MrfRInstance tiny_no() {
    Digraph g = Digraph::build(
        {"s", "t"}, {unit("a", "s", "t"), unit("b", "s", "t"), unit("c", "s", "t")});
    return MrfRInstance{g, "s", "t", 2, CompatGraph({{"a", "b"}}), rat(3), false, {}};
}

InstanceDocument mrf_doc() {
    InstanceDocument doc;
    doc.variant = "mrf";
    doc.mrf = MrfInstance{
        Digraph::build({"s", "t"}, {unit("a", "s", "t"), unit("b", "s", "t")}), "s", "t", 1,
        rat(1)};
    return doc;
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "mrf_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("instance documents round-trip through parse and serialize") {
    std::vector<InstanceDocument> docs;
    docs.push_back(mrf_doc());

    InstanceDocument r;
    r.variant = "mrf_r";
    r.mrf_r = tiny_no();
    docs.push_back(r);

    InstanceDocument m;
    m.variant = "mrf_m";
    m.mrf_m = reduce_mrfr_to_mrfm(normalize_mrfr(tiny_yes()).instance).instance;
    docs.push_back(m);

    InstanceDocument col;
    col.variant = "coloring";
    col.graph = UndirectedGraph::build({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    col.ell = 2;
    docs.push_back(col);

    InstanceDocument ci = col;
    ci.variant = "clique_interdiction";
    ci.r = 1;
    docs.push_back(ci);

    for (const InstanceDocument& doc : docs) {
        CAPTURE(doc.variant);
        std::string text = serialize_instance(doc);
        InstanceDocument back = parse_instance(text);
        CHECK(back.variant == doc.variant);
        CHECK(serialize_instance(back) == text);
    }
}

TEST_CASE("rational strictness and schema errors carry element paths") {
    std::string text = serialize_instance(mrf_doc());
    std::string loose = text;
    auto pos = loose.find("\"1\"");
    REQUIRE(pos != std::string::npos);
    loose.replace(pos, 3, "\"3/6\"");

    CHECK_THROWS_WITH_AS(parse_instance(loose, true),
                         doctest::Contains("arcs[0].capacity"), ValidationError);
    InstanceDocument relaxed = parse_instance(loose, false);
    CHECK(relaxed.mrf.graph.arc(0).capacity == rat(1, 2));
    CHECK(serialize_instance(relaxed).find("1/2") != std::string::npos);

    std::string bad_variant = text;
    bad_variant.replace(bad_variant.find("\"mrf\""), 5, "\"mrq\"");
    CHECK_THROWS_WITH_AS(parse_instance(bad_variant), doctest::Contains("unknown variant"),
                         ValidationError);
    CHECK_THROWS_AS(parse_instance("not json"), ValidationError);
}

TEST_CASE("flow and coloring witnesses round-trip") {
    MrfRInstance inst = tiny_yes();
    Decision d = decide_mrf_r_star(inst);
    REQUIRE(d.yes);
    std::string text = serialize_flow(inst.graph, d.witness);
    PathFlow back = parse_flow(inst.graph, text);
    CHECK(back.entries == d.witness.entries);
    CHECK_THROWS_WITH_AS(parse_flow(inst.graph, "{\"paths\": [{\"arcs\": [\"zz\"], \"value\": \"1\"}]}"),
                         doctest::Contains("unknown arc"), ValidationError);

    FractionalColoring y;
    y.weights[{"a", "c"}] = rat(1, 2);
    y.weights[{"b"}] = rat(1);
    std::string ct = serialize_coloring(y);
    CHECK(parse_coloring(ct).weights == y.weights);
}

TEST_CASE("generator specs are deterministic and families keep their contracts") {
    GeneratorSpec spec;
    spec.seed = 42;
    spec.family = "random_dag";
    spec.params = {{"n", 5}, {"arcs", 7}, {"k", 2}};
    std::string spec_text = serialize_generator_spec(spec);
    GeneratorSpec back = parse_generator_spec(spec_text);
    CHECK(back.seed == 42);
    CHECK(back.family == "random_dag");
    CHECK(serialize_instance(generate(spec)) == serialize_instance(generate(back)));

    InstanceDocument dag = generate(spec);
    CHECK(dag.variant == "mrf");
    CHECK(dag.mrf.graph.is_dag());
    CHECK(dag.mrf.graph.arc_count() == 7);
    CHECK(max_flow(dag.mrf.graph, dag.mrf.source, dag.mrf.sink) >= 1);

    spec.seed = 7;
    InstanceDocument other = generate(spec);
    CHECK(serialize_instance(other) != serialize_instance(dag));

    GeneratorSpec bad = spec;
    bad.params["arcs"] = 3;  // a worst-case backbone cannot fit
    CHECK_THROWS_AS(generate(bad), ValidationError);
}

TEST_CASE("random_compat instances are normalized and reduction-ready") {
    GeneratorSpec spec;
    spec.family = "random_compat";
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        spec.seed = seed;
        spec.params = {{"n", 4}, {"arcs", 5}, {"k", 2}, {"pairs", 2}};
        InstanceDocument doc = generate(spec);
        REQUIRE(doc.variant == "mrf_r");
        CAPTURE(seed);
        MrfrNormalizeArtifact norm = normalize_mrfr(doc.mrf_r);
        CHECK(norm.already_normalized);
        MrfmArtifact art = reduce_mrfr_to_mrfm(norm.instance);
        CHECK(art.f_pairs.size() <= 2);
        CHECK(check_properties(art).all_pass());
    }
}

TEST_CASE("graph generators avoid degenerate shapes") {
    GeneratorSpec spec;
    spec.seed = 9;
    spec.family = "coloring_graph";
    spec.params = {{"n", 6}, {"p_num", 1}, {"p_den", 3}, {"ell", 2}};
    InstanceDocument doc = generate(spec);
    REQUIRE(doc.variant == "coloring");
    for (const std::string& v : doc.graph.vertices()) {
        bool covered = false;
        for (const auto& [a, b] : doc.graph.edges()) covered |= (a == v || b == v);
        CHECK(covered);
    }

    spec.family = "clique_graph";
    spec.params = {{"n", 4}, {"p_num", 1}, {"p_den", 2}, {"ell", 2}, {"r", 1}};
    InstanceDocument cg = generate(spec);
    CHECK(cg.variant == "clique_interdiction");
    CHECK(cg.r == 1);

    spec.params["r"] = 9;
    CHECK_THROWS_AS(generate(spec), ValidationError);
    spec.family = "no_such_family";
    CHECK_THROWS_AS(generate(spec), ValidationError);
}

TEST_CASE("cli decides, writes witnesses, and re-validates them") {
    fs::path dir = scratch_dir();
    fs::path inst = dir / "tiny_yes.json";
    fs::path wit = dir / "tiny_yes.flow.json";
    InstanceDocument doc;
    doc.variant = "mrf_r";
    doc.mrf_r = tiny_yes();
    spit(inst, serialize_instance(doc));

    std::string out;
    int code = cli({"decide", inst.string(), "--out", wit.string(), "--check-witness"}, &out);
    CHECK(code == 0);
    CHECK(out.find("YES") != std::string::npos);
    CHECK(out.find("witness ok") != std::string::npos);
    PathFlow flow = parse_flow(doc.mrf_r.graph, slurp(wit));
    CHECK(flow.total() == rat(2));
    CHECK(is_feasible(flow, doc.mrf_r));

    doc.mrf_r = tiny_no();
    spit(inst, serialize_instance(doc));
    code = cli({"decide", inst.string()}, &out);
    CHECK(code == 0);
    CHECK(out.find("NO") != std::string::npos);
}

TEST_CASE("cli resource guard maps to exit code 2") {
    // three stages of three parallel arcs: 27 source-sink paths
    std::vector<Arc> arcs;
    for (int i = 1; i <= 3; ++i) {
        arcs.push_back(unit("a" + std::to_string(i), "s", "u"));
        arcs.push_back(unit("b" + std::to_string(i), "u", "v"));
        arcs.push_back(unit("c" + std::to_string(i), "v", "t"));
    }
    InstanceDocument doc;
    doc.variant = "mrf";
    doc.mrf = MrfInstance{Digraph::build({"s", "t", "u", "v"}, arcs), "s", "t", 1, rat(1)};
    fs::path inst = scratch_dir() / "wide.json";
    spit(inst, serialize_instance(doc));

    std::string err;
    int code = cli({"--path-limit", "10", "decide", inst.string()}, nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("resource limit") != std::string::npos);

    int ok = cli({"decide", inst.string()});
    CHECK(ok == 0);
}

TEST_CASE("cli reduce emits stage files whose decisions agree under verify") {
    fs::path dir = scratch_dir();
    fs::path inst = dir / "pipeline_in.json";
    InstanceDocument doc;
    doc.variant = "mrf_r";
    doc.mrf_r = tiny_yes();
    spit(inst, serialize_instance(doc));
    fs::path base = dir / "pipeline";

    std::string out;
    int code = cli({"reduce", inst.string(), "--to", "full", "--out", base.string()}, &out);
    CHECK(code == 0);
    InstanceDocument mm = parse_instance(slurp(dir / "pipeline.mrf_m.json"));
    CHECK(mm.variant == "mrf_m");
    InstanceDocument final_doc = parse_instance(slurp(dir / "pipeline.mrf.json"));
    CHECK(final_doc.variant == "mrf");
    CHECK(fs::exists(dir / "pipeline.mrf_m.provenance.json"));
    CHECK(fs::exists(dir / "pipeline.mrf.provenance.json"));

    code = cli({"verify", inst.string()}, &out);
    CHECK(code == 0);
    CHECK(out.find("stages agree") != std::string::npos);
    CHECK(out.find("mrf_r: YES") != std::string::npos);
    CHECK(out.find("mrf_m: YES") != std::string::npos);
    CHECK(out.find("mrf: YES") != std::string::npos);
}

TEST_CASE("cli gen and oracle subcommands") {
    fs::path dir = scratch_dir();
    fs::path spec_path = dir / "spec.json";
    fs::path out_path = dir / "gen.json";
    GeneratorSpec spec;
    spec.seed = 11;
    spec.family = "coloring_graph";
    spec.params = {{"n", 5}, {"p_num", 2}, {"p_den", 3}, {"ell", 3}};
    spit(spec_path, serialize_generator_spec(spec));

    CHECK(cli({"gen", "--spec", spec_path.string(), "--out", out_path.string()}) == 0);
    std::string first = slurp(out_path);
    CHECK(cli({"gen", "--spec", spec_path.string(), "--out", out_path.string()}) == 0);
    CHECK(slurp(out_path) == first);

    std::string out;
    int code = cli({"oracle", "chif", out_path.string()}, &out);
    CHECK(code == 0);
    CHECK(out.find("chi_f = ") != std::string::npos);

    InstanceDocument ci;
    ci.variant = "clique_interdiction";
    ci.graph = UndirectedGraph::build({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}});
    ci.ell = 3;
    ci.r = 1;
    fs::path ci_path = dir / "ci.json";
    spit(ci_path, serialize_instance(ci));
    code = cli({"oracle", "clique-interdiction", ci_path.string()}, &out);
    CHECK(code == 0);
    CHECK(out.find("YES") != std::string::npos);

    std::string err;
    CHECK(cli({"decide", (dir / "missing.json").string()}, nullptr, &err) == 1);
    CHECK(err.find("error:") != std::string::npos);
}
