#include "mrf/io.hpp"

#include <json.hpp>

#include <random>
#include <set>
#include <sstream>

#include "mrf/solvers.hpp"

namespace mrf {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

const json& field(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) schema_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(path + "." + key, "missing");
    return *it;
}

std::string get_string(const json& j, const std::string& path, const std::string& key) {
    const json& v = field(j, path, key);
    if (!v.is_string()) schema_error(path + "." + key, "expected a string");
    return v.get<std::string>();
}

long get_int(const json& j, const std::string& path, const std::string& key) {
    const json& v = field(j, path, key);
    if (!v.is_number_integer()) schema_error(path + "." + key, "expected an integer");
    return v.get<long>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key,
              bool fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j[key].is_boolean()) schema_error(path + "." + key, "expected a boolean");
    return j[key].get<bool>();
}

Rat get_rat(const json& j, const std::string& path, const std::string& key, bool strict) {
    std::string text = get_string(j, path, key);
    auto r = rat_parse(text, strict);
    if (!r)
        schema_error(path + "." + key, strict
                                           ? "\"" + text + "\" is not a reduced rational"
                                           : "\"" + text + "\" is not a rational");
    return *r;
}

std::vector<std::string> get_string_list(const json& j, const std::string& path,
                                         const std::string& key) {
    const json& v = field(j, path, key);
    if (!v.is_array()) schema_error(path + "." + key, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string())
            schema_error(path + "." + key + "[" + std::to_string(i) + "]",
                         "expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> get_pair_list(const json& j,
                                                               const std::string& path,
                                                               const std::string& key) {
    const json& v = field(j, path, key);
    if (!v.is_array()) schema_error(path + "." + key, "expected an array");
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::string p = path + "." + key + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_string() ||
            !v[i][1].is_string())
            schema_error(p, "expected a pair of strings");
        out.emplace_back(v[i][0].get<std::string>(), v[i][1].get<std::string>());
    }
    return out;
}

Digraph parse_graph(const json& j, bool strict) {
    std::vector<std::string> nodes = get_string_list(j, "$", "nodes");
    const json& arr = field(j, "$", "arcs");
    if (!arr.is_array()) schema_error("$.arcs", "expected an array");
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string p = "arcs[" + std::to_string(i) + "]";
        const json& a = arr[i];
        arcs.push_back(Arc{get_string(a, p, "id"), get_string(a, p, "tail"),
                           get_string(a, p, "head"), get_rat(a, p, "capacity", strict),
                           get_bool(a, p, "immune", false)});
    }
    return Digraph::build(std::move(nodes), std::move(arcs));
}

json graph_to_json(const Digraph& g) {
    json j;
    j["nodes"] = g.nodes();
    json arcs = json::array();
    for (const Arc& a : g.arcs()) {
        json e;
        e["id"] = a.id;
        e["tail"] = a.tail;
        e["head"] = a.head;
        e["capacity"] = rat_str(a.capacity);
        if (a.immune) e["immune"] = true;
        arcs.push_back(std::move(e));
    }
    j["arcs"] = std::move(arcs);
    return j;
}

json pairs_to_json(const std::set<std::pair<std::string, std::string>>& edges) {
    json out = json::array();
    for (const auto& [a, b] : edges) out.push_back(json::array({a, b}));
    return out;
}

}  // namespace

InstanceDocument parse_instance(const std::string& text, bool strict) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
    }
    InstanceDocument doc;
    doc.schema_version = static_cast<int>(get_int(j, "$", "schema_version"));
    if (doc.schema_version != 1) schema_error("$.schema_version", "unsupported version");
    doc.variant = get_string(j, "$", "variant");

    if (doc.variant == "mrf") {
        doc.mrf.graph = parse_graph(j, strict);
        doc.mrf.source = get_string(j, "$", "source");
        doc.mrf.sink = get_string(j, "$", "sink");
        doc.mrf.k = static_cast<int>(get_int(j, "$", "k"));
        if (j.contains("threshold")) doc.mrf.threshold = get_rat(j, "$", "threshold", strict);
        doc.mrf.validate();
    } else if (doc.variant == "mrf_r") {
        doc.mrf_r.graph = parse_graph(j, strict);
        doc.mrf_r.source = get_string(j, "$", "source");
        doc.mrf_r.sink = get_string(j, "$", "sink");
        doc.mrf_r.k = static_cast<int>(get_int(j, "$", "k"));
        doc.mrf_r.compat = CompatGraph(get_pair_list(j, "$", "compat"));
        doc.mrf_r.demand = get_rat(j, "$", "demand", strict);
        doc.mrf_r.integral = get_bool(j, "$", "integral", false);
        if (j.contains("clique_arcs"))
            doc.mrf_r.clique_arcs = get_string_list(j, "$", "clique_arcs");
        doc.mrf_r.validate();
    } else if (doc.variant == "mrf_m") {
        doc.mrf_m.graph = parse_graph(j, strict);
        doc.mrf_m.k = static_cast<int>(get_int(j, "$", "k"));
        const json& arr = field(j, "$", "commodities");
        if (!arr.is_array()) schema_error("$.commodities", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string p = "commodities[" + std::to_string(i) + "]";
            doc.mrf_m.commodities.push_back(
                Commodity{get_string(arr[i], p, "id"), get_string(arr[i], p, "source"),
                          get_string(arr[i], p, "sink"), get_rat(arr[i], p, "demand", strict)});
        }
        doc.mrf_m.i0 = get_string(j, "$", "i0");
        doc.mrf_m.validate();
    } else if (doc.variant == "coloring" || doc.variant == "clique_interdiction") {
        doc.graph = UndirectedGraph::build(get_string_list(j, "$", "vertices"),
                                           get_pair_list(j, "$", "edges"));
        doc.ell = static_cast<int>(get_int(j, "$", "ell"));
        if (doc.ell < 1) schema_error("$.ell", "must be positive");
        if (doc.variant == "clique_interdiction") {
            doc.r = static_cast<int>(get_int(j, "$", "r"));
            if (doc.r < 1) schema_error("$.r", "must be positive");
        }
    } else {
        schema_error("$.variant", "unknown variant \"" + doc.variant + "\"");
    }
    return doc;
}

std::string serialize_instance(const InstanceDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["variant"] = doc.variant;
    if (doc.variant == "mrf") {
        json g = graph_to_json(doc.mrf.graph);
        j["nodes"] = std::move(g["nodes"]);
        j["arcs"] = std::move(g["arcs"]);
        j["source"] = doc.mrf.source;
        j["sink"] = doc.mrf.sink;
        j["k"] = doc.mrf.k;
        if (doc.mrf.threshold) j["threshold"] = rat_str(*doc.mrf.threshold);
    } else if (doc.variant == "mrf_r") {
        json g = graph_to_json(doc.mrf_r.graph);
        j["nodes"] = std::move(g["nodes"]);
        j["arcs"] = std::move(g["arcs"]);
        j["source"] = doc.mrf_r.source;
        j["sink"] = doc.mrf_r.sink;
        j["k"] = doc.mrf_r.k;
        j["compat"] = pairs_to_json(doc.mrf_r.compat.edges());
        j["demand"] = rat_str(doc.mrf_r.demand);
        j["integral"] = doc.mrf_r.integral;
        if (!doc.mrf_r.clique_arcs.empty()) j["clique_arcs"] = doc.mrf_r.clique_arcs;
    } else if (doc.variant == "mrf_m") {
        json g = graph_to_json(doc.mrf_m.graph);
        j["nodes"] = std::move(g["nodes"]);
        j["arcs"] = std::move(g["arcs"]);
        j["k"] = doc.mrf_m.k;
        json cs = json::array();
        for (const Commodity& c : doc.mrf_m.commodities) {
            json e;
            e["id"] = c.id;
            e["source"] = c.source;
            e["sink"] = c.sink;
            e["demand"] = rat_str(c.demand);
            cs.push_back(std::move(e));
        }
        j["commodities"] = std::move(cs);
        j["i0"] = doc.mrf_m.i0;
    } else if (doc.variant == "coloring" || doc.variant == "clique_interdiction") {
        j["vertices"] = doc.graph.vertices();
        j["edges"] = pairs_to_json(doc.graph.edges());
        j["ell"] = doc.ell;
        if (doc.variant == "clique_interdiction") j["r"] = doc.r;
    } else {
        throw ValidationError("unknown variant \"" + doc.variant + "\"");
    }
    return j.dump(2) + "\n";
}

std::string serialize_flow(const Digraph& g, const PathFlow& flow) {
    json j;
    j["total"] = rat_str(flow.total());
    json paths = json::array();
    for (const auto& [p, v] : flow.entries) {
        json e;
        if (!p.commodity.empty()) e["commodity"] = p.commodity;
        e["arcs"] = path_arc_ids(g, p);
        e["value"] = rat_str(v);
        paths.push_back(std::move(e));
    }
    j["paths"] = std::move(paths);
    return j.dump(2) + "\n";
}

PathFlow parse_flow(const Digraph& g, const std::string& text, bool strict) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
    }
    const json& arr = field(j, "$", "paths");
    if (!arr.is_array()) schema_error("$.paths", "expected an array");
    PathFlow flow;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string p = "paths[" + std::to_string(i) + "]";
        std::string commodity =
            arr[i].contains("commodity") ? get_string(arr[i], p, "commodity") : "";
        std::vector<std::string> ids = get_string_list(arr[i], p, "arcs");
        for (const std::string& id : ids)
            if (!g.has_arc(id)) schema_error(p + ".arcs", "unknown arc \"" + id + "\"");
        flow.add(path_from_ids(g, ids, commodity), get_rat(arr[i], p, "value", strict));
    }
    return flow;
}

std::string serialize_coloring(const FractionalColoring& y) {
    json j;
    j["total"] = rat_str(y.total());
    json sets = json::array();
    for (const auto& [members, w] : y.weights) {
        json e;
        e["set"] = members;
        e["weight"] = rat_str(w);
        sets.push_back(std::move(e));
    }
    j["sets"] = std::move(sets);
    return j.dump(2) + "\n";
}

FractionalColoring parse_coloring(const std::string& text, bool strict) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
    }
    const json& arr = field(j, "$", "sets");
    if (!arr.is_array()) schema_error("$.sets", "expected an array");
    FractionalColoring y;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string p = "sets[" + std::to_string(i) + "]";
        std::vector<std::string> members = get_string_list(arr[i], p, "set");
        std::sort(members.begin(), members.end());
        y.weights[members] += get_rat(arr[i], p, "weight", strict);
    }
    return y;
}

std::string serialize_provenance(const Provenance& p) {
    json j;
    j["nodes"] = p.nodes;
    j["arcs"] = p.arcs;
    j["commodities"] = p.commodities;
    return j.dump(2) + "\n";
}

GeneratorSpec parse_generator_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
    }
    GeneratorSpec spec;
    const json& s = field(j, "$", "seed");
    if (!s.is_number_unsigned() && !s.is_number_integer())
        schema_error("$.seed", "expected an integer");
    spec.seed = s.get<std::uint64_t>();
    spec.family = get_string(j, "$", "family");
    const json& params = field(j, "$", "params");
    if (!params.is_object()) schema_error("$.params", "expected an object");
    for (const auto& [key, val] : params.items()) {
        if (!val.is_number_integer()) schema_error("$.params." + key, "expected an integer");
        spec.params[key] = val.get<long>();
    }
    return spec;
}

std::string serialize_generator_spec(const GeneratorSpec& spec) {
    json j;
    j["seed"] = spec.seed;
    j["family"] = spec.family;
    j["params"] = spec.params;
    return j.dump(2) + "\n";
}

namespace {

// Hand-rolled bounded sampling on top of the bit-stable mt19937_64 stream;
// std::uniform_int_distribution is implementation-defined, so it is avoided.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t below(std::uint64_t n) { return eng() % n; }
    bool chance(long num, long den) { return static_cast<long>(below(den)) < num; }
};

std::string padded(const std::string& prefix, long i, long max) {
    int width = 1;
    for (long v = max; v >= 10; v /= 10) ++width;
    std::string s = std::to_string(i);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return prefix + s;
}

long param(const GeneratorSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw ValidationError("generator family " + spec.family + " needs parameter \"" + key +
                              "\"");
    return it->second;
}

// Unit-capacity DAG on nodes 0..n-1 where the source reaches the sink by
// construction (a random forward backbone, then random forward arcs).
Digraph random_dag(Rng& rng, long n, long m) {
    if (n < 2) throw ValidationError("random dag needs at least 2 nodes");
    // the backbone can take up to n-1 arcs whatever the seed draws
    if (m < n - 1) throw ValidationError("random dag needs at least n-1 arcs");
    std::vector<std::string> nodes;
    for (long i = 0; i < n; ++i) nodes.push_back(padded("n", i, n - 1));
    std::vector<Arc> arcs;
    long next_id = 0;
    auto add = [&](long tail, long head) {
        arcs.push_back(Arc{padded("a", next_id++, m - 1), nodes[tail], nodes[head], rat(1),
                           false});
    };
    long cur = 0;
    while (cur != n - 1) {
        long head = cur + 1 + static_cast<long>(rng.below(n - 1 - cur));
        add(cur, head);
        cur = head;
    }
    if (static_cast<long>(arcs.size()) > m)
        throw ValidationError("too few arcs for the requested node count");
    while (static_cast<long>(arcs.size()) < m) {
        long tail = static_cast<long>(rng.below(n - 1));
        long head = tail + 1 + static_cast<long>(rng.below(n - 1 - tail));
        add(tail, head);
    }
    return Digraph::build(std::move(nodes), std::move(arcs));
}

UndirectedGraph random_graph(Rng& rng, long n, long p_num, long p_den, bool no_isolated) {
    if (n < 2) throw ValidationError("random graph needs at least 2 vertices");
    if (p_den < 1 || p_num < 0 || p_num > p_den)
        throw ValidationError("edge probability must be a rational in [0,1]");
    std::vector<std::string> vertices;
    for (long i = 0; i < n; ++i) vertices.push_back(padded("v", i, n - 1));
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<bool> covered(n, false);
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            if (rng.chance(p_num, p_den)) {
                edges.emplace_back(vertices[i], vertices[j]);
                covered[i] = covered[j] = true;
            }
    if (no_isolated)
        for (long i = 0; i < n; ++i)
            if (!covered[i]) {
                long j = (i + 1) % n;
                edges.emplace_back(std::min(vertices[i], vertices[j]),
                                   std::max(vertices[i], vertices[j]));
                covered[i] = covered[j] = true;
            }
    return UndirectedGraph::build(std::move(vertices), edges);
}

}  // namespace

InstanceDocument generate(const GeneratorSpec& spec) {
    Rng rng(spec.seed);
    InstanceDocument doc;
    doc.variant = spec.family == "random_dag"        ? "mrf"
                  : spec.family == "random_compat"   ? "mrf_r"
                  : spec.family == "coloring_graph"  ? "coloring"
                  : spec.family == "clique_graph"    ? "clique_interdiction"
                                                     : "";
    if (doc.variant.empty())
        throw ValidationError("unknown generator family \"" + spec.family + "\"");

    if (spec.family == "random_dag") {
        long k = param(spec, "k");
        if (k < 1) throw ValidationError("k must be positive");
        doc.mrf = MrfInstance{random_dag(rng, param(spec, "n"), param(spec, "arcs")),
                              padded("n", 0, param(spec, "n") - 1),
                              padded("n", param(spec, "n") - 1, param(spec, "n") - 1),
                              static_cast<int>(k), std::nullopt};
        doc.mrf.validate();
    } else if (spec.family == "random_compat") {
        long n = param(spec, "n"), m = param(spec, "arcs"), k = param(spec, "k");
        long pairs = param(spec, "pairs");
        if (k < 1) throw ValidationError("k must be positive");
        if (pairs < 0) throw ValidationError("pairs must be >= 0");
        Digraph g = random_dag(rng, n, m);
        std::string source = padded("n", 0, n - 1), sink = padded("n", n - 1, n - 1);
        // normalize by construction: theta = max flow, source split if needed,
        // then k-1 universal clique arcs
        Rat mf = max_flow(g, source, sink);
        long theta = mf.get_num().get_si();
        std::vector<std::string> nodes = g.nodes();
        std::vector<Arc> arcs = g.arcs();
        if (static_cast<long>(g.out_arcs(source).size()) != theta) {
            nodes.push_back("split");
            for (Arc& a : arcs)
                if (a.tail == source) a.tail = "split";
            for (long i = 0; i < theta; ++i)
                arcs.push_back(Arc{padded("b", i, theta - 1), source, "split", rat(1), false});
        }
        std::vector<std::string> clique;
        for (long i = 0; i < k - 1; ++i) {
            clique.push_back(padded("cl", i, k - 2));
            arcs.push_back(Arc{clique.back(), source, sink, rat(1), false});
        }
        theta += k - 1;
        Digraph full = Digraph::build(std::move(nodes), std::move(arcs));
        // compat graph: complete, minus `pairs` random edges not between clique arcs
        std::set<std::pair<std::string, std::string>> carved;
        std::vector<std::pair<std::string, std::string>> candidates;
        std::set<std::string> clique_set(clique.begin(), clique.end());
        for (int i = 0; i < full.arc_count(); ++i)
            for (int j = i + 1; j < full.arc_count(); ++j) {
                const std::string &a = full.arc(i).id, &b = full.arc(j).id;
                if (clique_set.count(a) && clique_set.count(b)) continue;
                candidates.emplace_back(a, b);
            }
        if (pairs > static_cast<long>(candidates.size()))
            throw ValidationError("more incompatible pairs requested than arc pairs exist");
        for (long c = 0; c < pairs; ++c) {
            std::size_t pick;
            do {
                pick = rng.below(candidates.size());
            } while (carved.count(candidates[pick]));
            carved.insert(candidates[pick]);
        }
        std::vector<std::pair<std::string, std::string>> compat;
        for (const auto& cand : candidates)
            if (!carved.count(cand)) compat.push_back(cand);
        for (std::size_t i = 0; i < clique.size(); ++i)
            for (std::size_t j = i + 1; j < clique.size(); ++j)
                compat.emplace_back(clique[i], clique[j]);
        doc.mrf_r = MrfRInstance{std::move(full), source, sink, static_cast<int>(k),
                                 CompatGraph(compat), rat(theta), false, clique};
        doc.mrf_r.validate();
    } else if (spec.family == "coloring_graph") {
        doc.graph = random_graph(rng, param(spec, "n"), param(spec, "p_num"),
                                 param(spec, "p_den"), true);
        doc.ell = static_cast<int>(param(spec, "ell"));
        if (doc.ell < 2) throw ValidationError("ell must be >= 2");
    } else {  // clique_graph
        doc.graph = random_graph(rng, param(spec, "n"), param(spec, "p_num"),
                                 param(spec, "p_den"), false);
        doc.ell = static_cast<int>(param(spec, "ell"));
        doc.r = static_cast<int>(param(spec, "r"));
        if (doc.ell < 2) throw ValidationError("ell must be >= 2");
        if (doc.r < 1 || doc.r >= param(spec, "n"))
            throw ValidationError("r must satisfy 1 <= r < n");
    }
    return doc;
}

}  // namespace mrf
