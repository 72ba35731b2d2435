#include "mrf/reductions.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace mrf {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

int width_for(std::size_t n) {
    int w = 1;
    while (n >= 10) {
        n /= 10;
        ++w;
    }
    return w;
}

std::string pad_num(std::size_t v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

long as_long(const Rat& r, const std::string& what) {
    require(r.get_den() == 1, what + " must be an integer, got " + rat_str(r));
    require(r.get_num().fits_slong_p(), what + " is out of range: " + rat_str(r));
    return r.get_num().get_si();
}

Rat sum_out_capacity(const Digraph& g, const std::string& node) {
    Rat total = 0;
    for (int a : g.out_arcs(node)) total += g.arc(a).capacity;
    return total;
}

Rat sum_in_capacity(const Digraph& g, const std::string& node) {
    Rat total = 0;
    for (int a : g.in_arcs(node)) total += g.arc(a).capacity;
    return total;
}

// Lexicographically-first set of k-1 pairwise compatible parallel source->sink
// arcs, if any; the instance's declared clique arcs take precedence.
std::optional<std::vector<std::string>> find_clique_arcs(const MrfRInstance& inst) {
    int need = inst.k - 1;
    if (need == 0) return std::vector<std::string>{};
    if (static_cast<int>(inst.clique_arcs.size()) == need) return inst.clique_arcs;
    std::vector<std::string> cand;
    for (int a : inst.graph.out_arcs(inst.source))
        if (inst.graph.arc(a).head == inst.sink) cand.push_back(inst.graph.arc(a).id);
    std::vector<std::string> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
        if (static_cast<int>(chosen.size()) == need) return true;
        for (std::size_t i = start; i < cand.size(); ++i) {
            bool ok = true;
            for (const std::string& c : chosen)
                if (!inst.compat.adjacent(c, cand[i])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(cand[i]);
            if (rec(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (rec(0)) return chosen;
    return std::nullopt;
}

}  // namespace

// ---- fractional coloring -> MRF-R ----

ColoringMrfrArtifact reduce_coloring_to_mrfr(const UndirectedGraph& g, int ell) {
    require(ell >= 2, "coloring reduction needs ell >= 2, got " + std::to_string(ell));
    require(!g.edges().empty(), "coloring reduction needs at least one edge");
    std::set<std::string> covered;
    for (const auto& [v, w] : g.edges()) {
        covered.insert(v);
        covered.insert(w);
    }
    for (const std::string& v : g.vertices())
        require(covered.count(v) > 0,
                "vertex " + v + " has no incident edge; no arc would represent it");

    ColoringMrfrArtifact art;
    art.input = g;
    art.ell = ell;
    art.edge_order.assign(g.edges().begin(), g.edges().end());
    std::size_t m = art.edge_order.size();
    int zw = width_for(m + 1), ew = width_for(m), aw = width_for(ell);

    std::vector<std::string> nodes;
    for (std::size_t i = 1; i <= m + 1; ++i) {
        nodes.push_back("z" + pad_num(i, zw));
        art.provenance.nodes[nodes.back()] = "chain node " + std::to_string(i);
    }
    std::vector<Arc> arcs;
    for (std::size_t i = 1; i <= m; ++i) {
        const auto& [v, w] = art.edge_order[i - 1];
        std::string edge_desc = "{" + v + "," + w + "}";
        std::pair<std::string, std::string> des;
        for (int j = 1; j <= ell; ++j) {
            std::string id = "e" + pad_num(i, ew) + "a" + pad_num(j, aw);
            arcs.push_back(Arc{id, nodes[i - 1], nodes[i], rat(1), false});
            if (j == 1) {
                des.first = id;
                art.provenance.arcs[id] = "edge " + edge_desc + ": designated arc of " + v;
            } else if (j == 2) {
                des.second = id;
                art.provenance.arcs[id] = "edge " + edge_desc + ": designated arc of " + w;
            } else {
                art.provenance.arcs[id] = "edge " + edge_desc + ": undesignated bundle arc";
            }
        }
        art.designated.push_back(des);
    }
    // compat edge between the two arcs representing a shared vertex
    auto designated_for = [&](std::size_t i, const std::string& v) {
        return v == art.edge_order[i].first ? art.designated[i].first : art.designated[i].second;
    };
    std::vector<std::pair<std::string, std::string>> compat;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (const std::string& v : {art.edge_order[i].first, art.edge_order[i].second})
                if (v == art.edge_order[j].first || v == art.edge_order[j].second)
                    compat.emplace_back(designated_for(i, v), designated_for(j, v));

    art.instance = MrfRInstance{Digraph::build(std::move(nodes), std::move(arcs)),
                                "z" + pad_num(1, zw),
                                "z" + pad_num(m + 1, zw),
                                2,
                                CompatGraph(compat),
                                rat(ell),
                                false,
                                {}};
    art.instance.validate();
    return art;
}

FractionalColoring coloring_from_flow(const ColoringMrfrArtifact& art, const PathFlow& flow,
                                      const Limits& limits) {
    std::string why;
    require(is_feasible(flow, art.instance, &why), "flow is not feasible: " + why);
    require(flow.total() == art.instance.demand,
            "flow value " + rat_str(flow.total()) + " != demand " + rat_str(art.instance.demand));
    auto [scen, worst] = best_response(art.instance.graph, flow, art.instance.k,
                                       &art.instance.compat, ScenarioMode::at_most_k, limits);
    require(worst <= rat(art.instance.k - 1),
            "flow is not a witness: a scenario loses " + rat_str(worst));

    std::map<int, std::string> represented;
    for (std::size_t i = 0; i < art.designated.size(); ++i) {
        represented[art.instance.graph.arc_index(art.designated[i].first)] =
            art.edge_order[i].first;
        represented[art.instance.graph.arc_index(art.designated[i].second)] =
            art.edge_order[i].second;
    }
    FractionalColoring y;
    for (const auto& [p, v] : flow.entries) {
        std::set<std::string> members;
        for (int a : p.arcs) {
            auto it = represented.find(a);
            if (it != represented.end()) members.insert(it->second);
        }
        if (members.empty()) continue;
        y.weights[std::vector<std::string>(members.begin(), members.end())] += v;
    }
    validate_coloring(art.input, y);
    return y;
}

PathFlow flow_from_coloring(const ColoringMrfrArtifact& art, const FractionalColoring& y) {
    validate_coloring(art.input, y);
    Rat total = y.total();
    require(total <= rat(art.ell),
            "coloring weight " + rat_str(total) + " exceeds ell = " + std::to_string(art.ell));

    const Digraph& g = art.instance.graph;
    std::size_t m = art.edge_order.size();
    std::vector<std::vector<int>> undesignated(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::string& tail = g.arc(g.arc_index(art.designated[i].first)).tail;
        for (int a : g.out_arcs(tail)) {
            const std::string& id = g.arc(a).id;
            if (id != art.designated[i].first && id != art.designated[i].second)
                undesignated[i].push_back(a);
        }
    }

    PathFlow flow;
    auto route = [&](const std::set<std::string>& members, const Rat& weight) {
        std::vector<std::vector<int>> choices(m);
        std::size_t count = 1;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& [v, w] = art.edge_order[i];
            if (members.count(v)) {
                choices[i] = {g.arc_index(art.designated[i].first)};
            } else if (members.count(w)) {
                choices[i] = {g.arc_index(art.designated[i].second)};
            } else {
                require(!undesignated[i].empty(),
                        "cannot route past edge {" + v + "," + w +
                            "}: the set misses it and the bundle has no undesignated arc");
                choices[i] = undesignated[i];
            }
            count *= choices[i].size();
            if (count > 1'000'000)
                throw ResourceLimitError("transversal expansion exceeds 1000000 paths");
        }
        Rat share = weight / rat(static_cast<long>(count));
        std::vector<int> cur(m);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == m) {
                flow.add(Path{cur, ""}, share);
                return;
            }
            for (int a : choices[i]) {
                cur[i] = a;
                rec(i + 1);
            }
        };
        rec(0);
    };
    for (const auto& [members, weight] : y.weights)
        route(std::set<std::string>(members.begin(), members.end()), weight);
    Rat pad = rat(art.ell) - total;
    if (sgn(pad) > 0) route({}, pad);

    std::string why;
    require(is_feasible(flow, art.instance, &why), "constructed flow is infeasible: " + why);
    require(flow.total() == rat(art.ell), "constructed flow misses the demand");
    auto [scen, worst] = best_response(g, flow, art.instance.k, &art.instance.compat,
                                       ScenarioMode::at_most_k);
    require(worst <= rat(art.instance.k - 1),
            "constructed flow exceeds the loss bound: " + rat_str(worst));
    return flow;
}

// ---- budget/source normalization ----

MrfrNormalizeArtifact normalize_mrfr(const MrfRInstance& inst) {
    inst.validate();
    long theta = as_long(inst.demand, "demand");
    require(theta >= 1, "normalization needs a positive integral demand");

    MrfrNormalizeArtifact art;
    art.input = inst;
    auto clique = find_clique_arcs(inst);
    bool degree_ok =
        static_cast<long>(inst.graph.out_arcs(inst.source).size()) == theta;
    if (degree_ok && clique) {
        art.instance = inst;
        art.instance.clique_arcs = *clique;
        art.already_normalized = true;
        return art;
    }

    std::set<std::string> node_ids(inst.graph.nodes().begin(), inst.graph.nodes().end());
    std::set<std::string> arc_ids;
    for (const Arc& a : inst.graph.arcs()) arc_ids.insert(a.id);
    std::vector<std::string> nodes = inst.graph.nodes();
    std::vector<Arc> arcs = inst.graph.arcs();
    std::vector<std::pair<std::string, std::string>> compat(inst.compat.edges().begin(),
                                                            inst.compat.edges().end());
    Rat demand = inst.demand;

    if (!degree_ok) {
        std::string sbar = "sbar";
        int suffix = 0;
        while (node_ids.count(sbar)) sbar = "sbar_" + std::to_string(++suffix);
        nodes.push_back(sbar);
        art.provenance.nodes[sbar] = "split image of the source; takes over its outgoing arcs";
        for (Arc& a : arcs)
            if (a.tail == inst.source) a.tail = sbar;
        int w = width_for(theta);
        for (long j = 1; j <= theta; ++j) {
            std::string id = "nb" + pad_num(j, w);
            require(!arc_ids.count(id), "input arc id collides with reserved name " + id);
            arc_ids.insert(id);
            arcs.push_back(Arc{id, inst.source, sbar, rat(1), false});
            art.provenance.arcs[id] = "source-split bundle arc (singleton in the compat graph)";
        }
    }
    std::vector<std::string> new_clique;
    if (inst.k > 1) {
        int w = width_for(inst.k - 1);
        for (int j = 1; j <= inst.k - 1; ++j) {
            std::string id = "nc" + pad_num(j, w);
            require(!arc_ids.count(id), "input arc id collides with reserved name " + id);
            arc_ids.insert(id);
            arcs.push_back(Arc{id, inst.source, inst.sink, rat(1), false});
            new_clique.push_back(id);
            art.provenance.arcs[id] = "budget-normalization clique arc";
        }
        for (std::size_t i = 0; i < new_clique.size(); ++i)
            for (std::size_t j = i + 1; j < new_clique.size(); ++j)
                compat.emplace_back(new_clique[i], new_clique[j]);
        demand += rat(inst.k - 1);
    }
    art.instance = MrfRInstance{Digraph::build(std::move(nodes), std::move(arcs)),
                                inst.source,
                                inst.sink,
                                inst.k,
                                CompatGraph(compat),
                                demand,
                                inst.integral,
                                new_clique};
    art.instance.validate();
    return art;
}

// ---- MRF-R -> MRF-M ----

MrfmArtifact reduce_mrfr_to_mrfm(const MrfRInstance& inst) {
    inst.validate();
    long theta = as_long(inst.demand, "demand");
    require(static_cast<long>(inst.graph.out_arcs(inst.source).size()) == theta,
            "input not normalized: |out(source)| != demand");
    auto clique = find_clique_arcs(inst);
    require(clique.has_value(),
            "input not normalized: no k-1 pairwise compatible source->sink arcs");

    MrfmArtifact art;
    art.input = inst;
    art.clique_arcs = *clique;
    const Digraph& g = inst.graph;
    long n_arcs = g.arc_count();
    require(n_arcs >= 1, "input has no arcs");

    for (int idx : topological_arc_order(g, art.clique_arcs))
        art.arc_order.push_back(g.arc(idx).id);
    for (std::size_t hi = 1; hi < art.arc_order.size(); ++hi)
        for (std::size_t lo = 0; lo < hi; ++lo)
            if (!inst.compat.adjacent(art.arc_order[hi], art.arc_order[lo]))
                art.f_pairs.push_back({art.arc_order[hi], art.arc_order[lo]});

    long nf = static_cast<long>(art.f_pairs.size());
    art.M = rat(2 * (n_arcs - 1) * nf + 3);
    if (rat(theta + 2) > art.M) art.M = rat(theta + 2);
    Rat cap_side = art.M - rat(2 * nf + 1);
    long d_small = 2 * (n_arcs - 1);
    Rat d0 = rat(theta) + rat(n_arcs) * cap_side;
    int fw = width_for(nf == 0 ? 1 : nf - 1);
    for (long j = 0; j < nf; ++j) art.f_ids.push_back("f" + pad_num(j, fw));

    std::set<std::string> node_ids(g.nodes().begin(), g.nodes().end());
    std::vector<std::string> nodes = g.nodes();
    auto add_node = [&](const std::string& id, const std::string& role) {
        require(!node_ids.count(id), "input node id collides with reserved name " + id);
        node_ids.insert(id);
        nodes.push_back(id);
        art.provenance.nodes[id] = role;
    };
    for (const std::string& aid : art.arc_order) {
        add_node("vp:" + aid, "entry split node of arc " + aid);
        add_node("vm:" + aid, "exit split node of arc " + aid);
    }
    add_node("src:c0", "source of the demand commodity");
    add_node("snk:c0", "sink of the demand commodity");
    for (long j = 0; j < nf; ++j) {
        std::string pair = "(" + art.f_pairs[j].first + "," + art.f_pairs[j].second + ")";
        add_node("src:" + art.f_ids[j], "source of incompatibility commodity " + pair);
        add_node("snk:" + art.f_ids[j], "sink of incompatibility commodity " + pair);
    }

    std::set<std::string> arc_ids;
    std::vector<Arc> arcs;
    auto add_arc = [&](const std::string& id, const std::string& tail, const std::string& head,
                       const Rat& cap, const std::string& role) {
        require(!arc_ids.count(id), "duplicate constructed arc id " + id);
        arc_ids.insert(id);
        arcs.push_back(Arc{id, tail, head, cap, false});
        art.provenance.arcs[id] = role;
    };
    for (const std::string& aid : art.arc_order) {
        const Arc& a = g.arc(g.arc_index(aid));
        add_arc("in:" + aid, a.tail, "vp:" + aid, rat(1), "entry of subdivided arc " + aid);
        add_arc("mid:" + aid, "vp:" + aid, "vm:" + aid, art.M, "core of subdivided arc " + aid);
        add_arc("out:" + aid, "vm:" + aid, a.head, rat(1), "exit of subdivided arc " + aid);
    }
    for (long j = 0; j < nf; ++j) {
        const IncompatPair& p = art.f_pairs[j];
        const std::string& fid = art.f_ids[j];
        add_arc("f:" + fid, "vm:" + p.first, "vp:" + p.second, rat(2),
                "link for incompatible pair (" + p.first + "," + p.second + ")");
        for (const std::string& aid : art.arc_order) {
            if (aid != p.second)
                add_arc("sf:" + fid + ":" + aid, "src:" + fid, "vp:" + aid, rat(2),
                        "feed of commodity " + fid + " into arc " + aid);
            if (aid != p.first)
                add_arc("tf:" + fid + ":" + aid, "vm:" + aid, "snk:" + fid, rat(2),
                        "drain of commodity " + fid + " out of arc " + aid);
        }
    }
    for (const std::string& aid : art.arc_order) {
        add_arc("s0:" + aid, "src:c0", "vp:" + aid, cap_side,
                "demand-commodity feed into arc " + aid);
        add_arc("t0:" + aid, "vm:" + aid, "snk:c0", cap_side,
                "demand-commodity drain out of arc " + aid);
    }
    add_arc("s0s", "src:c0", inst.source, rat(theta), "demand-commodity feed into the old source");
    add_arc("tt0", inst.sink, "snk:c0", rat(theta), "demand-commodity drain out of the old sink");

    std::vector<Commodity> comm;
    comm.push_back(Commodity{"c0", "src:c0", "snk:c0", d0});
    art.provenance.commodities["c0"] = "demand commodity";
    for (long j = 0; j < nf; ++j) {
        comm.push_back(Commodity{art.f_ids[j], "src:" + art.f_ids[j], "snk:" + art.f_ids[j],
                                 rat(d_small)});
        art.provenance.commodities[art.f_ids[j]] =
            "incompatibility commodity (" + art.f_pairs[j].first + "," + art.f_pairs[j].second +
            ")";
    }
    art.instance =
        MrfMInstance{Digraph::build(std::move(nodes), std::move(arcs)), inst.k, std::move(comm),
                     "c0"};
    art.instance.validate();
    return art;
}

PathFlow hat_flow(const MrfmArtifact& art) {
    PathFlow flow;
    const Digraph& g = art.instance.graph;
    for (std::size_t j = 0; j < art.f_pairs.size(); ++j) {
        const IncompatPair& p = art.f_pairs[j];
        const std::string& fid = art.f_ids[j];
        flow.add(path_from_ids(g,
                               {"sf:" + fid + ":" + p.first, "mid:" + p.first, "f:" + fid,
                                "mid:" + p.second, "tf:" + fid + ":" + p.second},
                               fid),
                 rat(2));
        for (const std::string& aid : art.arc_order) {
            if (aid == p.first || aid == p.second) continue;
            flow.add(path_from_ids(
                         g, {"sf:" + fid + ":" + aid, "mid:" + aid, "tf:" + fid + ":" + aid},
                         fid),
                     rat(2));
        }
    }
    return flow;
}

bool PropertyReport::all_pass() const {
    for (const Item& it : items)
        if (!it.pass) return false;
    return true;
}

std::string PropertyReport::summary() const {
    std::ostringstream out;
    for (const Item& it : items) {
        if (out.tellp() > 0) out << "; ";
        out << "property " << it.number << ": " << (it.pass ? "pass" : "FAIL")
            << (it.detail.empty() ? "" : " (" + it.detail + ")");
    }
    return out.str();
}

PropertyReport check_properties(const MrfmArtifact& art, const Limits& limits) {
    PropertyReport rep;
    auto add = [&](int num, bool pass, std::string detail) {
        rep.items.push_back({num, pass, std::move(detail)});
    };
    const MrfMInstance& inst = art.instance;
    const Digraph& g = inst.graph;
    long n_arcs = static_cast<long>(art.arc_order.size());
    long nf = static_cast<long>(art.f_pairs.size());

    {  // 1: M matches its defining formula; all capacities integral
        long theta = as_long(art.input.demand, "demand");
        Rat expect = rat(2 * (n_arcs - 1) * nf + 3);
        if (rat(theta + 2) > expect) expect = rat(theta + 2);
        bool ok = art.M == expect;
        std::string detail = ok ? "M = " + rat_str(art.M)
                                : "M = " + rat_str(art.M) + ", expected " + rat_str(expect);
        for (const Arc& a : g.arcs())
            if (a.capacity.get_den() != 1) {
                ok = false;
                detail = "non-integral capacity on " + a.id;
                break;
            }
        add(1, ok, detail);
    }
    {  // 2: source/sink capacities equal the demand; no arcs behind them
        bool ok = true;
        std::string detail;
        for (const Commodity& c : inst.commodities) {
            if (sum_out_capacity(g, c.source) != c.demand ||
                sum_in_capacity(g, c.sink) != c.demand) {
                ok = false;
                detail = "commodity " + c.id + " boundary capacity != demand " +
                         rat_str(c.demand);
                break;
            }
            if (!g.in_arcs(c.source).empty() || !g.out_arcs(c.sink).empty()) {
                ok = false;
                detail = "commodity " + c.id + " has arcs behind its source/sink";
                break;
            }
        }
        add(2, ok, detail);
    }
    {  // 3: total side demand fits under M - 3
        Rat sum_d = rat(nf) * rat(2 * (n_arcs - 1));
        bool ok = sum_d <= art.M - 3;
        add(3, ok, rat_str(sum_d) + " vs " + rat_str(art.M - 3));
    }
    {  // 4: every heavy arc carries >= 2 units of every side commodity, on the
       // canonical flow and on LP-found flows
        bool ok = true;
        std::string detail;
        Rat heavy = art.M - 2;
        std::vector<PathFlow> probes;
        probes.push_back(hat_flow(art));
        if (nf > 0) {
            probes.push_back(multicommodity_flow(inst, 1, limits));
            probes.push_back(multicommodity_flow(inst, 2, limits));
        }
        for (std::size_t pi = 0; pi < probes.size() && ok; ++pi) {
            std::map<std::string, std::map<int, Rat>> per_commodity;
            for (const auto& [p, v] : probes[pi].entries)
                for (int a : p.arcs) per_commodity[p.commodity][a] += v;
            for (const std::string& fid : art.f_ids) {
                for (int a = 0; a < g.arc_count(); ++a) {
                    if (g.arc(a).capacity < heavy) continue;
                    Rat f = 0;
                    auto it = per_commodity.find(fid);
                    if (it != per_commodity.end()) {
                        auto jt = it->second.find(a);
                        if (jt != it->second.end()) f = jt->second;
                    }
                    if (f < 2) {
                        ok = false;
                        detail = "probe " + std::to_string(pi) + ": commodity " + fid +
                                 " sends " + rat_str(f) + " < 2 over " + g.arc(a).id;
                        break;
                    }
                }
                if (!ok) break;
            }
        }
        add(4, ok, detail);
    }
    {  // 5: the explicit cut has capacity sum(d_i) and k-1 arcs of capacity M
        std::set<std::string> cut_set;
        for (const Commodity& c : inst.commodities) cut_set.insert(c.source);
        cut_set.insert(art.input.source);
        for (const std::string& c : art.clique_arcs) cut_set.insert("vp:" + c);
        Rat cap = 0;
        long heavy_count = 0;
        for (const Arc& a : g.arcs()) {
            if (!cut_set.count(a.tail) || cut_set.count(a.head)) continue;
            cap += a.capacity;
            if (a.capacity == art.M) ++heavy_count;
        }
        Rat sum_demands = 0;
        for (const Commodity& c : inst.commodities) sum_demands += c.demand;
        bool ok = cap == sum_demands && heavy_count == inst.k - 1;
        add(5, ok,
            "cut capacity " + rat_str(cap) + " vs " + rat_str(sum_demands) + ", " +
                std::to_string(heavy_count) + " heavy arcs vs k-1 = " +
                std::to_string(inst.k - 1));
    }
    return rep;
}

// ---- MRF-M -> MRF ----

MrfArtifact reduce_mrfm_to_mrf(const MrfmArtifact& art, const Limits& limits) {
    PropertyReport rep = check_properties(art, limits);
    require(rep.all_pass(), "construction properties violated: " + rep.summary());
    long m = static_cast<long>(art.f_pairs.size());
    require(m >= 1, "wrapper construction needs at least one incompatible pair");

    const MrfMInstance& in = art.instance;
    long k = in.k;
    MrfArtifact out;
    out.input = in;
    out.M = art.M;
    out.Mprime = art.M + rat(2 * k - 3);
    out.kprime = art.f_ids;
    Rat sum_dj = 0;
    for (const std::string& fid : art.f_ids) sum_dj += in.commodity(fid).demand;
    out.xi_s = out.Mprime - rat(2 * k) - sum_dj;
    for (const std::string& fid : art.f_ids)
        out.xi_t[fid] = in.commodity(fid).demand * (art.M - 1 - rat(m));

    std::set<std::string> node_ids(in.graph.nodes().begin(), in.graph.nodes().end());
    std::vector<std::string> nodes = in.graph.nodes();
    auto add_node = [&](const std::string& id, const std::string& role) {
        require(!node_ids.count(id), "node id collides with reserved name " + id);
        node_ids.insert(id);
        nodes.push_back(id);
        out.provenance.nodes[id] = role;
    };
    add_node("w:s", "wrapper source");
    add_node("w:t", "wrapper sink");
    add_node("w:sb", "staging node of the shared exit bundle");
    for (const std::string& fid : art.f_ids)
        add_node("w:sp:" + fid, "staging node of commodity " + fid);

    std::set<std::string> arc_ids;
    for (const Arc& a : in.graph.arcs()) arc_ids.insert(a.id);
    std::vector<Arc> arcs = in.graph.arcs();
    auto add_arc = [&](const std::string& id, const std::string& tail, const std::string& head,
                       const Rat& cap, bool immune, const std::string& role) {
        require(!arc_ids.count(id), "arc id collides with reserved name " + id);
        arc_ids.insert(id);
        arcs.push_back(Arc{id, tail, head, cap, immune});
        out.provenance.arcs[id] = role + (immune ? " (immune)" : "");
    };

    const Commodity& c0 = in.commodity(in.i0);
    add_arc("w:in0", "w:s", c0.source, c0.demand, true, "feed of the demand commodity");
    add_arc("w:out0", c0.sink, "w:t", c0.demand, true, "drain of the demand commodity");
    for (long j = 0; j < m; ++j) {
        const std::string& fid = art.f_ids[j];
        const Commodity& ci = in.commodity(fid);
        add_arc("w:sin:" + fid, "w:s", "w:sp:" + fid,
                j == 0 ? out.Mprime : out.Mprime - rat(2 * k), true,
                "feed of the staging chain at commodity " + fid);
        add_arc("w:ent:" + fid, "w:sp:" + fid, ci.source, out.Mprime, false,
                "entry into commodity " + fid);
        std::string next = j + 1 < m ? "w:sp:" + art.f_ids[j + 1] : "w:sb";
        add_arc("w:chn:" + fid, ci.source, next, rat(2 * k), true,
                "staging chain link after commodity " + fid);
        for (long j2 = 0; j2 < m; ++j2) {
            if (j2 == j) continue;
            const std::string& fjd = art.f_ids[j2];
            add_arc("w:cross:" + fid + ":" + fjd, ci.source, in.commodity(fjd).sink,
                    in.commodity(fjd).demand, true,
                    "cross link from commodity " + fid + " to the drain of " + fjd);
        }
        if (sgn(out.xi_s) > 0)
            add_arc("w:xs:" + fid, ci.source, "w:t", out.xi_s, true,
                    "surplus drain of commodity " + fid);
        if (sgn(out.xi_t.at(fid)) > 0)
            add_arc("w:xt:" + fid, "w:s", ci.sink, out.xi_t.at(fid), true,
                    "surplus feed toward the drain of commodity " + fid);
        long di = as_long(ci.demand, "demand of " + fid);
        int w = width_for(di);
        for (long idx = 1; idx <= di; ++idx)
            add_arc("w:A:" + fid + ":" + pad_num(idx, w), ci.sink, "w:t", art.M - 1, false,
                    "exit bundle arc of commodity " + fid);
    }
    add_arc("w:sb0", "w:s", "w:sb", rat(2 * k) * (art.M - 2), true,
            "direct feed of the shared exit bundle");
    int abw = width_for(2 * k);
    for (long idx = 1; idx <= 2 * k; ++idx)
        add_arc("w:Ab:" + pad_num(idx, abw), "w:sb", "w:t", art.M - 1, false,
                "shared exit bundle arc");

    Digraph wg = Digraph::build(std::move(nodes), std::move(arcs));
    out.Delta = sum_out_capacity(wg, "w:s");
    out.L = out.Delta - (rat(k) * art.M - 1);
    out.instance = MrfInstance{std::move(wg), "w:s", "w:t", static_cast<int>(k), out.L};
    out.instance.validate();
    return out;
}

ExpandArtifact expand_immune(const MrfInstance& inst) {
    inst.validate();
    ExpandArtifact art;
    art.input = inst;
    std::vector<Arc> arcs;
    for (const Arc& a : inst.graph.arcs()) {
        if (!a.immune) {
            arcs.push_back(a);
            continue;
        }
        long cap = as_long(a.capacity, "immune capacity of " + a.id);
        int w = width_for(cap == 0 ? 1 : cap);
        for (long j = 1; j <= cap; ++j) {
            std::string id = a.id + "#" + pad_num(j, w);
            arcs.push_back(Arc{id, a.tail, a.head, rat(1), false});
            art.parent[id] = a.id;
            art.provenance.arcs[id] = "unit replacement of immune arc " + a.id;
        }
    }
    art.instance = MrfInstance{Digraph::build(inst.graph.nodes(), std::move(arcs)), inst.source,
                               inst.sink, inst.k, inst.threshold};
    art.instance.validate();
    return art;
}

PathFlow contract_immune(const ExpandArtifact& art, const PathFlow& flow) {
    PathFlow out;
    for (const auto& [p, v] : flow.entries) {
        std::vector<std::string> ids;
        for (int a : p.arcs) {
            const std::string& id = art.instance.graph.arc(a).id;
            auto it = art.parent.find(id);
            ids.push_back(it == art.parent.end() ? id : it->second);
        }
        out.add(path_from_ids(art.input.graph, ids, p.commodity), v);
    }
    return out;
}

PathFlow base_flow(const MrfArtifact& art) {
    const Digraph& g = art.instance.graph;
    long k = art.instance.k;
    long m = static_cast<long>(art.kprime.size());

    auto bundle = [&](const std::string& prefix) {
        std::vector<std::string> ids;
        for (const Arc& a : g.arcs())
            if (a.id.rfind(prefix, 0) == 0) ids.push_back(a.id);
        return ids;
    };
    std::vector<std::string> abar = bundle("w:Ab:");
    std::vector<std::vector<std::string>> exit_bundles;
    for (const std::string& fid : art.kprime) exit_bundles.push_back(bundle("w:A:" + fid + ":"));

    // staging chain: sin, then ent/chn through every commodity in order
    std::vector<std::string> chain = {"w:sin:" + art.kprime[0]};
    for (long j = 0; j < m; ++j) {
        chain.push_back("w:ent:" + art.kprime[j]);
        chain.push_back("w:chn:" + art.kprime[j]);
    }

    PathFlow flow;
    for (const std::string& ab : abar) {
        std::vector<std::string> ids = chain;
        ids.push_back(ab);
        flow.add(path_from_ids(g, ids), rat(1));
        flow.add(path_from_ids(g, {"w:sb0", ab}), art.M - 2);
    }
    for (long j = 0; j < m; ++j) {
        const std::string& fid = art.kprime[j];
        if (sgn(art.xi_s) > 0)
            flow.add(path_from_ids(g, {"w:sin:" + fid, "w:ent:" + fid, "w:xs:" + fid}),
                     art.xi_s);
        for (const std::string& a : exit_bundles[j])
            flow.add(path_from_ids(g, {"w:xt:" + fid, a}), art.M - 1 - rat(m));
        for (long j2 = 0; j2 < m; ++j2) {
            if (j2 == j) continue;
            for (const std::string& a : exit_bundles[j2])
                flow.add(path_from_ids(g, {"w:sin:" + fid, "w:ent:" + fid,
                                           "w:cross:" + fid + ":" + art.kprime[j2], a}),
                         rat(1));
        }
    }
    validate_paths(g, art.instance.source, art.instance.sink, flow);
    Rat expected = art.Delta;
    for (const Commodity& c : art.input.commodities) expected -= c.demand;
    require(flow.total() == expected, "base flow value " + rat_str(flow.total()) +
                                          " != expected " + rat_str(expected));
    return flow;
}

PathFlow lift_flow(const MrfArtifact& art, const PathFlow& x, bool integral,
                   const Limits& limits) {
    std::string why;
    require(is_feasible(x, art.input, &why), "multicommodity flow is not feasible: " + why);
    Rat bound = rat(art.instance.k) * art.M - 1;
    auto [scen, worst] = best_response(art.input.graph, x, art.instance.k, nullptr,
                                       ScenarioMode::at_most_k, limits);
    require(worst <= bound,
            "multicommodity flow is not a witness: a scenario loses " + rat_str(worst));

    const Digraph& wg = art.instance.graph;
    PathFlow out = base_flow(art);
    std::map<std::string, std::vector<std::string>> exit_bundles;
    for (const std::string& fid : art.kprime)
        for (const Arc& a : wg.arcs())
            if (a.id.rfind("w:A:" + fid + ":", 0) == 0) exit_bundles[fid].push_back(a.id);

    for (const auto& [p, v] : x.entries) {
        std::vector<std::string> inner = path_arc_ids(art.input.graph, p);
        if (p.commodity == art.input.i0) {
            std::vector<std::string> ids = {"w:in0"};
            ids.insert(ids.end(), inner.begin(), inner.end());
            ids.push_back("w:out0");
            out.add(path_from_ids(wg, ids), v);
            continue;
        }
        if (integral) continue;  // handled below, arc by arc
        const std::vector<std::string>& exits = exit_bundles.at(p.commodity);
        Rat share = v / rat(static_cast<long>(exits.size()));
        for (const std::string& a : exits) {
            std::vector<std::string> ids = {"w:sin:" + p.commodity, "w:ent:" + p.commodity};
            ids.insert(ids.end(), inner.begin(), inner.end());
            ids.push_back(a);
            out.add(path_from_ids(wg, ids), share);
        }
    }
    if (integral) {
        // match the unit copies of each commodity's paths to distinct exit arcs
        std::map<std::string, std::size_t> next_exit;
        for (const auto& [p, v] : x.entries) {
            if (p.commodity == art.input.i0) continue;
            std::vector<std::string> inner = path_arc_ids(art.input.graph, p);
            const std::vector<std::string>& exits = exit_bundles.at(p.commodity);
            long units = as_long(v, "path value of an integral witness");
            for (long u = 0; u < units; ++u) {
                std::size_t& cursor = next_exit[p.commodity];
                require(cursor < exits.size(), "more flow than exit arcs for " + p.commodity);
                std::vector<std::string> ids = {"w:sin:" + p.commodity,
                                                "w:ent:" + p.commodity};
                ids.insert(ids.end(), inner.begin(), inner.end());
                ids.push_back(exits[cursor++]);
                out.add(path_from_ids(wg, ids), rat(1));
            }
        }
    }

    require(out.total() == art.Delta,
            "lifted flow value " + rat_str(out.total()) + " != " + rat_str(art.Delta));
    require(is_feasible(out, art.instance, &why), "lifted flow is not feasible: " + why);
    auto [ws, wl] =
        best_response(wg, out, art.instance.k, nullptr, ScenarioMode::at_most_k, limits);
    require(wl <= bound, "lifted flow exceeds the loss bound: " + rat_str(wl));
    return out;
}

PathFlow project_flow(const MrfArtifact& art, const PathFlow& flow, const Limits& limits) {
    const Digraph& wg = art.instance.graph;
    std::string why;
    require(is_feasible(flow, art.instance, &why), "wrapped flow is not feasible: " + why);
    Rat bound = rat(art.instance.k) * art.M - 1;
    auto [scen, worst] =
        best_response(wg, flow, art.instance.k, nullptr, ScenarioMode::at_most_k, limits);
    require(flow.total() - worst >= art.L,
            "flow is not a witness: only " + rat_str(flow.total() - worst) + " survives, need " +
                rat_str(art.L));

    std::map<std::pair<std::string, std::string>, std::string> endpoints;
    for (const Commodity& c : art.input.commodities) endpoints[{c.source, c.sink}] = c.id;
    const Digraph& ig = art.input.graph;
    PathFlow out;
    for (const auto& [q, v] : flow.entries) {
        std::vector<int> inner;
        for (int a : q.arcs) {
            const std::string& id = wg.arc(a).id;
            if (ig.has_arc(id)) inner.push_back(ig.arc_index(id));
        }
        if (inner.empty()) continue;
        for (std::size_t i = 0; i + 1 < inner.size(); ++i)
            require(ig.arc(inner[i]).head == ig.arc(inner[i + 1]).tail,
                    "restriction of a flow path is not connected");
        auto it = endpoints.find({ig.arc(inner.front()).tail, ig.arc(inner.back()).head});
        require(it != endpoints.end(), "restricted path matches no commodity");
        out.add(Path{inner, it->second}, v);
    }
    require(is_feasible(out, art.input, &why),
            "projected flow is not a multicommodity witness: " + why);
    auto [s2, l2] = best_response(ig, out, art.instance.k, nullptr, ScenarioMode::at_most_k,
                                  limits);
    require(l2 <= bound, "projected flow exceeds the loss bound: " + rat_str(l2));
    return out;
}

// ---- clique interdiction -> integral MRF-R ----

CliqueMrfrArtifact reduce_clique_interdiction(const UndirectedGraph& g, int ell, int r) {
    long n = static_cast<long>(g.vertices().size());
    require(ell >= 2, "interdiction reduction needs ell >= 2");
    require(r >= 1 && r < n, "interdiction reduction needs 1 <= r < |V|");

    CliqueMrfrArtifact art;
    art.input = g;
    art.ell = ell;
    art.r = r;
    int w = width_for(n + 1);

    std::vector<std::string> nodes = {"s", "t", "s0", "s1", "t0", "t1"};
    art.provenance.nodes["s"] = "source";
    art.provenance.nodes["t"] = "sink";
    art.provenance.nodes["s0"] = "hub feeding the 0-lanes";
    art.provenance.nodes["s1"] = "hub feeding the 1-lanes";
    art.provenance.nodes["t0"] = "hub draining the 0-lanes";
    art.provenance.nodes["t1"] = "hub draining the 1-lanes";
    for (long i = 1; i <= n + 1; ++i) {
        nodes.push_back("v" + pad_num(i, w));
        art.provenance.nodes[nodes.back()] =
            i <= n ? "chain node of vertex " + g.vertices()[i - 1] : "end of the vertex chain";
    }
    for (long i = 1; i <= n; ++i)
        for (int b : {0, 1}) {
            nodes.push_back("y" + std::to_string(b) + pad_num(i, w));
            nodes.push_back("z" + std::to_string(b) + pad_num(i, w));
        }

    std::vector<Arc> arcs;
    auto add = [&](const std::string& id, const std::string& tail, const std::string& head,
                   const std::string& role) {
        arcs.push_back(Arc{id, tail, head, rat(1), false});
        art.provenance.arcs[id] = role;
    };
    art.a_s = "as";
    art.a_t = "at";
    add("as", "s", "v" + pad_num(1, w), "chain entry");
    add("at", "v" + pad_num(n + 1, w), "t", "chain exit");
    for (long i = 1; i <= n; ++i) {
        const std::string& vert = g.vertices()[i - 1];
        for (int b : {0, 1}) {
            std::string bs = std::to_string(b);
            add("g" + bs + "i" + pad_num(i, w), "v" + pad_num(i, w), "y" + bs + pad_num(i, w),
                "lane-" + bs + " entry of vertex " + vert);
            add("a" + bs + "v" + pad_num(i, w), "y" + bs + pad_num(i, w),
                "z" + bs + pad_num(i, w), "lane-" + bs + " core of vertex " + vert);
            add("g" + bs + "o" + pad_num(i, w), "z" + bs + pad_num(i, w),
                "v" + pad_num(i + 1, w), "lane-" + bs + " exit of vertex " + vert);
        }
        art.vertex_arc[vert] = "a1v" + pad_num(i, w);
        add("h0i" + pad_num(i, w), "s0", "y0" + pad_num(i, w), "hub feed, 0-lane of " + vert);
        add("h0o" + pad_num(i, w), "z0" + pad_num(i, w), "t0", "hub drain, 0-lane of " + vert);
        add("h1i" + pad_num(i, w), "s1", "y1" + pad_num(i, w), "hub feed, 1-lane of " + vert);
        add("h1o" + pad_num(i, w), "z1" + pad_num(i, w), "t1", "hub drain, 1-lane of " + vert);
    }
    int bw = width_for(n);
    for (long j = 1; j <= r; ++j) {
        add("b0s" + pad_num(j, bw), "s", "s0", "0-hub feed bundle");
        add("b0t" + pad_num(j, bw), "t0", "t", "0-hub drain bundle");
    }
    for (long j = 1; j <= n - r; ++j) {
        add("b1s" + pad_num(j, bw), "s", "s1", "1-hub feed bundle");
        add("b1t" + pad_num(j, bw), "t1", "t", "1-hub drain bundle");
    }
    std::vector<std::string> sbar = {"as", "at"};
    int aw = width_for(ell > 1 ? ell - 1 : 1);
    for (int j = 1; j <= ell - 1; ++j) {
        add("ast" + pad_num(j, aw), "s", "t", "shortcut bundle arc");
        art.a_st.push_back("ast" + pad_num(j, aw));
        sbar.push_back(art.a_st.back());
    }

    std::vector<std::pair<std::string, std::string>> compat;
    for (const auto& [v, u] : g.edges()) compat.emplace_back(art.vertex_arc[v], art.vertex_arc[u]);
    for (const std::string& v : g.vertices()) compat.emplace_back("as", art.vertex_arc[v]);
    for (std::size_t i = 0; i < sbar.size(); ++i)
        for (std::size_t j = i + 1; j < sbar.size(); ++j) compat.emplace_back(sbar[i], sbar[j]);

    art.instance = MrfRInstance{Digraph::build(std::move(nodes), std::move(arcs)),
                                "s",
                                "t",
                                ell + 1,
                                CompatGraph(compat),
                                rat(n + ell),
                                true,
                                {}};
    art.instance.validate();
    return art;
}

std::vector<std::string> interdiction_set_from_flow(const CliqueMrfrArtifact& art,
                                                    const PathFlow& flow,
                                                    const Limits& limits) {
    const MrfRInstance& inst = art.instance;
    std::string why;
    require(is_feasible(flow, inst, &why), "flow is not feasible: " + why);
    require(flow.total() == inst.demand, "flow value != demand");
    for (const auto& [p, v] : flow.entries)
        require(v == 1, "witness is not integral: path value " + rat_str(v));
    auto [scen, worst] =
        best_response(inst.graph, flow, inst.k, &inst.compat, ScenarioMode::at_most_k, limits);
    require(worst <= rat(inst.k - 1),
            "flow is not a witness: a scenario loses " + rat_str(worst));

    int as_idx = inst.graph.arc_index(art.a_s);
    int at_idx = inst.graph.arc_index(art.a_t);
    const Path* sigma = nullptr;
    for (const auto& [p, v] : flow.entries) {
        bool has_s = std::find(p.arcs.begin(), p.arcs.end(), as_idx) != p.arcs.end();
        bool has_t = std::find(p.arcs.begin(), p.arcs.end(), at_idx) != p.arcs.end();
        if (has_s && has_t) {
            sigma = &p;
            break;
        }
    }
    require(sigma != nullptr, "no flow path contains both chain boundary arcs");
    std::set<int> on(sigma->arcs.begin(), sigma->arcs.end());
    std::vector<std::string> removal;
    for (const auto& [vert, aid] : art.vertex_arc)
        if (on.count(inst.graph.arc_index(aid))) removal.push_back(vert);
    require(static_cast<int>(removal.size()) == art.r,
            "extracted set has size " + std::to_string(removal.size()) + ", expected " +
                std::to_string(art.r));
    for (const auto& clique : cliques_of_size(art.input, art.ell)) {
        bool hit = false;
        for (const std::string& v : clique)
            if (std::find(removal.begin(), removal.end(), v) != removal.end()) {
                hit = true;
                break;
            }
        require(hit, "extracted set misses a clique");
    }
    return removal;
}

// ---- combiner machinery ----

MrfrTransformArtifact matchingize_compat(const MrfRInstance& inst) {
    inst.validate();
    MrfrTransformArtifact art;
    art.input = inst;
    bool any = false;
    for (const Arc& a : inst.graph.arcs())
        if (inst.compat.degree(a.id) > 1) any = true;
    if (!any) {
        art.instance = inst;
        art.identity = true;
        return art;
    }

    std::set<std::string> node_ids(inst.graph.nodes().begin(), inst.graph.nodes().end());
    std::set<std::string> arc_ids;
    std::vector<std::string> nodes = inst.graph.nodes();
    std::vector<Arc> arcs;
    auto seg_id = [&](const std::string& a, int j) {
        return inst.compat.degree(a) <= 1 ? a : a + "~" + std::to_string(j);
    };
    for (const Arc& a : inst.graph.arcs()) {
        int deg = inst.compat.degree(a.id);
        if (deg <= 1) {
            require(!arc_ids.count(a.id), "duplicate arc id " + a.id);
            arc_ids.insert(a.id);
            arcs.push_back(a);
            continue;
        }
        std::string prev = a.tail;
        for (int j = 1; j <= deg; ++j) {
            std::string head = a.head;
            if (j < deg) {
                head = a.id + "@" + std::to_string(j);
                require(!node_ids.count(head), "node id collides with segment node " + head);
                node_ids.insert(head);
                nodes.push_back(head);
                art.provenance.nodes[head] = "subdivision node " + std::to_string(j) + " of " +
                                             a.id;
            }
            std::string id = seg_id(a.id, j);
            require(!arc_ids.count(id), "arc id collides with segment " + id);
            arc_ids.insert(id);
            arcs.push_back(Arc{id, prev, head, a.capacity, a.immune});
            art.provenance.arcs[id] = "segment " + std::to_string(j) + " of " + a.id;
            prev = head;
        }
    }
    auto edge_slot = [&](const std::string& a, const std::string& other) {
        auto nb = inst.compat.neighbors(a);
        auto it = std::find(nb.begin(), nb.end(), other);
        return static_cast<int>(it - nb.begin()) + 1;
    };
    std::vector<std::pair<std::string, std::string>> compat;
    for (const auto& [a, b] : inst.compat.edges())
        compat.emplace_back(seg_id(a, edge_slot(a, b)), seg_id(b, edge_slot(b, a)));

    std::vector<std::string> clique = inst.clique_arcs;
    for (const std::string& c : inst.clique_arcs)
        if (inst.compat.degree(c) > 1) clique.clear();

    art.instance = MrfRInstance{Digraph::build(std::move(nodes), std::move(arcs)),
                                inst.source,
                                inst.sink,
                                inst.k,
                                CompatGraph(compat),
                                inst.demand,
                                inst.integral,
                                clique};
    art.instance.validate();
    return art;
}

MrfrTransformArtifact saturate_demand(const MrfRInstance& inst) {
    inst.validate();
    Rat mf = max_flow(inst.graph, inst.source, inst.sink);
    require(mf >= inst.demand, "max flow " + rat_str(mf) + " is below the demand " +
                                   rat_str(inst.demand) + "; cannot saturate");
    MrfrTransformArtifact art;
    art.input = inst;
    if (mf == inst.demand) {
        art.instance = inst;
        art.identity = true;
        return art;
    }
    long theta = as_long(inst.demand, "demand");
    std::set<std::string> node_ids(inst.graph.nodes().begin(), inst.graph.nodes().end());
    std::string hub = "sat";
    int suffix = 0;
    while (node_ids.count(hub)) hub = "sat_" + std::to_string(++suffix);
    std::vector<std::string> nodes = inst.graph.nodes();
    nodes.push_back(hub);
    art.provenance.nodes[hub] = "split image of the source; takes over its outgoing arcs";
    std::set<std::string> arc_ids;
    std::vector<Arc> arcs = inst.graph.arcs();
    for (Arc& a : arcs) {
        arc_ids.insert(a.id);
        if (a.tail == inst.source) a.tail = hub;
    }
    int w = width_for(theta);
    for (long j = 1; j <= theta; ++j) {
        std::string id = "sa" + pad_num(j, w);
        require(!arc_ids.count(id), "input arc id collides with reserved name " + id);
        arcs.push_back(Arc{id, inst.source, hub, rat(1), false});
        art.provenance.arcs[id] = "saturation bundle arc (singleton in the compat graph)";
    }
    std::vector<std::string> clique = inst.clique_arcs;
    for (const std::string& c : inst.clique_arcs)
        if (inst.graph.arc(inst.graph.arc_index(c)).tail == inst.source) clique.clear();
    art.instance = MrfRInstance{Digraph::build(std::move(nodes), std::move(arcs)),
                                inst.source,
                                inst.sink,
                                inst.k,
                                inst.compat,
                                inst.demand,
                                inst.integral,
                                clique};
    art.instance.validate();
    return art;
}

MrfrTransformArtifact pad_budget(const MrfRInstance& inst, int k_target) {
    inst.validate();
    require(k_target >= inst.k, "cannot shrink the interdiction budget");
    MrfrTransformArtifact art;
    art.input = inst;
    if (k_target == inst.k) {
        art.instance = inst;
        art.identity = true;
        return art;
    }
    std::set<std::string> arc_ids;
    std::vector<Arc> arcs = inst.graph.arcs();
    for (const Arc& a : arcs) arc_ids.insert(a.id);
    std::vector<std::pair<std::string, std::string>> compat(inst.compat.edges().begin(),
                                                            inst.compat.edges().end());
    int extra = k_target - inst.k;
    int w = width_for(extra);
    std::vector<std::string> added;
    for (int j = 1; j <= extra; ++j) {
        std::string id = "pd" + pad_num(j, w);
        require(!arc_ids.count(id), "input arc id collides with reserved name " + id);
        arc_ids.insert(id);
        art.provenance.arcs[id] = "budget padding arc (adjacent to every other arc)";
        for (const Arc& a : arcs) compat.emplace_back(id, a.id);
        for (const std::string& other : added) compat.emplace_back(id, other);
        added.push_back(id);
    }
    for (const std::string& id : added)
        arcs.push_back(Arc{id, inst.source, inst.sink, rat(1), false});
    art.instance = MrfRInstance{Digraph::build(inst.graph.nodes(), std::move(arcs)),
                                inst.source,
                                inst.sink,
                                k_target,
                                CompatGraph(compat),
                                inst.demand + rat(extra),
                                inst.integral,
                                {}};
    art.instance.validate();
    return art;
}

CombineArtifact combine_clique_flow(const UndirectedGraph& g, int n,
                                    const MrfRInstance& flow_inst) {
    // Correctness additionally assumes g has no clique larger than n; that is a
    // property of the calling corpus, not something we can check cheaply here.
    flow_inst.validate();
    require(n >= 1, "clique size target must be positive");
    require(flow_inst.k == 2, "flow instance must have interdiction budget 2");
    require(max_flow(flow_inst.graph, flow_inst.source, flow_inst.sink) == flow_inst.demand,
            "flow instance demand must equal its max flow (apply saturate_demand)");
    for (const Arc& a : flow_inst.graph.arcs())
        require(flow_inst.compat.degree(a.id) <= 1,
                "flow instance compat graph must be a matching (apply matchingize_compat)");

    CombineArtifact art;
    art.clique_graph = g;
    art.n = n;
    art.flow_input = flow_inst;
    std::set<std::string> arc_ids;
    std::vector<Arc> arcs = flow_inst.graph.arcs();
    for (const Arc& a : arcs) arc_ids.insert(a.id);
    std::vector<std::pair<std::string, std::string>> compat(flow_inst.compat.edges().begin(),
                                                            flow_inst.compat.edges().end());
    std::map<std::string, std::string> vertex_arc;
    for (const std::string& v : g.vertices()) {
        std::string id = "cl:" + v;
        require(!arc_ids.count(id), "flow instance arc id collides with " + id);
        arc_ids.insert(id);
        vertex_arc[v] = id;
        art.vertex_arcs.push_back(id);
        art.provenance.arcs[id] = "clique arc of vertex " + v;
    }
    for (const auto& [v, u] : g.edges()) compat.emplace_back(vertex_arc[v], vertex_arc[u]);
    for (const std::string& v : g.vertices())
        for (const Arc& a : flow_inst.graph.arcs()) compat.emplace_back(vertex_arc[v], a.id);
    for (const std::string& id : art.vertex_arcs)
        arcs.push_back(Arc{id, flow_inst.source, flow_inst.sink, rat(1), false});

    art.instance = MrfRInstance{Digraph::build(flow_inst.graph.nodes(), std::move(arcs)),
                                flow_inst.source,
                                flow_inst.sink,
                                n + 2,
                                CompatGraph(compat),
                                flow_inst.demand + rat(static_cast<long>(g.vertices().size())),
                                false,
                                {}};
    art.instance.validate();
    return art;
}

UnionArtifact wagner_union(const std::vector<MrfRInstance>& insts) {
    require(!insts.empty(), "union needs at least one instance");
    int k = insts[0].k;
    UnionArtifact art;
    art.inputs = insts;
    std::vector<std::string> nodes = {"s", "t"};
    std::vector<Arc> arcs;
    std::vector<std::pair<std::string, std::string>> compat;
    Rat theta = 0;
    int w = width_for(insts.size());
    for (std::size_t r = 0; r < insts.size(); ++r) {
        const MrfRInstance& inst = insts[r];
        inst.validate();
        require(inst.k == k, "interdiction budgets differ (apply pad_budget first)");
        require(max_flow(inst.graph, inst.source, inst.sink) == inst.demand,
                "component demand must equal its max flow (apply saturate_demand)");
        std::string prefix = "u" + pad_num(r + 1, w) + ":";
        auto map_node = [&](const std::string& id) {
            if (id == inst.source) return std::string("s");
            if (id == inst.sink) return std::string("t");
            return prefix + id;
        };
        for (const std::string& id : inst.graph.nodes())
            if (id != inst.source && id != inst.sink) nodes.push_back(prefix + id);
        for (const Arc& a : inst.graph.arcs()) {
            arcs.push_back(Arc{prefix + a.id, map_node(a.tail), map_node(a.head), a.capacity,
                               a.immune});
            art.provenance.arcs[prefix + a.id] =
                "arc " + a.id + " of component " + std::to_string(r + 1);
        }
        for (const auto& [a, b] : inst.compat.edges())
            compat.emplace_back(prefix + a, prefix + b);
        theta += inst.demand;
    }
    art.instance = MrfRInstance{Digraph::build(std::move(nodes), std::move(arcs)),
                                "s",
                                "t",
                                k,
                                CompatGraph(compat),
                                theta,
                                false,
                                {}};
    art.instance.validate();
    return art;
}

// ---- full pipeline ----

PipelineArtifact mrfr_to_mrf(const MrfRInstance& inst, const Limits& limits) {
    PipelineArtifact art;
    art.norm = normalize_mrfr(inst);
    art.mrfm = reduce_mrfr_to_mrfm(art.norm.instance);
    art.properties = check_properties(art.mrfm, limits);
    art.wrap = reduce_mrfm_to_mrf(art.mrfm, limits);
    art.expand = expand_immune(art.wrap.instance);
    art.L = art.wrap.L;
    return art;
}

}  // namespace mrf
