#include "mrf/instances.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mrf {

Digraph Digraph::build(std::vector<std::string> nodes, std::vector<Arc> arcs) {
    Digraph g;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes.size(); ++i) g.node_index_[nodes[i]] = static_cast<int>(i);
    g.nodes_ = std::move(nodes);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const Arc& a = arcs[i];
        if (!g.node_index_.count(a.tail))
            throw ValidationError("arc " + a.id + ": undeclared tail node " + a.tail);
        if (!g.node_index_.count(a.head))
            throw ValidationError("arc " + a.id + ": undeclared head node " + a.head);
        if (a.tail == a.head) throw ValidationError("arc " + a.id + ": self-loop rejected");
        if (sgn(a.capacity) < 0) throw ValidationError("arc " + a.id + ": negative capacity");
        if (!g.arc_index_.emplace(a.id, static_cast<int>(i)).second)
            throw ValidationError("duplicate arc id " + a.id);
    }
    g.arcs_ = std::move(arcs);
    g.out_.resize(g.nodes_.size());
    g.in_.resize(g.nodes_.size());
    for (int i = 0; i < g.arc_count(); ++i) {
        g.out_[g.node_index_[g.arcs_[i].tail]].push_back(i);
        g.in_[g.node_index_[g.arcs_[i].head]].push_back(i);
    }
    return g;
}

int Digraph::node_index(const std::string& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw ValidationError("unknown node " + id);
    return it->second;
}

int Digraph::arc_index(const std::string& id) const {
    auto it = arc_index_.find(id);
    if (it == arc_index_.end()) throw ValidationError("unknown arc " + id);
    return it->second;
}

bool Digraph::is_dag() const {
    std::vector<int> indeg(nodes_.size(), 0);
    for (const Arc& a : arcs_) indeg[node_index_.at(a.head)]++;
    std::vector<int> stack;
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        if (indeg[v] == 0) stack.push_back(static_cast<int>(v));
    std::size_t seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int ai : out_[v])
            if (--indeg[node_index_.at(arcs_[ai].head)] == 0)
                stack.push_back(node_index_.at(arcs_[ai].head));
    }
    return seen == nodes_.size();
}

CompatGraph::CompatGraph(const std::vector<std::pair<std::string, std::string>>& edges) {
    for (auto [a, b] : edges) {
        if (a == b) throw ValidationError("compat self-pair on arc " + a);
        if (b < a) std::swap(a, b);
        edges_.emplace(std::move(a), std::move(b));
    }
}

void CompatGraph::validate_against(const Digraph& g) const {
    for (const auto& [a, b] : edges_) {
        if (!g.has_arc(a)) throw ValidationError("compat edge endpoint " + a + " is not an arc");
        if (!g.has_arc(b)) throw ValidationError("compat edge endpoint " + b + " is not an arc");
    }
}

bool CompatGraph::adjacent(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    return a < b ? edges_.count({a, b}) > 0 : edges_.count({b, a}) > 0;
}

int CompatGraph::degree(const std::string& a) const {
    int d = 0;
    for (const auto& [x, y] : edges_)
        if (x == a || y == a) ++d;
    return d;
}

std::vector<std::string> CompatGraph::neighbors(const std::string& a) const {
    std::vector<std::string> out;
    for (const auto& [x, y] : edges_) {
        if (x == a) out.push_back(y);
        if (y == a) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void MrfInstance::validate() const {
    if (source == sink) throw ValidationError("source equals sink");
    if (k < 1) throw ValidationError("budget k must be >= 1");
    graph.node_index(source);
    graph.node_index(sink);
}

void MrfRInstance::validate() const {
    if (source == sink) throw ValidationError("source equals sink");
    if (k < 1) throw ValidationError("budget k must be >= 1");
    graph.node_index(source);
    graph.node_index(sink);
    if (!graph.is_dag()) throw ValidationError("MRF-R graph must be acyclic");
    for (const Arc& a : graph.arcs()) {
        if (a.capacity != 1) throw ValidationError("MRF-R arc " + a.id + " capacity must be 1");
        if (a.immune) throw ValidationError("MRF-R arc " + a.id + " may not be immune");
    }
    compat.validate_against(graph);
    if (sgn(demand) < 0) throw ValidationError("demand must be >= 0");
    for (const std::string& id : clique_arcs) {
        const Arc& a = graph.arc(graph.arc_index(id));
        if (a.tail != source || a.head != sink)
            throw ValidationError("clique arc " + id + " is not a source->sink arc");
    }
    for (std::size_t i = 0; i < clique_arcs.size(); ++i)
        for (std::size_t j = i + 1; j < clique_arcs.size(); ++j)
            if (!compat.adjacent(clique_arcs[i], clique_arcs[j]))
                throw ValidationError("clique arcs " + clique_arcs[i] + "," + clique_arcs[j] +
                                      " are not compatible");
}

void MrfMInstance::validate() const {
    if (k < 1) throw ValidationError("budget k must be >= 1");
    if (commodities.empty()) throw ValidationError("MRF-M needs at least one commodity");
    std::set<std::string> ids;
    bool found_i0 = false;
    for (const Commodity& c : commodities) {
        if (!ids.insert(c.id).second) throw ValidationError("duplicate commodity id " + c.id);
        if (c.source == c.sink) throw ValidationError("commodity " + c.id + ": source equals sink");
        graph.node_index(c.source);
        graph.node_index(c.sink);
        if (sgn(c.demand) <= 0) throw ValidationError("commodity " + c.id + ": demand must be > 0");
        found_i0 |= c.id == i0;
    }
    if (!found_i0) throw ValidationError("designated commodity " + i0 + " not found");
}

const Commodity& MrfMInstance::commodity(const std::string& id) const {
    for (const Commodity& c : commodities)
        if (c.id == id) return c;
    throw ValidationError("unknown commodity " + id);
}

Rat MrfMInstance::max_capacity() const {
    if (graph.arc_count() == 0) throw ValidationError("MRF-M graph has no arcs");
    Rat m = graph.arc(0).capacity;
    for (const Arc& a : graph.arcs()) m = std::max(m, a.capacity);
    return m;
}

void PathFlow::add(const Path& p, const Rat& v) {
    if (sgn(v) == 0) return;
    auto [it, fresh] = entries.emplace(p, v);
    if (!fresh) {
        it->second += v;
        if (sgn(it->second) == 0) entries.erase(it);
    }
}

Rat PathFlow::total() const {
    Rat t = 0;
    for (const auto& [p, v] : entries) t += v;
    return t;
}

std::vector<Path> enumerate_st_paths(const Digraph& g, const std::string& source,
                                     const std::string& sink, std::size_t limit) {
    std::vector<Path> out;
    int s = g.node_index(source), t = g.node_index(sink);
    std::vector<bool> visited(g.nodes().size(), false);
    std::vector<int> stack;
    std::function<void(int)> dfs = [&](int v) {
        if (v == t) {
            if (out.size() >= limit)
                throw ResourceLimitError("path enumeration exceeds limit of " +
                                         std::to_string(limit));
            out.push_back(Path{stack, ""});
            return;
        }
        visited[v] = true;
        for (int ai : g.out_arcs(v)) {
            int w = g.node_index(g.arc(ai).head);
            if (visited[w]) continue;
            stack.push_back(ai);
            dfs(w);
            stack.pop_back();
        }
        visited[v] = false;
    };
    if (s != t) dfs(s);
    return out;
}

namespace {

void clique_scenarios(const Digraph& g, const CompatGraph& compat, int k, std::size_t limit,
                      std::vector<Scenario>& out) {
    // Cliques of size <= k in H, enumerated in lexicographic arc-index order.
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (out.size() >= limit)
            throw ResourceLimitError("scenario enumeration exceeds limit of " +
                                     std::to_string(limit));
        out.push_back(cur);
        if (static_cast<int>(cur.size()) == k) return;
        for (int i = start; i < g.arc_count(); ++i) {
            if (g.arc(i).immune) continue;
            bool ok = true;
            for (int j : cur)
                if (!compat.adjacent(g.arc(j).id, g.arc(i).id)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

std::vector<Scenario> enumerate_scenarios(const Digraph& g, int k, ScenarioMode mode,
                                          const CompatGraph* compat, std::size_t limit) {
    std::vector<Scenario> out;
    if (compat) {
        clique_scenarios(g, *compat, k, limit, out);
        return out;
    }
    std::vector<int> eligible;
    for (int i = 0; i < g.arc_count(); ++i)
        if (!g.arc(i).immune) eligible.push_back(i);
    if (mode == ScenarioMode::exactly_k && k > static_cast<int>(eligible.size()))
        throw ValidationError("cannot pick exactly " + std::to_string(k) + " of " +
                              std::to_string(eligible.size()) + " non-immune arcs");
    std::vector<int> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        bool emit = mode == ScenarioMode::at_most_k || static_cast<int>(cur.size()) == k;
        if (emit) {
            if (out.size() >= limit)
                throw ResourceLimitError("scenario enumeration exceeds limit of " +
                                         std::to_string(limit));
            out.push_back(cur);
        }
        if (static_cast<int>(cur.size()) == k) return;
        for (std::size_t i = start; i < eligible.size(); ++i) {
            cur.push_back(eligible[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

Rat loss(const PathFlow& flow, const Scenario& s) {
    Rat total = 0;
    for (const auto& [p, v] : flow.entries) {
        bool hit = false;
        for (int a : p.arcs)
            if (std::binary_search(s.begin(), s.end(), a)) {
                hit = true;
                break;
            }
        if (hit) total += v;
    }
    return total;
}

Rat arc_flow(const PathFlow& flow, int arc) {
    Rat total = 0;
    for (const auto& [p, v] : flow.entries)
        if (std::find(p.arcs.begin(), p.arcs.end(), arc) != p.arcs.end()) total += v;
    return total;
}

std::map<int, Rat> arc_flows(const PathFlow& flow) {
    std::map<int, Rat> out;
    for (const auto& [p, v] : flow.entries)
        for (int a : p.arcs) out[a] += v;
    return out;
}

void validate_paths(const Digraph& g, const std::string& source, const std::string& sink,
                    const PathFlow& flow) {
    for (const auto& [p, v] : flow.entries) {
        if (sgn(v) <= 0) throw ValidationError("non-positive flow entry");
        if (p.arcs.empty()) throw ValidationError("empty path in flow");
        std::set<std::string> seen;
        std::string at = source;
        for (int ai : p.arcs) {
            if (ai < 0 || ai >= g.arc_count()) throw ValidationError("path arc index out of range");
            const Arc& a = g.arc(ai);
            if (a.tail != at)
                throw ValidationError("path not connected at arc " + a.id + " (expected tail " +
                                      at + ")");
            if (!seen.insert(a.tail).second)
                throw ValidationError("path revisits node " + a.tail);
            at = a.head;
        }
        if (at != sink) throw ValidationError("path ends at " + at + ", not the sink");
        if (seen.count(sink)) throw ValidationError("path revisits the sink");
    }
    for (const auto& [ai, f] : arc_flows(flow))
        if (f > g.arc(ai).capacity)
            throw ValidationError("arc " + g.arc(ai).id + " overloaded: " + rat_str(f) + " > " +
                                  rat_str(g.arc(ai).capacity));
}

namespace {

bool feasibility(std::function<void()> check, std::string* why) {
    try {
        check();
        return true;
    } catch (const ValidationError& e) {
        if (why) *why = e.what();
        return false;
    }
}

}  // namespace

bool is_feasible(const PathFlow& flow, const MrfInstance& inst, std::string* why) {
    return feasibility([&] { validate_paths(inst.graph, inst.source, inst.sink, flow); }, why);
}

bool is_feasible(const PathFlow& flow, const MrfRInstance& inst, std::string* why) {
    return feasibility([&] { validate_paths(inst.graph, inst.source, inst.sink, flow); }, why);
}

bool is_feasible(const PathFlow& flow, const MrfMInstance& inst, std::string* why) {
    return feasibility(
        [&] {
            std::map<std::string, PathFlow> per;
            for (const auto& [p, v] : flow.entries) {
                if (p.commodity.empty())
                    throw ValidationError("multicommodity flow entry without commodity id");
                per[p.commodity].add(p, v);
            }
            for (const auto& [cid, sub] : per) {
                const Commodity& c = inst.commodity(cid);
                validate_paths(inst.graph, c.source, c.sink, sub);
                if (sub.total() != c.demand)
                    throw ValidationError("commodity " + cid + " routes " + rat_str(sub.total()) +
                                          " != demand " + rat_str(c.demand));
            }
            for (const Commodity& c : inst.commodities)
                if (!per.count(c.id))
                    throw ValidationError("commodity " + c.id + " has no flow");
            // shared capacities across commodities
            for (const auto& [ai, f] : arc_flows(flow))
                if (f > inst.graph.arc(ai).capacity)
                    throw ValidationError("arc " + inst.graph.arc(ai).id + " overloaded: " +
                                          rat_str(f) + " > " +
                                          rat_str(inst.graph.arc(ai).capacity));
        },
        why);
}

std::vector<int> topological_arc_order(const Digraph& g,
                                       const std::vector<std::string>& forced_last) {
    // Kahn's algorithm, always removing the lexicographically smallest ready node.
    std::vector<int> indeg(g.nodes().size(), 0);
    for (const Arc& a : g.arcs()) indeg[g.node_index(a.head)]++;
    std::set<int> ready;
    for (std::size_t v = 0; v < g.nodes().size(); ++v)
        if (indeg[v] == 0) ready.insert(static_cast<int>(v));
    std::vector<int> topo(g.nodes().size(), -1);
    int next = 0;
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        topo[v] = next++;
        for (int ai : g.out_arcs(v)) {
            int w = g.node_index(g.arc(ai).head);
            if (--indeg[w] == 0) ready.insert(w);
        }
    }
    if (next != static_cast<int>(g.nodes().size())) {
        std::string cyc;
        for (std::size_t v = 0; v < g.nodes().size(); ++v)
            if (topo[v] == -1) cyc += (cyc.empty() ? "" : ",") + g.nodes()[v];
        throw ValidationError("graph has a cycle through nodes {" + cyc + "}");
    }
    std::set<int> last;
    for (const std::string& id : forced_last) last.insert(g.arc_index(id));
    std::vector<int> order;
    for (int i = 0; i < g.arc_count(); ++i)
        if (!last.count(i)) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        int ta = topo[g.node_index(g.arc(a).tail)];
        int tb = topo[g.node_index(g.arc(b).tail)];
        if (ta != tb) return ta < tb;
        return g.arc(a).id < g.arc(b).id;
    });
    for (const std::string& id : forced_last) order.push_back(g.arc_index(id));
    return order;
}

std::vector<std::string> path_arc_ids(const Digraph& g, const Path& p) {
    std::vector<std::string> out;
    out.reserve(p.arcs.size());
    for (int ai : p.arcs) out.push_back(g.arc(ai).id);
    return out;
}

Path path_from_ids(const Digraph& g, const std::vector<std::string>& ids,
                   const std::string& commodity) {
    Path p;
    p.commodity = commodity;
    p.arcs.reserve(ids.size());
    for (const std::string& id : ids) p.arcs.push_back(g.arc_index(id));
    return p;
}

}  // namespace mrf
