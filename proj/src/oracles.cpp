#include "mrf/oracles.hpp"

#include <algorithm>

#include "mrf/lp.hpp"

namespace mrf {

UndirectedGraph UndirectedGraph::build(
    std::vector<std::string> vertices,
    const std::vector<std::pair<std::string, std::string>>& edges) {
    UndirectedGraph g;
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    g.vertices_ = std::move(vertices);
    for (auto [a, b] : edges) {
        if (a == b) throw ValidationError("self-loop on vertex " + a);
        if (!std::binary_search(g.vertices_.begin(), g.vertices_.end(), a) ||
            !std::binary_search(g.vertices_.begin(), g.vertices_.end(), b))
            throw ValidationError("edge endpoint not a declared vertex: {" + a + "," + b + "}");
        if (b < a) std::swap(a, b);
        g.edges_.emplace(std::move(a), std::move(b));
    }
    return g;
}

bool UndirectedGraph::adjacent(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    return a < b ? edges_.count({a, b}) > 0 : edges_.count({b, a}) > 0;
}

Rat FractionalColoring::total() const {
    Rat t = 0;
    for (const auto& [set, w] : weights) t += w;
    return t;
}

void validate_coloring(const UndirectedGraph& g, const FractionalColoring& y) {
    std::map<std::string, Rat> cover;
    for (const auto& [set, w] : y.weights) {
        if (sgn(w) <= 0) throw ValidationError("coloring has a non-positive weight");
        if (set.empty()) throw ValidationError("coloring weights the empty set");
        if (!std::is_sorted(set.begin(), set.end()))
            throw ValidationError("independent set not in sorted order");
        for (std::size_t i = 0; i < set.size(); ++i) {
            for (std::size_t j = i + 1; j < set.size(); ++j) {
                if (set[i] == set[j]) throw ValidationError("duplicate vertex in set");
                if (g.adjacent(set[i], set[j]))
                    throw ValidationError("set is not independent: edge {" + set[i] + "," +
                                          set[j] + "}");
            }
            cover[set[i]] += w;
        }
    }
    for (const std::string& v : g.vertices())
        if (cover[v] != 1)
            throw ValidationError("vertex " + v + " covered with weight " + rat_str(cover[v]) +
                                  " != 1");
}

namespace {

std::vector<std::vector<int>> independent_sets(const UndirectedGraph& g) {
    int n = static_cast<int>(g.vertices().size());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            adj[i][j] = g.adjacent(g.vertices()[i], g.vertices()[j]);
    std::vector<std::vector<int>> sets;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> members;
        bool ok = true;
        for (int i = 0; ok && i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            for (int j : members)
                if (adj[i][j]) {
                    ok = false;
                    break;
                }
            if (ok) members.push_back(i);
        }
        if (ok) sets.push_back(std::move(members));
    }
    return sets;
}

}  // namespace

std::pair<Rat, FractionalColoring> fractional_chromatic_number(const UndirectedGraph& g,
                                                               std::size_t max_vertices) {
    std::size_t n = g.vertices().size();
    if (n == 0) throw ValidationError("chi_f of the empty graph is undefined");
    if (n > max_vertices)
        throw ResourceLimitError("chi_f oracle limited to " + std::to_string(max_vertices) +
                                 " vertices");
    auto sets = independent_sets(g);
    LinearProgram lp;
    lp.sense = Sense::minimize;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::string id = "y" + std::to_string(i);
        lp.add_variable(id);
        lp.objective[id] = rat(1);
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::map<std::string, Rat> row;
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (std::binary_search(sets[i].begin(), sets[i].end(), static_cast<int>(v)))
                row["y" + std::to_string(i)] = rat(1);
        lp.add_constraint("cover_" + g.vertices()[v], std::move(row), Rel::eq, rat(1));
    }
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw ValidationError("chi_f LP unexpectedly " +
                              std::string(sol.status == LpStatus::infeasible ? "infeasible"
                                                                             : "unbounded"));
    FractionalColoring coloring;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const Rat& w = sol.primal.at("y" + std::to_string(i));
        if (sgn(w) == 0) continue;
        std::vector<std::string> names;
        for (int v : sets[i]) names.push_back(g.vertices()[v]);
        coloring.weights[names] = w;
    }
    return {sol.value, coloring};
}

std::vector<std::vector<std::string>> cliques_of_size(const UndirectedGraph& g, int ell) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> cur;
    const auto& vs = g.vertices();
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(cur.size()) == ell) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < vs.size(); ++i) {
            bool ok = true;
            for (const std::string& v : cur)
                if (!g.adjacent(v, vs[i])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(vs[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    if (ell >= 1) rec(0);
    return out;
}

int max_clique(const UndirectedGraph& g) {
    int best = 0;
    std::vector<std::string> cur;
    const auto& vs = g.vertices();
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        best = std::max(best, static_cast<int>(cur.size()));
        for (std::size_t i = start; i < vs.size(); ++i) {
            bool ok = true;
            for (const std::string& v : cur)
                if (!g.adjacent(v, vs[i])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(vs[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return best;
}

InterdictionResult clique_interdiction_bruteforce(const UndirectedGraph& g, int ell, int r,
                                                  std::size_t max_vertices) {
    if (g.vertices().size() > max_vertices)
        throw ResourceLimitError("clique interdiction oracle limited to " +
                                 std::to_string(max_vertices) + " vertices");
    auto cliques = cliques_of_size(g, ell);
    int n = static_cast<int>(g.vertices().size());
    // all subsets in size-then-lexicographic order so the first hit is minimal
    std::vector<std::string> cur;
    InterdictionResult res;
    std::function<bool(std::size_t, int)> rec = [&](std::size_t start, int remaining) -> bool {
        bool covered = true;
        for (const auto& c : cliques) {
            bool hit = false;
            for (const std::string& v : c)
                if (std::find(cur.begin(), cur.end(), v) != cur.end()) {
                    hit = true;
                    break;
                }
            if (!hit) {
                covered = false;
                break;
            }
        }
        if (covered) {
            res.yes = true;
            res.witness = cur;
            return true;
        }
        if (remaining == 0) return false;
        for (std::size_t i = start; i < g.vertices().size(); ++i) {
            cur.push_back(g.vertices()[i]);
            if (rec(i + 1, remaining - 1)) return true;
            cur.pop_back();
        }
        return false;
    };
    (void)n;
    rec(0, r);
    return res;
}

void for_each_unit_flow_family(const Digraph& g, const std::string& source,
                               const std::string& sink, int theta,
                               const std::function<bool(const std::vector<Path>&)>& visit,
                               std::size_t search_limit) {
    for (const Arc& a : g.arcs())
        if (a.capacity != 1) throw ValidationError("unit-capacity oracle got arc " + a.id +
                                                   " with capacity " + rat_str(a.capacity));
    if (theta < 0) throw ValidationError("negative family size");
    auto paths = enumerate_st_paths(g, source, sink, search_limit);
    std::vector<std::set<int>> arcsets;
    for (const Path& p : paths) arcsets.emplace_back(p.arcs.begin(), p.arcs.end());
    std::vector<bool> used(g.arc_count(), false);
    std::vector<Path> family;
    std::size_t visited_nodes = 0;
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (stop) return;
        if (++visited_nodes > search_limit)
            throw ResourceLimitError("flow-family search exceeded limit");
        if (static_cast<int>(family.size()) == theta) {
            if (!visit(family)) stop = true;
            return;
        }
        int needed = theta - static_cast<int>(family.size());
        if (static_cast<int>(paths.size() - start) < needed) return;
        for (std::size_t i = start; i < paths.size() && !stop; ++i) {
            bool free = true;
            for (int a : arcsets[i])
                if (used[a]) {
                    free = false;
                    break;
                }
            if (!free) continue;
            for (int a : arcsets[i]) used[a] = true;
            family.push_back(paths[i]);
            rec(i + 1);
            family.pop_back();
            for (int a : arcsets[i]) used[a] = false;
        }
    };
    rec(0);
}

}  // namespace mrf
