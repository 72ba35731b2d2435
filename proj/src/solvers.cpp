#include "mrf/solvers.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <sstream>

#include "mrf/lp.hpp"

namespace mrf {

namespace {

std::vector<int> nonimmune_arcs(const Digraph& g) {
    std::vector<int> out;
    for (int i = 0; i < g.arc_count(); ++i)
        if (!g.arc(i).immune) out.push_back(i);
    return out;
}

// Number of scenarios of the given mode, saturating at cap.
std::size_t scenario_count(std::size_t n, int k, ScenarioMode mode, std::size_t cap) {
    std::size_t total = mode == ScenarioMode::at_most_k ? 1 : 0;  // empty set
    for (int size = 1; size <= k; ++size) {
        if (mode == ScenarioMode::exactly_k && size != k) continue;
        // C(n, size), saturating
        std::size_t c = 1;
        for (int i = 0; i < size; ++i) {
            if (n < static_cast<std::size_t>(size)) {
                c = 0;
                break;
            }
            c = c * (n - i) / (i + 1);
            if (c > cap) return cap + 1;
        }
        total += c;
        if (total > cap) return cap + 1;
    }
    return total;
}

// ---------- max flow ----------

struct FlowState {
    std::vector<Rat> flow;  // per arc
};

bool augment(const Digraph& g, int s, int t, FlowState& st, Rat& pushed) {
    // BFS over residual arcs; predecessor = (arc index, forward?)
    std::vector<std::pair<int, bool>> pred(g.nodes().size(), {-1, true});
    std::vector<bool> seen(g.nodes().size(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty() && !seen[t]) {
        int v = queue.front();
        queue.pop_front();
        for (int ai : g.out_arcs(v)) {
            int w = g.node_index(g.arc(ai).head);
            if (!seen[w] && st.flow[ai] < g.arc(ai).capacity) {
                seen[w] = true;
                pred[w] = {ai, true};
                queue.push_back(w);
            }
        }
        for (int ai : g.in_arcs(v)) {
            int w = g.node_index(g.arc(ai).tail);
            if (!seen[w] && sgn(st.flow[ai]) > 0) {
                seen[w] = true;
                pred[w] = {ai, false};
                queue.push_back(w);
            }
        }
    }
    if (!seen[t]) return false;
    Rat bottleneck;
    bool first = true;
    for (int v = t; v != s;) {
        auto [ai, fwd] = pred[v];
        Rat avail = fwd ? g.arc(ai).capacity - st.flow[ai] : st.flow[ai];
        if (first || avail < bottleneck) bottleneck = avail;
        first = false;
        v = g.node_index(fwd ? g.arc(ai).tail : g.arc(ai).head);
    }
    for (int v = t; v != s;) {
        auto [ai, fwd] = pred[v];
        st.flow[ai] += fwd ? bottleneck : -bottleneck;
        v = g.node_index(fwd ? g.arc(ai).tail : g.arc(ai).head);
    }
    pushed = bottleneck;
    return true;
}

FlowState run_max_flow(const Digraph& g, const std::string& source, const std::string& sink,
                       Rat& value) {
    int s = g.node_index(source), t = g.node_index(sink);
    if (s == t) throw ValidationError("source equals sink");
    FlowState st;
    st.flow.assign(g.arc_count(), Rat(0));
    value = 0;
    Rat pushed;
    while (augment(g, s, t, st, pushed)) value += pushed;
    return st;
}

// ---------- symmetry orbits for solve_mrf ----------

struct Orbit {
    std::string tail, head;
    Rat cap;
    bool immune;
    std::vector<int> members;  // arc indices in id order
};

std::vector<Orbit> build_orbits(const Digraph& g) {
    std::vector<Orbit> orbits;
    std::map<std::tuple<std::string, std::string, std::string, bool>, int> index;
    for (int i = 0; i < g.arc_count(); ++i) {
        const Arc& a = g.arc(i);
        auto key = std::make_tuple(a.tail, a.head, rat_str(a.capacity), a.immune);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, static_cast<int>(orbits.size()));
            orbits.push_back(Orbit{a.tail, a.head, a.capacity, a.immune, {i}});
        } else {
            orbits[it->second].members.push_back(i);
        }
    }
    return orbits;
}

// A path in the orbit multigraph (orbit indices in traversal order).
using OrbitPath = std::vector<int>;

std::vector<OrbitPath> enumerate_orbit_paths(const Digraph& g, const std::vector<Orbit>& orbits,
                                             const std::string& source, const std::string& sink,
                                             std::size_t concrete_limit) {
    std::map<std::string, std::vector<int>> out;  // node -> orbit indices
    for (std::size_t o = 0; o < orbits.size(); ++o) out[orbits[o].tail].push_back(static_cast<int>(o));
    std::vector<OrbitPath> result;
    std::size_t concrete_total = 0;
    std::set<std::string> visited;
    OrbitPath stack;
    std::function<void(const std::string&, std::size_t)> dfs = [&](const std::string& v,
                                                                   std::size_t orbit_product) {
        if (v == sink) {
            concrete_total += orbit_product;
            if (concrete_total > concrete_limit)
                throw ResourceLimitError("path enumeration exceeds limit of " +
                                         std::to_string(concrete_limit));
            result.push_back(stack);
            return;
        }
        visited.insert(v);
        auto it = out.find(v);
        if (it != out.end()) {
            for (int o : it->second) {
                if (visited.count(orbits[o].head)) continue;
                stack.push_back(o);
                dfs(orbits[o].head, orbit_product * orbits[o].members.size());
                stack.pop_back();
            }
        }
        visited.erase(v);
    };
    if (source != sink) dfs(source, 1);
    (void)g;
    return result;
}

// interdiction profile: (orbit index, arcs removed from it), removed >= 1
using Profile = std::vector<std::pair<int, int>>;

void enumerate_profiles(const std::vector<Orbit>& orbits, int k, bool exactly,
                        std::vector<Profile>& out) {
    Profile cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t o, int remaining) {
        if (remaining == 0 || (!exactly && !cur.empty())) {
            if (remaining == 0 || !exactly) out.push_back(cur);
            if (remaining == 0) return;
        }
        if (o >= orbits.size()) return;
        rec(o + 1, remaining);
        if (orbits[o].immune) return;
        int cap = std::min(remaining, static_cast<int>(orbits[o].members.size()));
        for (int c = 1; c <= cap; ++c) {
            cur.emplace_back(static_cast<int>(o), c);
            rec(o + 1, remaining - c);
            cur.pop_back();
        }
    };
    rec(0, k);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

// Fraction of the uniform orbit spread of path Q lost under the profile:
// 1 - prod over orbits o in Q of (1 - removed_o / |o|).
Rat profile_hit_fraction(const OrbitPath& q, const Profile& profile,
                         const std::vector<Orbit>& orbits) {
    Rat survive = 1;
    for (const auto& [o, c] : profile) {
        if (std::find(q.begin(), q.end(), o) == q.end()) continue;
        survive *= rat(static_cast<long>(orbits[o].members.size()) - c,
                       static_cast<long>(orbits[o].members.size()));
    }
    return 1 - survive;
}

Scenario instantiate_profile(const Profile& profile, const std::vector<Orbit>& orbits) {
    Scenario s;
    for (const auto& [o, c] : profile)
        for (int i = 0; i < c; ++i) s.push_back(orbits[o].members[i]);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

Rat max_flow(const Digraph& g, const std::string& source, const std::string& sink) {
    Rat value;
    run_max_flow(g, source, sink, value);
    return value;
}

std::vector<int> min_cut(const Digraph& g, const std::string& source, const std::string& sink) {
    Rat value;
    FlowState st = run_max_flow(g, source, sink, value);
    // residual-reachable set from the source
    std::vector<bool> seen(g.nodes().size(), false);
    std::deque<int> queue{g.node_index(source)};
    seen[g.node_index(source)] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int ai : g.out_arcs(v)) {
            int w = g.node_index(g.arc(ai).head);
            if (!seen[w] && st.flow[ai] < g.arc(ai).capacity) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
        for (int ai : g.in_arcs(v)) {
            int w = g.node_index(g.arc(ai).tail);
            if (!seen[w] && sgn(st.flow[ai]) > 0) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    std::vector<int> cut;
    for (int ai = 0; ai < g.arc_count(); ++ai)
        if (seen[g.node_index(g.arc(ai).tail)] && !seen[g.node_index(g.arc(ai).head)])
            cut.push_back(ai);
    return cut;
}

MrfSolution solve_mrf(const MrfInstance& inst, const Limits& limits) {
    inst.validate();
    const Digraph& g = inst.graph;
    auto eligible = nonimmune_arcs(g);
    auto orbits = build_orbits(g);
    auto qpaths = enumerate_orbit_paths(g, orbits, inst.source, inst.sink, limits.paths);

    MrfSolution sol;
    sol.value = 0;
    sol.worst_loss = 0;
    if (qpaths.empty()) {
        if (inst.k <= static_cast<int>(eligible.size()))
            sol.worst_scenario.assign(eligible.begin(), eligible.begin() + inst.k);
        return sol;
    }
    if (inst.k > static_cast<int>(eligible.size()))
        throw ValidationError("budget " + std::to_string(inst.k) + " exceeds the " +
                              std::to_string(eligible.size()) + " non-immune arcs");
    if (scenario_count(eligible.size(), inst.k, ScenarioMode::exactly_k, limits.scenarios) >
        limits.scenarios)
        throw ResourceLimitError("scenario enumeration exceeds limit of " +
                                 std::to_string(limits.scenarios));

    std::vector<Profile> profiles;
    enumerate_profiles(orbits, inst.k, /*exactly=*/true, profiles);

    LinearProgram lp;
    lp.sense = Sense::maximize;
    for (std::size_t i = 0; i < qpaths.size(); ++i) {
        lp.add_variable("q" + std::to_string(i));
        lp.objective["q" + std::to_string(i)] = rat(1);
    }
    lp.add_variable("lam");
    lp.objective["lam"] = rat(-1);
    for (std::size_t o = 0; o < orbits.size(); ++o) {
        std::map<std::string, Rat> row;
        for (std::size_t i = 0; i < qpaths.size(); ++i)
            if (std::find(qpaths[i].begin(), qpaths[i].end(), static_cast<int>(o)) !=
                qpaths[i].end())
                row["q" + std::to_string(i)] = rat(1);
        if (row.empty()) continue;
        lp.add_constraint("cap" + std::to_string(o), std::move(row), Rel::le,
                          Rat(static_cast<long>(orbits[o].members.size())) * orbits[o].cap);
    }

    int added = 0;
    const Profile* worst_profile = nullptr;
    LpSolution lpsol;
    while (true) {
        lpsol = solve_lp(lp);
        if (lpsol.status != LpStatus::optimal)
            throw ValidationError("robust-flow LP unexpectedly not optimal");
        // most-violated interdiction profile against the current candidate
        std::vector<std::pair<std::size_t, Rat>> support;
        for (std::size_t i = 0; i < qpaths.size(); ++i) {
            const Rat& v = lpsol.primal.at("q" + std::to_string(i));
            if (sgn(v) > 0) support.emplace_back(i, v);
        }
        Rat worst = 0;
        worst_profile = nullptr;
        for (const Profile& p : profiles) {
            Rat l = 0;
            for (const auto& [qi, v] : support) l += v * profile_hit_fraction(qpaths[qi], p, orbits);
            if (worst_profile == nullptr || l > worst) {
                worst = l;
                worst_profile = &p;
            }
        }
        if (worst <= lpsol.primal.at("lam")) {
            sol.worst_loss = worst;
            break;
        }
        std::map<std::string, Rat> row;
        for (std::size_t i = 0; i < qpaths.size(); ++i) {
            Rat c = profile_hit_fraction(qpaths[i], *worst_profile, orbits);
            if (sgn(c) != 0) row["q" + std::to_string(i)] = c;
        }
        row["lam"] = rat(-1);
        lp.add_constraint("scen" + std::to_string(added++), std::move(row), Rel::le, rat(0));
    }

    sol.value = lpsol.value;
    if (worst_profile) sol.worst_scenario = instantiate_profile(*worst_profile, orbits);
    // spread each orbit path uniformly over its concrete members
    for (std::size_t i = 0; i < qpaths.size(); ++i) {
        const Rat& v = lpsol.primal.at("q" + std::to_string(i));
        if (sgn(v) <= 0) continue;
        std::size_t orbit_size = 1;
        for (int o : qpaths[i]) orbit_size *= orbits[o].members.size();
        Rat share = v / Rat(static_cast<long>(orbit_size));
        std::vector<int> concrete;
        std::function<void(std::size_t)> emit = [&](std::size_t depth) {
            if (depth == qpaths[i].size()) {
                sol.flow.add(Path{concrete, ""}, share);
                return;
            }
            for (int a : orbits[qpaths[i][depth]].members) {
                concrete.push_back(a);
                emit(depth + 1);
                concrete.pop_back();
            }
        };
        emit(0);
    }
    return sol;
}

RniSolution solve_rni(const MrfInstance& inst, const Limits& limits) {
    inst.validate();
    const Digraph& g = inst.graph;
    auto paths = enumerate_st_paths(g, inst.source, inst.sink, limits.paths);
    auto scenarios =
        enumerate_scenarios(g, inst.k, ScenarioMode::exactly_k, nullptr, limits.scenarios);

    LinearProgram lp;
    lp.sense = Sense::minimize;
    for (const Arc& a : g.arcs()) {
        lp.add_variable("y_" + a.id);
        lp.objective["y_" + a.id] = a.capacity;
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i) lp.add_variable("z" + std::to_string(i));
    std::map<std::string, Rat> dist;
    for (std::size_t i = 0; i < scenarios.size(); ++i) dist["z" + std::to_string(i)] = rat(1);
    lp.add_constraint("dist", std::move(dist), Rel::eq, rat(1));
    for (std::size_t p = 0; p < paths.size(); ++p) {
        std::map<std::string, Rat> row;
        for (int a : paths[p].arcs) row["y_" + g.arc(a).id] = rat(1);
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            for (int a : scenarios[i])
                if (std::find(paths[p].arcs.begin(), paths[p].arcs.end(), a) !=
                    paths[p].arcs.end()) {
                    row["z" + std::to_string(i)] = rat(1);
                    break;
                }
        }
        lp.add_constraint("path" + std::to_string(p), std::move(row), Rel::ge, rat(1));
    }
    auto lpsol = solve_lp(lp);
    if (lpsol.status != LpStatus::optimal)
        throw ValidationError("interdiction LP unexpectedly not optimal");
    RniSolution sol;
    sol.value = lpsol.value;
    for (const Arc& a : g.arcs()) {
        const Rat& v = lpsol.primal.at("y_" + a.id);
        if (sgn(v) != 0) sol.y[a.id] = v;
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Rat& v = lpsol.primal.at("z" + std::to_string(i));
        if (sgn(v) != 0) sol.z[scenarios[i]] = v;
    }
    return sol;
}

bool decide_mrf_star(const MrfInstance& inst, const Rat& L, const Limits& limits,
                     PathFlow* witness) {
    MrfSolution sol = solve_mrf(inst, limits);
    if (witness) *witness = sol.flow;
    return sol.value >= L;
}

bool decide_rni_star(const MrfInstance& inst, const Rat& L, const Limits& limits) {
    return !decide_mrf_star(inst, L, limits);
}

Rat solve_mrf_k1(const MrfInstance& inst) {
    inst.validate();
    if (inst.k != 1) throw ValidationError("arc-flow special case requires k = 1");
    const Digraph& g = inst.graph;
    LinearProgram lp;
    lp.sense = Sense::maximize;
    for (const Arc& a : g.arcs()) lp.add_variable("f_" + a.id, rat(0), a.capacity);
    lp.add_variable("lam");
    lp.objective["lam"] = rat(-1);
    for (int ai : g.out_arcs(inst.source)) lp.objective["f_" + g.arc(ai).id] += rat(1);
    for (int ai : g.in_arcs(inst.source)) lp.objective["f_" + g.arc(ai).id] += rat(-1);
    for (const std::string& node : g.nodes()) {
        if (node == inst.source || node == inst.sink) continue;
        std::map<std::string, Rat> row;
        for (int ai : g.in_arcs(node)) row["f_" + g.arc(ai).id] += rat(1);
        for (int ai : g.out_arcs(node)) row["f_" + g.arc(ai).id] += rat(-1);
        if (!row.empty()) lp.add_constraint("cons_" + node, std::move(row), Rel::eq, rat(0));
    }
    for (const Arc& a : g.arcs()) {
        if (a.immune) continue;
        lp.add_constraint("hit_" + a.id, {{"f_" + a.id, rat(1)}, {"lam", rat(-1)}}, Rel::le,
                          rat(0));
    }
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw ValidationError("arc-flow LP unexpectedly not optimal");
    return sol.value;
}

namespace {

struct LossOracle {
    std::map<int, Rat> singles;
    std::map<std::pair<int, int>, Rat> joint;
    const PathFlow* flow;

    explicit LossOracle(const PathFlow& f) : flow(&f) {
        singles = arc_flows(f);
        for (const auto& [p, v] : f.entries) {
            for (std::size_t i = 0; i < p.arcs.size(); ++i)
                for (std::size_t j = i + 1; j < p.arcs.size(); ++j) {
                    int a = p.arcs[i], b = p.arcs[j];
                    joint[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] += v;
                }
        }
    }

    Rat eval(const Scenario& s) const {
        if (s.empty()) return 0;
        if (s.size() == 1) {
            auto it = singles.find(s[0]);
            return it == singles.end() ? Rat(0) : it->second;
        }
        if (s.size() == 2) {
            Rat l = 0;
            auto i0 = singles.find(s[0]);
            auto i1 = singles.find(s[1]);
            if (i0 != singles.end()) l += i0->second;
            if (i1 != singles.end()) l += i1->second;
            auto j = joint.find({s[0], s[1]});
            if (j != joint.end()) l -= j->second;
            return l;
        }
        return loss(*flow, s);
    }
};

}  // namespace

std::pair<Scenario, Rat> best_response(const Digraph& g, const PathFlow& flow, int k,
                                       const CompatGraph* compat, ScenarioMode mode,
                                       const Limits& limits) {
    LossOracle oracle(flow);
    Scenario best;
    Rat best_loss = -1;
    auto consider = [&](const Scenario& s) {
        Rat l = oracle.eval(s);
        if (best_loss < 0 || l > best_loss) {
            best_loss = l;
            best = s;
        }
    };
    if (compat || k > 2) {
        auto scenarios = enumerate_scenarios(g, k, mode, compat, limits.scenarios);
        if (scenarios.empty()) throw ValidationError("no scenarios to choose from");
        for (const Scenario& s : scenarios) consider(s);
        return {best, best_loss};
    }
    // k <= 2, unrestricted: walk the same prefix order without materializing
    auto eligible = nonimmune_arcs(g);
    if (scenario_count(eligible.size(), k, mode, limits.scenarios) > limits.scenarios)
        throw ResourceLimitError("scenario enumeration exceeds limit of " +
                                 std::to_string(limits.scenarios));
    if (mode == ScenarioMode::exactly_k && k > static_cast<int>(eligible.size()))
        throw ValidationError("cannot pick exactly " + std::to_string(k) + " of " +
                              std::to_string(eligible.size()) + " non-immune arcs");
    if (mode == ScenarioMode::at_most_k) consider({});
    for (std::size_t i = 0; i < eligible.size(); ++i) {
        if (mode == ScenarioMode::at_most_k || k == 1) consider({eligible[i]});
        if (k == 2)
            for (std::size_t j = i + 1; j < eligible.size(); ++j)
                consider({eligible[i], eligible[j]});
    }
    if (best_loss < 0) throw ValidationError("no scenarios to choose from");
    return {best, best_loss};
}

namespace {

// Shared skeleton of the two feasibility deciders: a path LP plus lazily added
// loss constraints for the scenarios violated by the current candidate.
class LazyFeasibility {
public:
    LinearProgram lp;
    std::vector<Path> columns;  // column i <-> variable x{i}

    void add_column(const Path& p) {
        std::string id = "x" + std::to_string(columns.size());
        columns.push_back(p);
        lp.add_variable(id);
    }

    // Solve repeatedly, asking `attack` for the worst scenario of the current
    // candidate; stops when no scenario exceeds the bound.
    Decision run(const std::function<std::pair<Scenario, Rat>(const PathFlow&)>& attack,
                 const Rat& bound) {
        lp.sense = Sense::minimize;
        int added = 0;
        while (true) {
            auto sol = solve_lp(lp);
            if (sol.status == LpStatus::infeasible) return {};
            if (sol.status != LpStatus::optimal)
                throw ValidationError("feasibility LP unexpectedly unbounded");
            PathFlow cand;
            for (std::size_t i = 0; i < columns.size(); ++i) {
                const Rat& v = sol.primal.at("x" + std::to_string(i));
                if (sgn(v) > 0) cand.add(columns[i], v);
            }
            auto [scen, worst] = attack(cand);
            if (worst <= bound) return {true, std::move(cand)};
            std::map<std::string, Rat> row;
            for (std::size_t i = 0; i < columns.size(); ++i) {
                bool hit = false;
                for (int a : scen)
                    if (std::find(columns[i].arcs.begin(), columns[i].arcs.end(), a) !=
                        columns[i].arcs.end()) {
                        hit = true;
                        break;
                    }
                if (hit) row["x" + std::to_string(i)] = rat(1);
            }
            lp.add_constraint("scen" + std::to_string(added++), std::move(row), Rel::le, bound);
        }
    }
};

}  // namespace

Decision decide_mrf_r_star(const MrfRInstance& inst, const Limits& limits) {
    inst.validate();
    if (sgn(inst.demand) == 0) return {true, {}};
    auto paths = enumerate_st_paths(inst.graph, inst.source, inst.sink, limits.paths);
    if (paths.empty()) return {};

    LazyFeasibility feas;
    for (const Path& p : paths) feas.add_column(p);
    std::map<std::string, Rat> demand_row;
    std::vector<std::map<std::string, Rat>> cap_rows(inst.graph.arc_count());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::string id = "x" + std::to_string(i);
        demand_row[id] = rat(1);
        for (int a : paths[i].arcs) cap_rows[a][id] = rat(1);
    }
    feas.lp.add_constraint("demand", std::move(demand_row), Rel::eq, inst.demand);
    for (int a = 0; a < inst.graph.arc_count(); ++a)
        if (!cap_rows[a].empty())
            feas.lp.add_constraint("cap_" + inst.graph.arc(a).id, std::move(cap_rows[a]), Rel::le,
                                   rat(1));
    return feas.run(
        [&](const PathFlow& cand) {
            return best_response(inst.graph, cand, inst.k, &inst.compat, ScenarioMode::at_most_k,
                                 limits);
        },
        Rat(inst.k - 1));
}

Decision decide_mrf_m_star(const MrfMInstance& inst, const Limits& limits) {
    inst.validate();
    Rat M = inst.max_capacity();
    Rat bound = Rat(inst.k) * M - 1;

    LazyFeasibility feas;
    std::map<std::string, std::vector<std::string>> commodity_vars;
    std::size_t remaining = limits.paths;
    for (const Commodity& c : inst.commodities) {
        auto paths = enumerate_st_paths(inst.graph, c.source, c.sink, remaining);
        remaining -= paths.size();
        for (Path& p : paths) {
            p.commodity = c.id;
            commodity_vars[c.id].push_back("x" + std::to_string(feas.columns.size()));
            feas.add_column(p);
        }
        if (paths.empty()) return {};  // demand > 0 but no route
    }
    for (const Commodity& c : inst.commodities) {
        std::map<std::string, Rat> row;
        for (const std::string& id : commodity_vars[c.id]) row[id] = rat(1);
        feas.lp.add_constraint("demand_" + c.id, std::move(row), Rel::eq, c.demand);
    }
    std::vector<std::map<std::string, Rat>> cap_rows(inst.graph.arc_count());
    for (std::size_t i = 0; i < feas.columns.size(); ++i)
        for (int a : feas.columns[i].arcs) cap_rows[a]["x" + std::to_string(i)] = rat(1);
    for (int a = 0; a < inst.graph.arc_count(); ++a)
        if (!cap_rows[a].empty())
            feas.lp.add_constraint("cap_" + inst.graph.arc(a).id, std::move(cap_rows[a]), Rel::le,
                                   inst.graph.arc(a).capacity);
    return feas.run(
        [&](const PathFlow& cand) {
            return best_response(inst.graph, cand, inst.k, nullptr, ScenarioMode::at_most_k,
                                 limits);
        },
        bound);
}

Decision decide_integral_mrf_r_star(const MrfRInstance& inst, const Limits& limits) {
    inst.validate();
    if (inst.demand.get_den() != 1)
        throw ValidationError("integral variant needs integer demand, got " +
                              rat_str(inst.demand));
    long theta = inst.demand.get_num().get_si();
    if (theta == 0) return {true, {}};
    auto paths = enumerate_st_paths(inst.graph, inst.source, inst.sink, limits.paths);
    auto cliques =
        enumerate_scenarios(inst.graph, inst.k, ScenarioMode::at_most_k, &inst.compat,
                            limits.scenarios);
    std::vector<std::set<int>> arcsets;
    for (const Path& p : paths) arcsets.emplace_back(p.arcs.begin(), p.arcs.end());

    // source arcs give a cheap remaining-capacity bound
    std::vector<bool> used(inst.graph.arc_count(), false);
    std::vector<int> clique_hits(cliques.size(), 0);
    std::vector<std::vector<int>> path_cliques(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (std::size_t c = 0; c < cliques.size(); ++c)
            for (int a : cliques[c])
                if (arcsets[p].count(a)) {
                    path_cliques[p].push_back(static_cast<int>(c));
                    break;
                }

    int free_source = static_cast<int>(inst.graph.out_arcs(inst.source).size());
    std::vector<Path> family;
    std::size_t nodes = 0;
    bool found = false;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (found) return;
        if (++nodes > limits.search_nodes)
            throw ResourceLimitError("integral search exceeded node limit");
        if (static_cast<long>(family.size()) == theta) {
            found = true;
            return;
        }
        long needed = theta - static_cast<long>(family.size());
        if (free_source < needed || static_cast<long>(paths.size() - start) < needed) return;
        for (std::size_t i = start; i < paths.size() && !found; ++i) {
            bool free = true;
            for (int a : arcsets[i])
                if (used[a]) {
                    free = false;
                    break;
                }
            if (!free) continue;
            bool safe = true;
            for (int c : path_cliques[i])
                if (clique_hits[c] + 1 > inst.k - 1) {
                    safe = false;
                    break;
                }
            if (!safe) continue;
            for (int a : arcsets[i]) used[a] = true;
            for (int c : path_cliques[i]) ++clique_hits[c];
            --free_source;
            family.push_back(paths[i]);
            rec(i + 1);
            if (!found) family.pop_back();
            ++free_source;
            for (int c : path_cliques[i]) --clique_hits[c];
            for (int a : arcsets[i]) used[a] = false;
        }
    };
    rec(0);
    if (!found) return {};
    Decision d;
    d.yes = true;
    for (const Path& p : family) d.witness.add(p, rat(1));
    return d;
}

MrfSolution solve_integral_mrf(const MrfInstance& inst, const Limits& limits) {
    inst.validate();
    const Digraph& g = inst.graph;
    for (const Arc& a : g.arcs())
        if (a.capacity.get_den() != 1)
            throw ValidationError("integral solver needs integer capacities, got " +
                                  rat_str(a.capacity) + " on " + a.id);
    auto paths = enumerate_st_paths(g, inst.source, inst.sink, limits.paths);
    MrfSolution best;
    best.value = 0;
    best.worst_loss = 0;
    auto eligible = nonimmune_arcs(g);
    if (paths.empty()) {
        if (inst.k <= static_cast<int>(eligible.size()))
            best.worst_scenario.assign(eligible.begin(), eligible.begin() + inst.k);
        return best;
    }
    auto scenarios =
        enumerate_scenarios(g, inst.k, ScenarioMode::exactly_k, nullptr, limits.scenarios);

    std::vector<long> caps(g.arc_count());
    for (int a = 0; a < g.arc_count(); ++a) caps[a] = g.arc(a).capacity.get_num().get_si();
    std::vector<long> values(paths.size(), 0);
    std::size_t nodes = 0;
    bool has_best = false;

    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long total) {
        if (++nodes > limits.search_nodes)
            throw ResourceLimitError("integral search exceeded node limit");
        if (i == paths.size()) {
            // worst-case loss of this integer assignment
            Rat worst = -1;
            Scenario worst_scen;
            for (const Scenario& s : scenarios) {
                Rat l = 0;
                for (std::size_t p = 0; p < paths.size(); ++p) {
                    if (values[p] == 0) continue;
                    for (int a : s)
                        if (std::find(paths[p].arcs.begin(), paths[p].arcs.end(), a) !=
                            paths[p].arcs.end()) {
                            l += values[p];
                            break;
                        }
                }
                if (worst < 0 || l > worst) {
                    worst = l;
                    worst_scen = s;
                }
            }
            if (worst < 0) worst = 0;
            Rat robust = Rat(total) - worst;
            if (!has_best || robust > best.value) {
                has_best = true;
                best.value = robust;
                best.worst_loss = worst;
                best.worst_scenario = worst_scen;
                best.flow = {};
                for (std::size_t p = 0; p < paths.size(); ++p)
                    if (values[p] > 0) best.flow.add(paths[p], Rat(values[p]));
            }
            return;
        }
        long bottleneck = -1;
        for (int a : paths[i].arcs)
            if (bottleneck < 0 || caps[a] < bottleneck) bottleneck = caps[a];
        for (long v = bottleneck; v >= 0; --v) {
            for (int a : paths[i].arcs) caps[a] -= v;
            values[i] = v;
            rec(i + 1, total + v);
            for (int a : paths[i].arcs) caps[a] += v;
        }
        values[i] = 0;
    };
    rec(0, 0);
    return best;
}

PathFlow multicommodity_flow(const MrfMInstance& inst, std::uint64_t objective_seed,
                             const Limits& limits) {
    inst.validate();
    LinearProgram lp;
    lp.sense = Sense::maximize;
    std::vector<Path> columns;
    std::map<std::string, std::vector<std::string>> commodity_vars;
    std::size_t remaining = limits.paths;
    for (const Commodity& c : inst.commodities) {
        auto paths = enumerate_st_paths(inst.graph, c.source, c.sink, remaining);
        remaining -= paths.size();
        if (paths.empty())
            throw ValidationError("no route for commodity " + c.id);
        for (Path& p : paths) {
            p.commodity = c.id;
            std::string id = "x" + std::to_string(columns.size());
            commodity_vars[c.id].push_back(id);
            columns.push_back(p);
            lp.add_variable(id);
        }
    }
    std::mt19937_64 rng(objective_seed);
    for (std::size_t i = 0; i < columns.size(); ++i)
        lp.objective["x" + std::to_string(i)] = rat(static_cast<long>(rng() % 2001) - 1000);
    for (const Commodity& c : inst.commodities) {
        std::map<std::string, Rat> row;
        for (const std::string& id : commodity_vars[c.id]) row[id] = rat(1);
        lp.add_constraint("demand_" + c.id, std::move(row), Rel::eq, c.demand);
    }
    std::vector<std::map<std::string, Rat>> cap_rows(inst.graph.arc_count());
    for (std::size_t i = 0; i < columns.size(); ++i)
        for (int a : columns[i].arcs) cap_rows[a]["x" + std::to_string(i)] = rat(1);
    for (int a = 0; a < inst.graph.arc_count(); ++a)
        if (!cap_rows[a].empty())
            lp.add_constraint("cap_" + inst.graph.arc(a).id, std::move(cap_rows[a]), Rel::le,
                              inst.graph.arc(a).capacity);
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw ValidationError("multicommodity demands are not satisfiable");
    PathFlow flow;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const Rat& v = sol.primal.at("x" + std::to_string(i));
        if (sgn(v) > 0) flow.add(columns[i], v);
    }
    return flow;
}

}  // namespace mrf
