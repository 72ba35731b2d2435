#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "mrf/instances.hpp"
#include "mrf/rational.hpp"

namespace mrf {

// Enumeration guards. Counts refer to concrete paths/scenarios even when a
// solver works on a symmetry-reduced formulation internally.
struct Limits {
    std::size_t paths = 500'000;
    std::size_t scenarios = 500'000;
    std::size_t search_nodes = 20'000'000;
};

struct MrfSolution {
    Rat value;  // robust value: total flow minus worst-case loss
    PathFlow flow;
    Rat worst_loss;
    Scenario worst_scenario;
};

struct RniSolution {
    Rat value;
    std::map<std::string, Rat> y;  // arc id -> interdiction dual
    std::map<Scenario, Rat> z;     // distribution over scenarios
};

struct Decision {
    bool yes = false;
    PathFlow witness;  // populated on YES
};

// Exact optimum of the robust-flow LP over all s-t paths and all scenarios of
// size exactly k. Parallel arcs with identical endpoints/capacity are solved
// as one orbit (a symmetric optimum always exists), so gadget-sized instances
// with wide bundles stay tractable; the returned flow spreads each orbit
// uniformly over its member arcs.
MrfSolution solve_mrf(const MrfInstance& inst, const Limits& limits = {});

// Exact optimum of the interdiction dual: min sum u_a y_a subject to
// y(P) + z(scenarios meeting P) >= 1 per path, z a distribution. Solved as its
// own LP so the duality check against solve_mrf is a genuine cross-check.
RniSolution solve_rni(const MrfInstance& inst, const Limits& limits = {});

bool decide_mrf_star(const MrfInstance& inst, const Rat& L, const Limits& limits = {},
                     PathFlow* witness = nullptr);
bool decide_rni_star(const MrfInstance& inst, const Rat& L, const Limits& limits = {});

// k=1 special case via the polynomial arc-flow LP (no path enumeration).
Rat solve_mrf_k1(const MrfInstance& inst);

// Scenario maximizing loss(flow, S); ties broken by scenario enumeration
// order. With compat, scenarios are cliques of size <= k; without, subsets of
// non-immune arcs per mode.
std::pair<Scenario, Rat> best_response(const Digraph& g, const PathFlow& flow, int k,
                                       const CompatGraph* compat, ScenarioMode mode,
                                       const Limits& limits = {});

// Feasibility of: flow of value theta, unit capacities, loss <= k-1 on every
// clique scenario of size <= k.
Decision decide_mrf_r_star(const MrfRInstance& inst, const Limits& limits = {});

// Feasibility of: multicommodity flow meeting all demands with
// loss <= k*M - 1 on every scenario of size <= k (M = max capacity).
Decision decide_mrf_m_star(const MrfMInstance& inst, const Limits& limits = {});

// Integral variant: backtracking over families of theta arc-disjoint unit
// paths, each family checked against every clique scenario.
Decision decide_integral_mrf_r_star(const MrfRInstance& inst, const Limits& limits = {});

// Exact optimum over integer path-flow vectors by bounded enumeration.
MrfSolution solve_integral_mrf(const MrfInstance& inst, const Limits& limits = {});

// A feasible multicommodity flow (demands met exactly, capacities respected,
// no scenario constraints), chosen by optimizing a deterministic pseudo-random
// objective derived from `objective_seed`. Throws if infeasible. Used to probe
// whether part of the flow is forced (different seeds, same values there).
PathFlow multicommodity_flow(const MrfMInstance& inst, std::uint64_t objective_seed,
                             const Limits& limits = {});

Rat max_flow(const Digraph& g, const std::string& source, const std::string& sink);
// Arc indices of a minimum cut (arcs leaving the residual-reachable set).
std::vector<int> min_cut(const Digraph& g, const std::string& source, const std::string& sink);

}  // namespace mrf
