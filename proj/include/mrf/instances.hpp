#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mrf/errors.hpp"
#include "mrf/rational.hpp"

namespace mrf {

struct Arc {
    std::string id;
    std::string tail;
    std::string head;
    Rat capacity;
    bool immune = false;
};

// Digraph with parallel arcs (id-distinguished). After construction nodes and
// arcs are stored sorted by id; all enumeration orders derive from that, so
// every downstream computation is reproducible bit-for-bit.
class Digraph {
public:
    Digraph() = default;
    static Digraph build(std::vector<std::string> nodes, std::vector<Arc> arcs);

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Arc& arc(int i) const { return arcs_[i]; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }

    bool has_node(const std::string& id) const { return node_index_.count(id) > 0; }
    bool has_arc(const std::string& id) const { return arc_index_.count(id) > 0; }
    int node_index(const std::string& id) const;
    int arc_index(const std::string& id) const;

    // Outgoing/incoming arc indices per node index, each list sorted by arc id.
    const std::vector<int>& out_arcs(int node) const { return out_[node]; }
    const std::vector<int>& in_arcs(int node) const { return in_[node]; }
    const std::vector<int>& out_arcs(const std::string& node) const { return out_[node_index(node)]; }
    const std::vector<int>& in_arcs(const std::string& node) const { return in_[node_index(node)]; }

    bool is_dag() const;

private:
    std::vector<std::string> nodes_;
    std::vector<Arc> arcs_;
    std::map<std::string, int> node_index_;
    std::map<std::string, int> arc_index_;
    std::vector<std::vector<int>> out_, in_;
};

// Compatibility graph on arcs: unordered id pairs, stored normalized (a < b).
class CompatGraph {
public:
    CompatGraph() = default;
    explicit CompatGraph(const std::vector<std::pair<std::string, std::string>>& edges);
    CompatGraph(std::initializer_list<std::pair<std::string, std::string>> edges)
        : CompatGraph(std::vector<std::pair<std::string, std::string>>(edges)) {}

    void validate_against(const Digraph& g) const;
    const std::set<std::pair<std::string, std::string>>& edges() const { return edges_; }
    bool adjacent(const std::string& a, const std::string& b) const;
    int degree(const std::string& a) const;
    // Neighbors of a, sorted.
    std::vector<std::string> neighbors(const std::string& a) const;

private:
    std::set<std::pair<std::string, std::string>> edges_;
};

struct MrfInstance {
    Digraph graph;
    std::string source, sink;
    int k = 1;
    std::optional<Rat> threshold;  // L

    void validate() const;
};

struct MrfRInstance {
    Digraph graph;  // DAG, unit capacities
    std::string source, sink;
    int k = 1;
    CompatGraph compat;
    Rat demand;  // θ
    bool integral = false;
    // Ids of the k-1 parallel source->sink arcs introduced by budget
    // normalization (pairwise compatible, ordered last). Empty if none known.
    std::vector<std::string> clique_arcs;

    void validate() const;
};

struct Commodity {
    std::string id;
    std::string source, sink;
    Rat demand;
};

struct MrfMInstance {
    Digraph graph;
    int k = 1;
    std::vector<Commodity> commodities;  // sorted by id on validate
    std::string i0;

    void validate() const;
    const Commodity& commodity(const std::string& id) const;
    // max arc capacity M
    Rat max_capacity() const;
};

// A path is an arc-index sequence into a fixed Digraph, optionally tagged with
// a commodity id. Paths are compared lexicographically (commodity, then arcs),
// which is the deterministic order used everywhere.
struct Path {
    std::vector<int> arcs;
    std::string commodity;  // empty = single-commodity

    auto operator<=>(const Path&) const = default;
};

struct PathFlow {
    std::map<Path, Rat> entries;  // values > 0; zero entries are dropped

    void add(const Path& p, const Rat& v);
    Rat total() const;
    bool empty() const { return entries.empty(); }
};

using Scenario = std::vector<int>;  // sorted arc indices

enum class ScenarioMode { exactly_k, at_most_k };

// --- operations ---

// All simple source->sink paths, lexicographic by arc id sequence.
// Throws ResourceLimitError if more than `limit` paths exist.
std::vector<Path> enumerate_st_paths(const Digraph& g, const std::string& source,
                                     const std::string& sink,
                                     std::size_t limit = 2'000'000);

// Without compat: subsets of non-immune arcs of size == k (exactly_k) or <= k
// (at_most_k, including the empty set). With compat: subsets of size <= k that
// are cliques in H (mode must be at_most_k semantics per the robust variant).
std::vector<Scenario> enumerate_scenarios(const Digraph& g, int k, ScenarioMode mode,
                                          const CompatGraph* compat = nullptr,
                                          std::size_t limit = 2'000'000);

Rat loss(const PathFlow& flow, const Scenario& s);
Rat arc_flow(const PathFlow& flow, int arc);
std::map<int, Rat> arc_flows(const PathFlow& flow);

// Checks that every path is a simple source->sink walk in g and per-arc
// aggregates respect capacities. Throws ValidationError with the offending
// element; demand checks are the caller's (variant-specific) job.
void validate_paths(const Digraph& g, const std::string& source, const std::string& sink,
                    const PathFlow& flow);
bool is_feasible(const PathFlow& flow, const MrfInstance& inst, std::string* why = nullptr);
bool is_feasible(const PathFlow& flow, const MrfRInstance& inst, std::string* why = nullptr);
// For MRF-M: paths carry commodity ids; per-commodity demand must be met exactly.
bool is_feasible(const PathFlow& flow, const MrfMInstance& inst, std::string* why = nullptr);

// Total order over arcs of a DAG, returned as arc indices from smallest to
// largest. Arcs are keyed by (topological index of tail, arc id); arcs listed
// in `forced_last` are moved to the end (in the given order). a > a' implies
// there is no path from head(a) to tail(a'), i.e. arcs only increase along any
// path; forced_last arcs must be source->sink arcs for this to hold.
std::vector<int> topological_arc_order(const Digraph& g,
                                       const std::vector<std::string>& forced_last = {});

// Helpers shared by solvers/reductions.
std::vector<std::string> path_arc_ids(const Digraph& g, const Path& p);
Path path_from_ids(const Digraph& g, const std::vector<std::string>& ids,
                   const std::string& commodity = "");

}  // namespace mrf
