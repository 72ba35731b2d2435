#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mrf/instances.hpp"
#include "mrf/oracles.hpp"
#include "mrf/solvers.hpp"

namespace mrf {

// Role tags for every constructed element, keyed by id.
struct Provenance {
    std::map<std::string, std::string> nodes;
    std::map<std::string, std::string> arcs;
    std::map<std::string, std::string> commodities;
};

// ---- fractional coloring -> MRF-R ----

struct ColoringMrfrArtifact {
    UndirectedGraph input;
    int ell = 0;
    // e_1..e_m in construction order, each (v, w) with v < w
    std::vector<std::pair<std::string, std::string>> edge_order;
    // per edge: the designated arcs (a_iv, a_iw)
    std::vector<std::pair<std::string, std::string>> designated;
    MrfRInstance instance;
    Provenance provenance;
};

ColoringMrfrArtifact reduce_coloring_to_mrfr(const UndirectedGraph& g, int ell);

// Backward witness map: a YES flow induces a coloring of total weight <= ell.
// Re-validates the flow (value ell, clique losses <= 1) and the coloring.
FractionalColoring coloring_from_flow(const ColoringMrfrArtifact& art, const PathFlow& flow,
                                      const Limits& limits = {});

// Forward witness map: a coloring certifying chi_f <= ell yields a YES flow.
PathFlow flow_from_coloring(const ColoringMrfrArtifact& art, const FractionalColoring& y);

// ---- budget/source normalization ----

struct MrfrNormalizeArtifact {
    MrfRInstance input;
    MrfRInstance instance;
    Provenance provenance;
    bool already_normalized = false;
};

// Ensures |out(source)| = theta and k-1 pairwise-compatible parallel
// source->sink arcs placed last in the arc order; theta grows by k-1 when the
// clique arcs are added. Identity on already-normalized instances.
MrfrNormalizeArtifact normalize_mrfr(const MrfRInstance& inst);

// ---- MRF-R -> MRF-M ----

struct IncompatPair {
    std::string first;   // larger in the arc order
    std::string second;  // smaller
};

struct MrfmArtifact {
    MrfRInstance input;
    MrfMInstance instance;
    Provenance provenance;
    Rat M;
    std::vector<IncompatPair> f_pairs;   // pair j <-> commodity f_ids[j]
    std::vector<std::string> f_ids;
    std::vector<std::string> arc_order;  // input arc ids, smallest to largest
    std::vector<std::string> clique_arcs;
};

MrfmArtifact reduce_mrfr_to_mrfm(const MrfRInstance& inst);

// The unique flow of the incompatibility commodities: 2 units through every
// subdivided arc per commodity.
PathFlow hat_flow(const MrfmArtifact& art);

struct PropertyReport {
    struct Item {
        int number = 0;
        bool pass = false;
        std::string detail;
    };
    std::vector<Item> items;
    bool all_pass() const;
    std::string summary() const;
};

// The five structural guarantees of the construction.
PropertyReport check_properties(const MrfmArtifact& art, const Limits& limits = {});

// ---- MRF-M -> MRF (wrapper with immune arcs) ----

struct MrfArtifact {
    MrfMInstance input;
    MrfInstance instance;  // has immune arcs; threshold = L
    Provenance provenance;
    Rat M, Mprime, Delta, L;
    Rat xi_s;                       // identical for every commodity in K'
    std::map<std::string, Rat> xi_t;
    std::vector<std::string> kprime;  // commodity order i_1..i_m
};

MrfArtifact reduce_mrfm_to_mrf(const MrfmArtifact& art, const Limits& limits = {});

struct ExpandArtifact {
    MrfInstance input;
    MrfInstance instance;  // immune-free
    Provenance provenance;
    std::map<std::string, std::string> parent;  // unit arc -> immune parent
};

ExpandArtifact expand_immune(const MrfInstance& inst);

// Maps a flow on the expanded instance back onto the immune instance.
PathFlow contract_immune(const ExpandArtifact& art, const PathFlow& flow);

// The wrapper-saturating flow of value Delta - sum of demands.
PathFlow base_flow(const MrfArtifact& art);

// psi-lift: extends a multicommodity witness x to a robust flow of value Delta
// on the wrapped instance (base flow + prefixed/suffixed copies of x).
PathFlow lift_flow(const MrfArtifact& art, const PathFlow& x, bool integral,
                   const Limits& limits = {});

// Restriction of a wrapped witness to the embedded multicommodity instance.
PathFlow project_flow(const MrfArtifact& art, const PathFlow& flow, const Limits& limits = {});

// ---- clique interdiction -> integral MRF-R ----

struct CliqueMrfrArtifact {
    UndirectedGraph input;
    int ell = 0, r = 0;
    MrfRInstance instance;
    Provenance provenance;
    std::string a_s, a_t;
    std::map<std::string, std::string> vertex_arc;  // v -> a^1_v
    std::vector<std::string> a_st;
};

CliqueMrfrArtifact reduce_clique_interdiction(const UndirectedGraph& g, int ell, int r);

// Reads the removal set off the sigma-path of an integral YES witness and
// validates it against the clique oracle.
std::vector<std::string> interdiction_set_from_flow(const CliqueMrfrArtifact& art,
                                                    const PathFlow& flow,
                                                    const Limits& limits = {});

// ---- combiner machinery ----

struct MrfrTransformArtifact {
    MrfRInstance input;
    MrfRInstance instance;
    Provenance provenance;
    bool identity = false;
};

// Subdivides arcs of compat degree > 1 so the compat graph becomes a matching;
// the j-th incident compat edge moves to the j-th segment.
MrfrTransformArtifact matchingize_compat(const MrfRInstance& inst);

// Source split so the minimum cut equals theta. Requires max-flow >= theta.
MrfrTransformArtifact saturate_demand(const MrfRInstance& inst);

// Adds k_target - k universal parallel source->sink arcs; theta grows alike.
MrfrTransformArtifact pad_budget(const MrfRInstance& inst, int k_target);

struct CombineArtifact {
    UndirectedGraph clique_graph;
    int n = 0;
    MrfRInstance flow_input;
    MrfRInstance instance;
    Provenance provenance;
    std::vector<std::string> vertex_arcs;
};

// One instance deciding "clique NO or flow YES" (inputs: CLIQUE(G, n) and a
// k=2 MRF-R instance with saturated demand and matching compat).
CombineArtifact combine_clique_flow(const UndirectedGraph& g, int n,
                                    const MrfRInstance& flow_inst);

struct UnionArtifact {
    std::vector<MrfRInstance> inputs;
    MrfRInstance instance;
    Provenance provenance;
};

// Identifies sources and sinks; theta adds up; YES iff all inputs are YES.
UnionArtifact wagner_union(const std::vector<MrfRInstance>& insts);

// ---- full pipeline ----

struct PipelineArtifact {
    MrfrNormalizeArtifact norm;
    MrfmArtifact mrfm;
    PropertyReport properties;
    MrfArtifact wrap;
    ExpandArtifact expand;
    // final immune-free MRF instance = expand.instance; threshold:
    Rat L;
};

PipelineArtifact mrfr_to_mrf(const MrfRInstance& inst, const Limits& limits = {});

}  // namespace mrf
