#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mrf/instances.hpp"
#include "mrf/oracles.hpp"
#include "mrf/reductions.hpp"

namespace mrf {

// Tagged instance container. Exactly the member named by `variant` is
// meaningful; the others stay default-constructed.
struct InstanceDocument {
    int schema_version = 1;
    std::string variant;  // mrf | mrf_r | mrf_m | coloring | clique_interdiction
    MrfInstance mrf;
    MrfRInstance mrf_r;
    MrfMInstance mrf_m;
    UndirectedGraph graph;  // coloring / clique_interdiction
    int ell = 0;
    int r = 0;  // clique_interdiction only
};

// strict: rationals must arrive reduced with a positive denominator; lenient
// parsing canonicalizes instead. Schema violations name the offending element
// path (e.g. "arcs[2].capacity"). The embedded instance is fully validated.
InstanceDocument parse_instance(const std::string& text, bool strict = true);
// Canonical form: sorted ids, fixed key order, reduced rationals, 2-space
// indentation, trailing newline. parse-serialize round-trips losslessly.
std::string serialize_instance(const InstanceDocument& doc);

// Flow witnesses as arc-id paths with rational values.
std::string serialize_flow(const Digraph& g, const PathFlow& flow);
PathFlow parse_flow(const Digraph& g, const std::string& text, bool strict = true);

std::string serialize_coloring(const FractionalColoring& y);
FractionalColoring parse_coloring(const std::string& text, bool strict = true);

std::string serialize_provenance(const Provenance& p);

struct GeneratorSpec {
    std::uint64_t seed = 0;
    std::string family;  // random_dag | random_compat | coloring_graph | clique_graph
    std::map<std::string, long> params;
};

GeneratorSpec parse_generator_spec(const std::string& text);
std::string serialize_generator_spec(const GeneratorSpec& spec);

// Deterministic instance families (identical spec -> identical document):
//   random_dag      n, arcs, k            unit-capacity DAG, source reaches sink
//   random_compat   n, arcs, k, pairs     normalized MRF-R with `pairs` incompatible pairs
//   coloring_graph  n, p_num, p_den, ell  G(n,p) without isolated vertices
//   clique_graph    n, p_num, p_den, ell, r
InstanceDocument generate(const GeneratorSpec& spec);

// Command-line entry point (thin wrapper in tools/ calls this).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrf
