#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mrf/instances.hpp"
#include "mrf/rational.hpp"

namespace mrf {

class UndirectedGraph {
public:
    UndirectedGraph() = default;
    static UndirectedGraph build(std::vector<std::string> vertices,
                                 const std::vector<std::pair<std::string, std::string>>& edges);

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::set<std::pair<std::string, std::string>>& edges() const { return edges_; }
    bool adjacent(const std::string& a, const std::string& b) const;

private:
    std::vector<std::string> vertices_;  // sorted
    std::set<std::pair<std::string, std::string>> edges_;  // normalized a < b
};

// Weighted independent sets; vertex lists are kept sorted.
struct FractionalColoring {
    std::map<std::vector<std::string>, Rat> weights;

    Rat total() const;
};

// Throws unless every support set is independent and every vertex is covered
// with total weight exactly 1.
void validate_coloring(const UndirectedGraph& g, const FractionalColoring& y);

// Exact chi_f via the LP over all nonempty independent sets.
std::pair<Rat, FractionalColoring> fractional_chromatic_number(const UndirectedGraph& g,
                                                               std::size_t max_vertices = 14);

std::vector<std::vector<std::string>> cliques_of_size(const UndirectedGraph& g, int ell);
int max_clique(const UndirectedGraph& g);

struct InterdictionResult {
    bool yes = false;
    std::vector<std::string> witness;  // vertex set R on YES
};

// Exhaustive search over all vertex sets R with |R| <= r that meet every
// ell-clique.
InterdictionResult clique_interdiction_bruteforce(const UndirectedGraph& g, int ell, int r,
                                                  std::size_t max_vertices = 16);

// Visits every family of theta arc-disjoint source->sink paths in a
// unit-capacity digraph, in deterministic order. The visitor returns false to
// stop early. Independent of the solver's backtracking (no scenario pruning).
void for_each_unit_flow_family(const Digraph& g, const std::string& source,
                               const std::string& sink, int theta,
                               const std::function<bool(const std::vector<Path>&)>& visit,
                               std::size_t search_limit = 20'000'000);

}  // namespace mrf
