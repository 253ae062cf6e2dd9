#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include "slicewalk/graph.hpp"

namespace slicewalk {

enum class GenMethod {
  automatic,  // rejection when its expected number of attempts is small, else repair
  rejection,  // resample the whole pairing until simple
  repair,     // one pairing, bad edges fixed by random switches, then extra mixing switches
};

struct GenOptions {
  GenMethod method = GenMethod::automatic;
  int max_attempts = 10000;      // rejection budget
  double mixing_sweeps = 1.0;    // repair: extra switches per edge after the graph is simple
};

struct GenStats {
  GenMethod used = GenMethod::rejection;
  int attempts = 0;           // pairings drawn
  std::uint64_t switches = 0;  // accepted switches (repair only)
};

// Probability that one pairing is simple, to leading order.
double pairing_acceptance_estimate(bool bipartite, int degree);

// Random Delta-regular bipartite graph with n_side vertices per side.
BipartiteRegularGraph gen_bipartite_regular(int n_side, int degree, std::uint64_t seed, const GenOptions& opt = {},
                                            GenStats* stats = nullptr);

// Random simple Delta-regular graph on n vertices.
RegularGraph gen_regular(int n, int degree, std::uint64_t seed, const GenOptions& opt = {},
                         GenStats* stats = nullptr);

std::string to_string(GenMethod m);
GenMethod gen_method_from_string(const std::string& s);

// ---- text format ---------------------------------------------------------
// "bipartite <n_side> <degree>" or "regular <n> <degree>", then "u v" per edge.

using AnyGraph = std::variant<BipartiteRegularGraph, RegularGraph>;

void write_graph(std::ostream& out, const BipartiteRegularGraph& g);
void write_graph(std::ostream& out, const RegularGraph& g);
void save_graph(const std::string& path, const AnyGraph& g);
// Throws InvalidArgument on malformed input or any broken invariant.
AnyGraph read_graph(std::istream& in);
AnyGraph load_graph(const std::string& path);

// ---- common neighborhoods ------------------------------------------------

struct CommonNeighborStats {
  int max_common = 0;          // largest |N(u) n N(v)| over same-side pairs
  long long pairs_above_two = 0;  // same-side pairs with more than 2 common neighbors
  long long vertices_with_multiple_doubles = 0;  // vertices sharing >= 2 neighbors with > 1 other vertex
  bool at_most_two() const { return pairs_above_two == 0; }
  bool unique_doubles() const { return vertices_with_multiple_doubles == 0; }
};

CommonNeighborStats common_neighbor_stats(const BipartiteGraph& g);

}  // namespace slicewalk
