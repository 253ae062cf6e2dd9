#include "slicewalk/graph_gen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slicewalk/error.hpp"
#include "slicewalk/rng.hpp"

namespace slicewalk {

double pairing_acceptance_estimate(bool bipartite, int degree) {
  const double d = degree;
  return bipartite ? std::exp(-(d - 1.0) * (d - 1.0) / 2.0) : std::exp(-(d * d - 1.0) / 4.0);
}

std::string to_string(GenMethod m) {
  switch (m) {
    case GenMethod::automatic: return "auto";
    case GenMethod::rejection: return "rejection";
    case GenMethod::repair: return "repair";
  }
  return "auto";
}

GenMethod gen_method_from_string(const std::string& s) {
  if (s == "auto") return GenMethod::automatic;
  if (s == "rejection") return GenMethod::rejection;
  if (s == "repair") return GenMethod::repair;
  throw InvalidArgument("unknown generation method '" + s + "' (expected auto, rejection or repair)");
}

namespace {

constexpr double kAutoThreshold = 1e-3;

GenMethod resolve(GenMethod m, bool bipartite, int degree) {
  if (m != GenMethod::automatic) return m;
  return pairing_acceptance_estimate(bipartite, degree) >= kAutoThreshold ? GenMethod::rejection : GenMethod::repair;
}

// ---- bipartite pairing -----------------------------------------------------
// Position p of `ys` is copy p % d of x = p / d, so row x is ys[x*d .. x*d+d).

struct BipartitePairing {
  int n;
  int d;
  std::vector<int> ys;

  bool row_has(int x, int y) const {
    const auto* r = ys.data() + static_cast<std::size_t>(x) * static_cast<std::size_t>(d);
    return std::find(r, r + d, y) != r + d;
  }
  int row_count(int x, int y) const {
    const auto* r = ys.data() + static_cast<std::size_t>(x) * static_cast<std::size_t>(d);
    return static_cast<int>(std::count(r, r + d, y));
  }
  // Exchange the Y endpoints of positions p and q if both new edges are absent.
  bool try_switch(std::size_t p, std::size_t q) {
    const int x = static_cast<int>(p / static_cast<std::size_t>(d));
    const int xq = static_cast<int>(q / static_cast<std::size_t>(d));
    const int y = ys[p];
    const int yq = ys[q];
    if (x == xq || y == yq) return false;
    if (row_has(x, yq) || row_has(xq, y)) return false;
    std::swap(ys[p], ys[q]);
    return true;
  }
};

BipartitePairing draw_bipartite(int n, int d, Rng& rng) {
  BipartitePairing pr{n, d, {}};
  pr.ys.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int y = 0; y < n; ++y) {
    for (int c = 0; c < d; ++c) pr.ys.push_back(y);
  }
  rng.shuffle(pr.ys);
  return pr;
}

std::vector<std::size_t> bad_positions(const BipartitePairing& pr) {
  std::vector<std::size_t> bad;
  std::vector<int> stamp(static_cast<std::size_t>(pr.n), -1);
  for (int x = 0; x < pr.n; ++x) {
    for (int c = 0; c < pr.d; ++c) {
      const std::size_t p = static_cast<std::size_t>(x) * static_cast<std::size_t>(pr.d) + static_cast<std::size_t>(c);
      const int y = pr.ys[p];
      if (stamp[static_cast<std::size_t>(y)] == x) {
        bad.push_back(p);
      } else {
        stamp[static_cast<std::size_t>(y)] = x;
      }
    }
  }
  return bad;
}

BipartiteRegularGraph to_graph(const BipartitePairing& pr) {
  std::vector<std::pair<int, int>> e;
  e.reserve(pr.ys.size());
  for (std::size_t p = 0; p < pr.ys.size(); ++p) e.emplace_back(static_cast<int>(p / static_cast<std::size_t>(pr.d)), pr.ys[p]);
  return BipartiteRegularGraph::from_edges(pr.n, e);
}

// ---- general pairing -------------------------------------------------------

struct Pairing {
  int n;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj;  // neighbor multiset; a loop at v lists v twice

  int count(int u, int v) const {
    const auto& l = adj[static_cast<std::size_t>(u)];
    return static_cast<int>(std::count(l.begin(), l.end(), v));
  }
  bool is_bad(std::size_t i) const {
    const auto [u, v] = edges[i];
    return u == v || count(u, v) > 1;
  }
  void drop(int u, int v) {
    auto& l = adj[static_cast<std::size_t>(u)];
    auto it = std::find(l.begin(), l.end(), v);
    *it = l.back();
    l.pop_back();
  }
  void add(int u, int v) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  // Replace edges (u,v), (c,d) with (u,d), (c,v) when the result stays simple there.
  bool try_switch(std::size_t i, std::size_t j, bool flip) {
    if (i == j) return false;
    const auto [u, v] = edges[i];
    auto [c, d] = edges[j];
    if (flip) std::swap(c, d);
    if (u == d || c == v) return false;
    if ((u == c && d == v) || (u == v && d == c)) return false;
    if (count(u, d) != 0 || count(c, v) != 0) return false;
    drop(u, v);
    drop(v, u);
    drop(c, d);
    drop(d, c);
    add(u, d);
    add(c, v);
    edges[i] = {u, d};
    edges[j] = {c, v};
    return true;
  }
};

Pairing draw_general(int n, int d, Rng& rng) {
  std::vector<int> half;
  half.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < d; ++c) half.push_back(v);
  }
  rng.shuffle(half);
  Pairing pr{n, {}, std::vector<std::vector<int>>(static_cast<std::size_t>(n))};
  pr.edges.reserve(half.size() / 2);
  for (std::size_t i = 0; i + 1 < half.size(); i += 2) {
    pr.edges.emplace_back(half[i], half[i + 1]);
    pr.add(half[i], half[i + 1]);
  }
  return pr;
}

bool is_simple(const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::pair<int, int>> e;
  e.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) return false;
    e.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(e.begin(), e.end());
  return std::adjacent_find(e.begin(), e.end()) == e.end();
}

std::uint64_t switch_cap(std::size_t edges) { return 1000ULL * edges + 1000000ULL; }

}  // namespace

BipartiteRegularGraph gen_bipartite_regular(int n_side, int degree, std::uint64_t seed, const GenOptions& opt,
                                            GenStats* stats) {
  if (n_side < 1) throw InvalidArgument("n_side must be positive");
  if (degree < 0 || degree > n_side) throw InvalidArgument("degree must lie in [0, n_side]");
  GenStats local;
  GenStats& st = stats ? *stats : local;
  st = GenStats{};
  Rng rng(seed);

  // only one graph exists, and random pairings almost never hit it
  if (degree == n_side) {
    std::vector<std::pair<int, int>> e;
    for (int x = 0; x < n_side; ++x) {
      for (int y = 0; y < n_side; ++y) e.emplace_back(x, y);
    }
    st.used = GenMethod::rejection;
    st.attempts = 1;
    return BipartiteRegularGraph::from_edges(n_side, e);
  }

  st.used = resolve(opt.method, true, degree);
  if (st.used == GenMethod::rejection) {
    for (int a = 1; a <= opt.max_attempts; ++a) {
      st.attempts = a;
      BipartitePairing pr = draw_bipartite(n_side, degree, rng);
      if (bad_positions(pr).empty()) return to_graph(pr);
    }
    throw BudgetExhausted("bipartite pairing rejected " + std::to_string(opt.max_attempts) +
                          " times; use the repair method for this degree");
  }

  BipartitePairing pr = draw_bipartite(n_side, degree, rng);
  st.attempts = 1;
  const std::size_t m = pr.ys.size();
  const std::uint64_t cap = switch_cap(m);
  std::uint64_t tries = 0;
  std::vector<std::size_t> bad = bad_positions(pr);
  while (!bad.empty()) {
    const std::size_t p = bad.back();
    const int x = static_cast<int>(p / static_cast<std::size_t>(degree));
    if (pr.row_count(x, pr.ys[p]) < 2) {
      bad.pop_back();
      continue;
    }
    if (++tries > cap) throw BudgetExhausted("switch repair did not converge");
    if (pr.try_switch(p, static_cast<std::size_t>(rng.uniform_index(m)))) {
      ++st.switches;
      bad.pop_back();
    }
  }
  const auto mix = static_cast<std::uint64_t>(opt.mixing_sweeps * static_cast<double>(m));
  for (std::uint64_t t = 0; t < mix; ++t) {
    const auto p = static_cast<std::size_t>(rng.uniform_index(m));
    const auto q = static_cast<std::size_t>(rng.uniform_index(m));
    if (pr.try_switch(p, q)) ++st.switches;
  }
  return to_graph(pr);
}

RegularGraph gen_regular(int n, int degree, std::uint64_t seed, const GenOptions& opt, GenStats* stats) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (degree < 0 || degree >= n) throw InvalidArgument("degree must lie in [0, n)");
  if ((static_cast<long long>(n) * degree) % 2 != 0) throw InvalidArgument("n * degree must be even");
  GenStats local;
  GenStats& st = stats ? *stats : local;
  st = GenStats{};
  Rng rng(seed);

  if (degree == n - 1) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    }
    st.used = GenMethod::rejection;
    st.attempts = 1;
    return RegularGraph::from_edges(n, e);
  }

  st.used = resolve(opt.method, false, degree);
  if (st.used == GenMethod::rejection) {
    for (int a = 1; a <= opt.max_attempts; ++a) {
      st.attempts = a;
      Pairing pr = draw_general(n, degree, rng);
      if (is_simple(pr.edges)) return RegularGraph::from_edges(n, pr.edges);
    }
    throw BudgetExhausted("pairing rejected " + std::to_string(opt.max_attempts) +
                          " times; use the repair method for this degree");
  }

  Pairing pr = draw_general(n, degree, rng);
  st.attempts = 1;
  const std::size_t m = pr.edges.size();
  const std::uint64_t cap = switch_cap(m);
  std::uint64_t tries = 0;
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < m; ++i) {
    if (pr.is_bad(i)) bad.push_back(i);
  }
  while (!bad.empty()) {
    const std::size_t i = bad.back();
    if (!pr.is_bad(i)) {
      bad.pop_back();
      continue;
    }
    if (++tries > cap) throw BudgetExhausted("switch repair did not converge");
    if (pr.try_switch(i, static_cast<std::size_t>(rng.uniform_index(m)), rng.coin())) {
      ++st.switches;
      bad.pop_back();
    }
  }
  const auto mix = static_cast<std::uint64_t>(opt.mixing_sweeps * static_cast<double>(m));
  for (std::uint64_t t = 0; t < mix; ++t) {
    const auto i = static_cast<std::size_t>(rng.uniform_index(m));
    const auto j = static_cast<std::size_t>(rng.uniform_index(m));
    if (pr.try_switch(i, j, rng.coin())) ++st.switches;
  }
  return RegularGraph::from_edges(n, pr.edges);
}

// ---- text format -----------------------------------------------------------

void write_graph(std::ostream& out, const BipartiteRegularGraph& g) {
  out << "bipartite " << g.n_side() << ' ' << g.degree() << '\n';
  for (const auto& [x, y] : g.edges()) out << x << ' ' << y << '\n';
}

void write_graph(std::ostream& out, const RegularGraph& g) {
  out << "regular " << g.vertex_count() << ' ' << g.degree() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void save_graph(const std::string& path, const AnyGraph& g) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  std::visit([&](const auto& h) { write_graph(f, h); }, g);
  if (!f) throw Error("write to '" + path + "' failed");
}

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

AnyGraph read_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) throw InvalidArgument("graph file is empty");
  std::istringstream hs(line);
  std::string kind;
  long long n = -1;
  long long d = -1;
  std::string extra;
  if (!(hs >> kind >> n >> d) || (hs >> extra) || (kind != "bipartite" && kind != "regular") || n < 1 || d < 0 ||
      n > (1LL << 30)) {
    throw InvalidArgument("line " + std::to_string(lineno) +
                          ": expected header 'bipartite <n_side> <degree>' or 'regular <n> <degree>'");
  }
  std::vector<std::pair<int, int>> e;
  while (next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    long long u = -1;
    long long v = -1;
    if (!(ls >> u >> v) || (ls >> extra)) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected an edge 'u v'");
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": vertex index out of range");
    }
    e.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  try {
    if (kind == "bipartite") {
      BipartiteRegularGraph g = BipartiteRegularGraph::from_edges(static_cast<int>(n), e);
      if (g.degree() != d) throw InvalidArgument("degree differs from header");
      return g;
    }
    RegularGraph g = RegularGraph::from_edges(static_cast<int>(n), e);
    if (g.degree() != d) throw InvalidArgument("degree differs from header");
    return g;
  } catch (const InvalidArgument& ex) {
    throw InvalidArgument(std::string("invalid graph: ") + ex.what());
  }
}

AnyGraph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open graph file '" + path + "'");
  return read_graph(f);
}

// ---- common neighborhoods --------------------------------------------------

CommonNeighborStats common_neighbor_stats(const BipartiteGraph& g) {
  CommonNeighborStats st;
  for (Side s : {Side::X, Side::Y}) {
    const int n = g.side_count(s);
    std::vector<int> cnt(static_cast<std::size_t>(n), 0);
    std::vector<int> touched;
    for (int u = 0; u < n; ++u) {
      touched.clear();
      for (int w : g.neighbors(s, u)) {
        for (int v : g.neighbors(opposite(s), w)) {
          if (v == u) continue;
          if (cnt[static_cast<std::size_t>(v)]++ == 0) touched.push_back(v);
        }
      }
      int doubles = 0;
      for (int v : touched) {
        const int c = cnt[static_cast<std::size_t>(v)];
        st.max_common = std::max(st.max_common, c);
        if (c > 2 && v > u) ++st.pairs_above_two;
        if (c >= 2) ++doubles;
        cnt[static_cast<std::size_t>(v)] = 0;
      }
      if (doubles > 1) ++st.vertices_with_multiple_doubles;
    }
  }
  return st;
}

}  // namespace slicewalk
