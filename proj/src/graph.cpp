#include "epiwalk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace epiwalk {

void validate_regular(const RegularGraph& g) {
  if (g.n <= 0 || g.r <= 0)
    throw std::runtime_error("graph: empty or degenerate");
  if (g.adj.size() != static_cast<std::size_t>(g.n) * g.r)
    throw std::runtime_error("graph: adjacency size mismatch");
  std::vector<std::int32_t> row;
  for (std::int32_t v = 0; v < g.n; ++v) {
    auto nb = g.neighbors(v);
    row.assign(nb.begin(), nb.end());
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::int32_t u = row[i];
      if (u < 0 || u >= g.n)
        throw std::runtime_error("graph: neighbor index out of range at vertex " +
                                 std::to_string(v));
      if (u == v)
        throw std::runtime_error("graph: self-loop at vertex " + std::to_string(v));
      if (i > 0 && row[i] == row[i - 1])
        throw std::runtime_error("graph: parallel edge at vertex " +
                                 std::to_string(v));
      if (!g.has_edge(u, v))
        throw std::runtime_error("graph: adjacency not symmetric between " +
                                 std::to_string(v) + " and " + std::to_string(u));
    }
  }
}

std::vector<std::int32_t> bfs_distances(const RegularGraph& g,
                                        std::int32_t source,
                                        std::int32_t max_depth) {
  std::vector<std::int32_t> dist(g.n, -1);
  std::vector<std::int32_t> frontier{source};
  dist[source] = 0;
  std::int32_t d = 0;
  std::vector<std::int32_t> next;
  while (!frontier.empty() && (max_depth < 0 || d < max_depth)) {
    next.clear();
    for (std::int32_t v : frontier)
      for (std::int32_t u : g.neighbors(v))
        if (dist[u] < 0) {
          dist[u] = d + 1;
          next.push_back(u);
        }
    frontier.swap(next);
    ++d;
  }
  return dist;
}

bool is_connected(const RegularGraph& g) {
  auto dist = bfs_distances(g, 0);
  return std::find(dist.begin(), dist.end(), -1) == dist.end();
}

bool is_bipartite(const RegularGraph& g) {
  // 2-coloring BFS; deliberately combinatorial rather than spectral.
  std::vector<std::int8_t> color(g.n, -1);
  std::vector<std::int32_t> queue;
  for (std::int32_t s = 0; s < g.n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::int32_t v = queue[head];
      for (std::int32_t u : g.neighbors(v)) {
        if (color[u] < 0) {
          color[u] = static_cast<std::int8_t>(1 - color[v]);
          queue.push_back(u);
        } else if (color[u] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

void save_graph(const RegularGraph& g, std::ostream& os) {
  os << g.n << ' ' << g.r << '\n';
  for (std::int32_t v = 0; v < g.n; ++v) {
    auto nb = g.neighbors(v);
    for (std::int32_t i = 0; i < g.r; ++i) {
      if (i) os << ' ';
      os << nb[i];
    }
    os << '\n';
  }
}

RegularGraph load_graph(std::istream& is) {
  RegularGraph g;
  if (!(is >> g.n >> g.r)) throw std::runtime_error("graph file: bad header");
  if (g.n <= 0 || g.r <= 0) throw std::runtime_error("graph file: bad sizes");
  g.adj.resize(static_cast<std::size_t>(g.n) * g.r);
  for (auto& x : g.adj)
    if (!(is >> x)) throw std::runtime_error("graph file: truncated adjacency");
  validate_regular(g);
  return g;
}

void save_graph_file(const RegularGraph& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  save_graph(g, os);
}

RegularGraph load_graph_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_graph(is);
}

}  // namespace epiwalk
