#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace epiwalk {

// Immutable simple r-regular graph, adjacency stored row-major (r entries
// per vertex). Construction goes through validate() so every instance in
// circulation satisfies the degree/simplicity/symmetry invariants.
struct RegularGraph {
  std::int32_t n = 0;
  std::int32_t r = 0;
  std::vector<std::int32_t> adj;

  std::span<const std::int32_t> neighbors(std::int32_t v) const {
    return {adj.data() + static_cast<std::size_t>(v) * r,
            static_cast<std::size_t>(r)};
  }
  bool has_edge(std::int32_t u, std::int32_t v) const {
    for (std::int32_t w : neighbors(u))
      if (w == v) return true;
    return false;
  }
};

// Throws std::runtime_error naming the violated invariant.
void validate_regular(const RegularGraph& g);

bool is_connected(const RegularGraph& g);
bool is_bipartite(const RegularGraph& g);

// Single-source BFS distances; -1 for unreachable. `max_depth < 0` means
// unbounded; otherwise vertices farther than max_depth stay at -1.
std::vector<std::int32_t> bfs_distances(const RegularGraph& g,
                                        std::int32_t source,
                                        std::int32_t max_depth = -1);

// Line-oriented text format: header "n r", then n lines of r neighbor
// indices (0-based). Load validates and round-trips save() exactly.
void save_graph(const RegularGraph& g, std::ostream& os);
RegularGraph load_graph(std::istream& is);
void save_graph_file(const RegularGraph& g, const std::string& path);
RegularGraph load_graph_file(const std::string& path);

}  // namespace epiwalk
