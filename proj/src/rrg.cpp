#include "epiwalk/rrg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "epiwalk/rng.hpp"

namespace epiwalk {

namespace {

// One pairing-model attempt; false on loop or parallel edge.
bool try_pairing(std::int32_t n, std::int32_t r, std::mt19937_64& rng,
                 std::vector<std::int32_t>& stubs, RegularGraph& g) {
  const std::size_t m = stubs.size();
  std::iota(stubs.begin(), stubs.end(), 0);
  for (std::size_t i = m - 1; i > 0; --i) {
    std::size_t j = uniform_below(rng, i + 1);
    std::swap(stubs[i], stubs[j]);
  }
  g.n = n;
  g.r = r;
  g.adj.assign(static_cast<std::size_t>(n) * r, -1);
  std::vector<std::int32_t> deg(n, 0);
  for (std::size_t i = 0; i < m; i += 2) {
    std::int32_t u = stubs[i] / r;
    std::int32_t v = stubs[i + 1] / r;
    if (u == v) return false;
    auto row = g.adj.data() + static_cast<std::size_t>(u) * r;
    for (std::int32_t d = 0; d < deg[u]; ++d)
      if (row[d] == v) return false;
    g.adj[static_cast<std::size_t>(u) * r + deg[u]++] = v;
    g.adj[static_cast<std::size_t>(v) * r + deg[v]++] = u;
  }
  return true;
}

}  // namespace

RegularGraph generate_regular(std::int32_t n, std::int32_t r,
                              std::uint64_t seed, int max_attempts) {
  if (r < 3) throw std::invalid_argument("generate_regular: r must be >= 3");
  if (n <= r) throw std::invalid_argument("generate_regular: need n > r");
  if ((static_cast<std::int64_t>(n) * r) % 2 != 0)
    throw std::invalid_argument("generate_regular: n*r must be even");

  auto rng = make_stream(seed, StreamTag::graph);
  std::vector<std::int32_t> stubs(static_cast<std::size_t>(n) * r);
  RegularGraph g;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (try_pairing(n, r, rng, stubs, g)) return g;
  }
  throw std::runtime_error(
      "generate_regular: no simple pairing after " +
      std::to_string(max_attempts) + " attempts (n=" + std::to_string(n) +
      ", r=" + std::to_string(r) + ")");
}

double second_eigenvalue(const RegularGraph& g, double tol, int max_iters) {
  if (!is_connected(g))
    throw std::invalid_argument("second_eigenvalue: graph must be connected");
  const std::int32_t n = g.n;
  if (n == 2) return -static_cast<double>(g.r);  // degenerate; unused in practice

  // Lanczos on the adjacency operator restricted to the orthogonal
  // complement of the uniform vector (the known top eigenpair, value r).
  // Full reorthogonalization keeps the Krylov basis clean; the largest Ritz
  // value converges to lambda_2 from below.
  auto rng = make_stream(0x5eedfULL + static_cast<std::uint64_t>(n) * 31 + g.r,
                         StreamTag::spectral);
  Eigen::VectorXd v(n);
  for (std::int32_t i = 0; i < n; ++i) v[i] = uniform_unit(rng) - 0.5;

  auto deflate = [n](Eigen::VectorXd& x) {
    x.array() -= x.sum() / n;
  };
  auto matvec = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    for (std::int32_t u = 0; u < n; ++u) {
      double acc = 0.0;
      for (std::int32_t w : g.neighbors(u)) acc += x[w];
      y[u] = acc;
    }
  };

  deflate(v);
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alphas, betas;
  Eigen::VectorXd w(n);
  double prev_ritz = std::numeric_limits<double>::quiet_NaN();

  for (int m = 0; m < max_iters; ++m) {
    basis.push_back(v);
    matvec(v, w);
    double alpha = v.dot(w);
    alphas.push_back(alpha);
    w -= alpha * v;
    if (m > 0) w -= betas.back() * basis[m - 1];
    deflate(w);
    for (const auto& b : basis) w -= b.dot(w) * b;
    for (const auto& b : basis) w -= b.dot(w) * b;
    double beta = w.norm();

    // Ritz values of the current tridiagonal projection.
    const int mm = m + 1;
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alphas.data(), mm);
    Eigen::VectorXd sub = mm > 1 ? Eigen::Map<const Eigen::VectorXd>(betas.data(), mm - 1)
                                 : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    double ritz = es.eigenvalues()[mm - 1];
    double resid = beta * std::abs(es.eigenvectors()(mm - 1, mm - 1));

    if (resid <= tol * 0.5 ||
        (mm > 4 && std::abs(ritz - prev_ritz) <= tol * 1e-3) || beta < 1e-13) {
      return ritz;
    }
    prev_ritz = ritz;
    betas.push_back(beta);
    v = w / beta;
  }
  throw std::runtime_error("second_eigenvalue: no convergence after " +
                           std::to_string(max_iters) +
                           " iterations (last iterate " +
                           std::to_string(prev_ritz) + ")");
}

std::optional<std::int32_t> shortest_cycle_through(const RegularGraph& g,
                                                   std::int32_t v,
                                                   std::int32_t max_len) {
  if (max_len < 3) return std::nullopt;
  // BFS from v labeling each vertex with the root branch it was reached
  // through. Any edge joining two distinct branches closes a cycle through v
  // of length d(a)+d(b)+1; the minimum such value is exact because branch
  // subtrees of a BFS tree are vertex-disjoint.
  std::vector<std::int32_t> dist(g.n, -1), branch(g.n, -1);
  std::vector<std::int32_t> frontier, next;
  dist[v] = 0;
  const std::int32_t depth_cap = max_len / 2;
  for (std::int32_t u : g.neighbors(v)) {
    if (dist[u] >= 0) continue;  // parallel edges impossible; defensive
    dist[u] = 1;
    branch[u] = u;
    frontier.push_back(u);
  }
  std::int32_t best = -1;
  // Edges among depth-1 neighbors (triangles through v) and deeper.
  for (std::int32_t d = 1; d <= depth_cap && !frontier.empty(); ++d) {
    for (std::int32_t a : frontier)
      for (std::int32_t b : g.neighbors(a)) {
        if (dist[b] < 0 || b == v) continue;
        if (branch[b] != branch[a]) {
          std::int32_t len = dist[a] + dist[b] + 1;
          if (len <= max_len && (best < 0 || len < best)) best = len;
        }
      }
    if (best == d * 2 || best == d * 2 + 1) break;  // cannot improve further
    next.clear();
    for (std::int32_t a : frontier)
      for (std::int32_t b : g.neighbors(a))
        if (dist[b] < 0) {
          dist[b] = d + 1;
          branch[b] = branch[a];
          next.push_back(b);
        }
    frontier.swap(next);
  }
  if (best < 0) return std::nullopt;
  return best;
}

namespace {

// Vertex set of one shortest cycle through v (length known to be <= max_len).
// Rebuilds the BFS with parents and stitches the two arcs together.
std::vector<std::int32_t> extract_cycle_through(const RegularGraph& g,
                                                std::int32_t v,
                                                std::int32_t max_len) {
  std::vector<std::int32_t> dist(g.n, -1), branch(g.n, -1), parent(g.n, -1);
  std::vector<std::int32_t> frontier, next;
  dist[v] = 0;
  for (std::int32_t u : g.neighbors(v)) {
    if (dist[u] >= 0) continue;
    dist[u] = 1;
    branch[u] = u;
    parent[u] = v;
    frontier.push_back(u);
  }
  std::int32_t best = -1, best_a = -1, best_b = -1;
  const std::int32_t depth_cap = max_len / 2;
  for (std::int32_t d = 1; d <= depth_cap && !frontier.empty(); ++d) {
    for (std::int32_t a : frontier)
      for (std::int32_t b : g.neighbors(a)) {
        if (dist[b] < 0 || b == v) continue;
        if (branch[b] != branch[a]) {
          std::int32_t len = dist[a] + dist[b] + 1;
          if (len <= max_len && (best < 0 || len < best)) {
            best = len;
            best_a = a;
            best_b = b;
          }
        }
      }
    if (best >= 0 && (best == d * 2 || best == d * 2 + 1)) break;
    next.clear();
    for (std::int32_t a : frontier)
      for (std::int32_t b : g.neighbors(a))
        if (dist[b] < 0) {
          dist[b] = d + 1;
          branch[b] = branch[a];
          parent[b] = a;
          next.push_back(b);
        }
    frontier.swap(next);
  }
  std::vector<std::int32_t> cyc;
  for (std::int32_t x = best_a; x != -1; x = parent[x]) cyc.push_back(x);
  for (std::int32_t x = best_b; x != v && x != -1; x = parent[x]) cyc.push_back(x);
  std::sort(cyc.begin(), cyc.end());
  cyc.erase(std::unique(cyc.begin(), cyc.end()), cyc.end());
  return cyc;
}

bool ball_is_treelike(const RegularGraph& g, std::int32_t v, std::int32_t l1,
                      std::vector<std::int32_t>& mark, std::int32_t stamp,
                      std::vector<std::int32_t>& ball) {
  ball.clear();
  ball.push_back(v);
  mark[v] = stamp;
  std::size_t head = 0;
  std::vector<std::int32_t> dist_local{0};
  while (head < ball.size()) {
    std::int32_t u = ball[head];
    std::int32_t du = dist_local[head];
    ++head;
    if (du == l1) continue;
    for (std::int32_t w : g.neighbors(u))
      if (mark[w] != stamp) {
        mark[w] = stamp;
        ball.push_back(w);
        dist_local.push_back(du + 1);
      }
  }
  // Connected induced subgraph is a tree iff |E| = |V| - 1.
  std::size_t edge_ends = 0;
  for (std::int32_t u : ball)
    for (std::int32_t w : g.neighbors(u))
      if (mark[w] == stamp) ++edge_ends;
  return edge_ends / 2 == ball.size() - 1;
}

std::int32_t set_distance(const RegularGraph& g,
                          const std::vector<std::int32_t>& from,
                          const std::vector<std::int32_t>& to,
                          std::int32_t cap) {
  std::vector<std::int8_t> target(g.n, 0);
  for (std::int32_t t : to) target[t] = 1;
  std::vector<std::int32_t> dist(g.n, -1), frontier, next;
  for (std::int32_t s : from) {
    if (target[s]) return 0;
    dist[s] = 0;
    frontier.push_back(s);
  }
  for (std::int32_t d = 0; d < cap && !frontier.empty(); ++d) {
    next.clear();
    for (std::int32_t u : frontier)
      for (std::int32_t w : g.neighbors(u))
        if (dist[w] < 0) {
          if (target[w]) return d + 1;
          dist[w] = d + 1;
          next.push_back(w);
        }
    frontier.swap(next);
  }
  return cap + 1;  // farther than cap
}

}  // namespace

TypicalityReport check_typical(const RegularGraph& g,
                               const TypicalityOptions& opts) {
  if (g.r < 3) throw std::invalid_argument("check_typical: requires r >= 3");
  if (opts.eps1 <= 0.0 || opts.eps1 >= 1.0)
    throw std::invalid_argument("check_typical: eps1 must lie in (0,1)");
  if (opts.eps <= 0.0)
    throw std::invalid_argument("check_typical: eps must be positive");
  if (opts.sample_size < 0 || opts.sample_size > g.n)
    throw std::invalid_argument("check_typical: sample_size must be <= n");

  TypicalityReport rep;
  rep.l1 = static_cast<std::int32_t>(
      std::floor(opts.eps1 * std::log(g.n) / std::log(g.r)));
  rep.connected = is_connected(g);
  rep.bipartite = is_bipartite(g);
  // A disconnected regular graph has a repeated top eigenvalue.
  rep.lambda2 = rep.connected
                    ? second_eigenvalue(g, opts.lambda2_tol, opts.lambda2_max_iters)
                    : static_cast<double>(g.r);

  // P3: vertices on cycles of length <= L1, exact per-vertex check.
  std::vector<std::int32_t> small_cycle_vertices;
  for (std::int32_t v = 0; v < g.n; ++v)
    if (shortest_cycle_through(g, v, rep.l1)) small_cycle_vertices.push_back(v);
  rep.small_cycle_vertex_count =
      static_cast<std::int32_t>(small_cycle_vertices.size());

  // P4 on the candidates found by P3: their short cycles (length <= 100 L1)
  // must not come within distance 100 L1 of a different short cycle.
  rep.p4_violation = false;
  const std::int32_t reach = 100 * rep.l1;
  if (!small_cycle_vertices.empty() && reach >= 3) {
    std::vector<std::vector<std::int32_t>> cycles;
    for (std::int32_t v : small_cycle_vertices) {
      if (!shortest_cycle_through(g, v, reach)) continue;
      auto cyc = extract_cycle_through(g, v, reach);
      if (std::find(cycles.begin(), cycles.end(), cyc) == cycles.end())
        cycles.push_back(cyc);
    }
    for (std::size_t i = 0; i < cycles.size() && !rep.p4_violation; ++i)
      for (std::size_t j = i + 1; j < cycles.size(); ++j)
        if (set_distance(g, cycles[i], cycles[j], reach) <= reach) {
          rep.p4_violation = true;
          break;
        }
  }

  // Treelike fraction on a uniform sample (fixed internal stream keeps the
  // report deterministic for a given graph).
  std::int32_t sample = opts.sample_size == 0 ? g.n : opts.sample_size;
  std::vector<std::int32_t> verts(g.n);
  std::iota(verts.begin(), verts.end(), 0);
  if (sample < g.n) {
    auto rng = make_stream(0x7265706fULL ^ (static_cast<std::uint64_t>(g.n) << 8 | g.r),
                           StreamTag::sampler);
    for (std::int32_t i = 0; i < sample; ++i) {
      std::size_t j = i + uniform_below(rng, static_cast<std::uint64_t>(g.n - i));
      std::swap(verts[i], verts[j]);
    }
    verts.resize(sample);
  }
  std::vector<std::int32_t> mark(g.n, -1), ball;
  std::int32_t treelike = 0, stamp = 0;
  for (std::int32_t v : verts)
    if (ball_is_treelike(g, v, rep.l1, mark, stamp++, ball)) ++treelike;
  rep.treelike_fraction = static_cast<double>(treelike) / verts.size();
  return rep;
}

}  // namespace epiwalk
