#include "taxorl/arborescence.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace taxorl {

namespace {

struct Edge {
  int child, parent;
  double weight;
  int orig_child, orig_parent;  // for tie-breaking and result reporting
};

bool better(const Edge& a, const Edge& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.orig_child != b.orig_child) return a.orig_child < b.orig_child;
  return a.orig_parent < b.orig_parent;
}

// Recursive contraction step. Nodes are 0..n-1, root is a node id.
// Returns the set of chosen original (child, parent) edges.
void solve(int n, int root, std::vector<Edge> edges,
           std::map<int, int>& chosen,
           const std::vector<int>& witness) {
  // Best incoming edge per node.
  std::vector<int> best(n, -1);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const Edge& e = edges[i];
    if (e.child == root || e.child == e.parent) continue;
    if (best[e.child] < 0 || better(e, edges[best[e.child]]))
      best[e.child] = i;
  }
  for (int v = 0; v < n; ++v) {
    if (v != root && best[v] < 0)
      throw InfeasibleError("max_arborescence: node " +
                            std::to_string(witness[v]) +
                            " has no incoming candidate edge");
  }

  // Find a cycle among selected edges.
  std::vector<int> color(n, 0);  // 0 unvisited, 1 in progress, 2 done
  std::vector<int> cycle;
  for (int start = 0; start < n && cycle.empty(); ++start) {
    int v = start;
    std::vector<int> path;
    while (v != root && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = edges[best[v]].parent;
    }
    if (v != root && color[v] == 1) {
      // Found a cycle ending at v.
      auto it = std::find(path.begin(), path.end(), v);
      cycle.assign(it, path.end());
    }
    for (int u : path) color[u] = 2;
  }

  if (cycle.empty()) {
    for (int v = 0; v < n; ++v) {
      if (v == root) continue;
      const Edge& e = edges[best[v]];
      chosen[e.orig_child] = e.orig_parent;
    }
    return;
  }

  std::vector<bool> in_cycle(n, false);
  for (int v : cycle) in_cycle[v] = true;

  // Renumber: cycle collapses to one supernode.
  std::vector<int> remap(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (!in_cycle[v]) remap[v] = m++;
  int super = m++;
  for (int v : cycle) remap[v] = super;

  std::vector<int> new_witness(m);
  for (int v = 0; v < n; ++v)
    if (!in_cycle[v]) new_witness[remap[v]] = witness[v];
  new_witness[super] = witness[cycle.front()];

  // Edges entering the cycle get reduced weight; remember which in-cycle
  // selection each one would displace.
  std::vector<Edge> next;
  std::map<std::pair<int, int>, int> enters;  // orig edge -> displaced node
  for (const Edge& e : edges) {
    bool ci = in_cycle[e.child], pi = in_cycle[e.parent];
    if (ci && pi) continue;
    Edge ne = e;
    ne.child = remap[e.child];
    ne.parent = remap[e.parent];
    if (ci) {
      ne.weight = e.weight - edges[best[e.child]].weight;
      enters[{e.orig_child, e.orig_parent}] = e.child;
    }
    next.push_back(ne);
  }

  solve(m, remap[root], std::move(next), chosen, new_witness);

  // Exactly one chosen edge enters the supernode; it breaks the cycle at the
  // node it displaces. All other cycle nodes keep their in-cycle selection.
  int displaced = -1;
  for (const auto& [oe, node] : enters) {
    auto it = chosen.find(oe.first);
    if (it != chosen.end() && it->second == oe.second) {
      displaced = node;
      break;
    }
  }
  for (int v : cycle) {
    if (v == displaced) continue;
    const Edge& e = edges[best[v]];
    chosen[e.orig_child] = e.orig_parent;
  }
}

Taxonomy build_tree(const std::map<int, int>& parent_of, int root) {
  Taxonomy t;
  t.add_root(root);
  std::map<int, std::vector<int>> children;
  for (const auto& [c, p] : parent_of) children[p].push_back(c);
  std::deque<int> frontier{root};
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();
    auto it = children.find(v);
    if (it == children.end()) continue;
    for (int c : it->second) {
      t.add_edge(c, v);
      frontier.push_back(c);
    }
  }
  return t;
}

}  // namespace

Taxonomy max_arborescence(int n, const std::vector<WeightedEdge>& edges,
                          int root) {
  if (root < 0 || root >= n)
    throw std::invalid_argument("max_arborescence: root out of range");
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& e : edges)
    es.push_back({e.child, e.parent, e.weight, e.child, e.parent});
  std::vector<int> witness(n);
  for (int i = 0; i < n; ++i) witness[i] = i;
  std::map<int, int> chosen;
  solve(n, root, std::move(es), chosen, witness);
  return build_tree(chosen, root);
}

Taxonomy max_arborescence(int n,
                          const std::map<std::pair<int, int>, double>& weights,
                          int root) {
  std::vector<WeightedEdge> es;
  es.reserve(weights.size());
  for (const auto& [cp, w] : weights)
    es.push_back({cp.first, cp.second, w});
  return max_arborescence(n, es, root);
}

Taxonomy two_phase_baseline(
    const std::map<std::pair<int, int>, double>& pair_scores,
    const std::set<int>& vocab, std::optional<double> root_prior) {
  if (vocab.empty())
    throw std::invalid_argument("two_phase_baseline: empty vocabulary");

  // Compact node ids; the virtual root gets index n.
  std::vector<int> ids(vocab.begin(), vocab.end());
  std::map<int, int> compact;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) compact[ids[i]] = i;
  int n = static_cast<int>(ids.size());
  int vroot = n;

  double min_score = 0;
  bool first = true;
  std::vector<WeightedEdge> es;
  for (const auto& [cp, w] : pair_scores) {
    auto ci = compact.find(cp.first);
    auto pi = compact.find(cp.second);
    if (ci == compact.end() || pi == compact.end()) continue;
    if (cp.first == cp.second) continue;
    es.push_back({ci->second, pi->second, w});
    if (first || w < min_score) min_score = w;
    first = false;
  }
  double prior = root_prior ? *root_prior : min_score - 1.0;
  for (int i = 0; i < n; ++i) es.push_back({i, vroot, prior});

  Taxonomy with_vroot = max_arborescence(n + 1, es, vroot);

  // Strip the virtual root. Its lowest-id child becomes the real root; any
  // further children (only possible when the score graph is disconnected)
  // are reparented under it.
  std::vector<int> root_children;
  for (const auto& [c, p] : with_vroot.parent_map())
    if (p == vroot) root_children.push_back(c);
  std::sort(root_children.begin(), root_children.end());
  int real_root = ids[root_children.front()];

  std::map<int, int> parent_of;
  for (const auto& [c, p] : with_vroot.parent_map()) {
    if (p == vroot) {
      if (c != root_children.front()) parent_of[ids[c]] = real_root;
    } else {
      parent_of[ids[c]] = ids[p];
    }
  }
  return build_tree(parent_of, real_root);
}

}  // namespace taxorl
