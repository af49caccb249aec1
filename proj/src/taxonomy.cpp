#include "taxorl/taxonomy.hpp"

#include <algorithm>

namespace taxorl {

void Taxonomy::add_root(int id) {
  if (!nodes_.empty())
    throw StructuralError("add_root on non-empty taxonomy");
  nodes_.insert(id);
  root_ = id;
}

void Taxonomy::add_edge(int child, int parent) {
  if (!nodes_.count(parent))
    throw StructuralError("add_edge: parent " + std::to_string(parent) +
                          " not on tree");
  if (nodes_.count(child))
    throw StructuralError("add_edge: child " + std::to_string(child) +
                          " already on tree");
  nodes_.insert(child);
  parent_[child] = parent;
}

void Taxonomy::promote_root(int new_root) {
  if (!root_) throw StructuralError("promote_root on empty taxonomy");
  if (nodes_.count(new_root))
    throw StructuralError("promote_root: term already on tree");
  nodes_.insert(new_root);
  parent_[*root_] = new_root;
  root_ = new_root;
}

std::vector<std::pair<int, int>> Taxonomy::edges() const {
  std::vector<std::pair<int, int>> out(parent_.begin(), parent_.end());
  return out;
}

double f1_score(double precision, double recall) {
  double s = precision + recall;
  return s > 0 ? 2.0 * precision * recall / s : 0.0;
}

std::set<std::pair<int, int>> ancestor_closure(const Taxonomy& t) {
  std::set<std::pair<int, int>> out;
  const auto& parent = t.parent_map();
  for (int node : t.nodes()) {
    int cur = node;
    std::size_t hops = 0;
    auto it = parent.find(cur);
    while (it != parent.end()) {
      out.emplace(node, it->second);
      cur = it->second;
      if (++hops > t.node_count())
        throw StructuralError("ancestor_closure: cycle detected at node " +
                              std::to_string(node));
      it = parent.find(cur);
    }
  }
  return out;
}

namespace {

template <typename Set>
std::size_t intersection_size(const Set& a, const Set& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

}  // namespace

MetricReport evaluate(const Taxonomy& predicted, const Taxonomy& gold) {
  if (gold.edge_count() == 0)
    throw std::invalid_argument("evaluate: gold taxonomy has no edges");

  auto pred_anc = ancestor_closure(predicted);
  auto gold_anc = ancestor_closure(gold);
  std::set<std::pair<int, int>> pred_edges, gold_edges;
  for (auto& e : predicted.edges()) pred_edges.insert(e);
  for (auto& e : gold.edges()) gold_edges.insert(e);

  MetricReport r;
  std::size_t anc_hit = intersection_size(pred_anc, gold_anc);
  std::size_t edge_hit = intersection_size(pred_edges, gold_edges);
  r.ancestor_precision =
      pred_anc.empty() ? 0.0 : double(anc_hit) / double(pred_anc.size());
  r.ancestor_recall =
      gold_anc.empty() ? 0.0 : double(anc_hit) / double(gold_anc.size());
  r.edge_precision =
      pred_edges.empty() ? 0.0 : double(edge_hit) / double(pred_edges.size());
  r.edge_recall =
      gold_edges.empty() ? 0.0 : double(edge_hit) / double(gold_edges.size());
  r.ancestor_f1 = f1_score(r.ancestor_precision, r.ancestor_recall);
  r.edge_f1 = f1_score(r.edge_precision, r.edge_recall);
  return r;
}

double edge_f1_against(const Taxonomy& predicted, const Taxonomy& gold) {
  std::set<std::pair<int, int>> gold_edges;
  for (auto& e : gold.edges()) gold_edges.insert(e);
  if (predicted.edge_count() == 0 || gold_edges.empty()) return 0.0;
  std::size_t hit = 0;
  for (auto& e : predicted.edges()) hit += gold_edges.count(e);
  double p = double(hit) / double(predicted.edge_count());
  double r = double(hit) / double(gold_edges.size());
  return f1_score(p, r);
}

}  // namespace taxorl
