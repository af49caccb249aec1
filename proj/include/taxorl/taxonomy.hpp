#ifndef TAXORL_TAXONOMY_HPP
#define TAXORL_TAXONOMY_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace taxorl {

struct Term {
  int id = -1;
  std::string surface;
};

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rooted tree over term ids. Edges are (child, parent) hypernymy relations.
// Built incrementally during an episode, immutable everywhere else.
class Taxonomy {
 public:
  Taxonomy() = default;

  // Adds an isolated node that becomes the root (tree must be empty).
  void add_root(int id);
  // Attaches child under parent; parent must already be a node.
  void add_edge(int child, int parent);
  // Makes new_root the parent of the current root.
  void promote_root(int new_root);

  bool contains(int id) const { return nodes_.count(id) > 0; }
  const std::set<int>& nodes() const { return nodes_; }
  const std::map<int, int>& parent_map() const { return parent_; }
  std::optional<int> root() const { return root_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return parent_.size(); }

  // (child, parent) pairs in child order.
  std::vector<std::pair<int, int>> edges() const;

  bool has_virtual_root = false;  // RE-mode provenance; never a real node

 private:
  std::set<int> nodes_;
  std::map<int, int> parent_;  // child -> parent
  std::optional<int> root_;
};

struct MetricReport {
  double ancestor_precision = 0, ancestor_recall = 0, ancestor_f1 = 0;
  double edge_precision = 0, edge_recall = 0, edge_f1 = 0;
};

double f1_score(double precision, double recall);

// All (descendant, proper ancestor) pairs of the tree.
std::set<std::pair<int, int>> ancestor_closure(const Taxonomy& t);

MetricReport evaluate(const Taxonomy& predicted, const Taxonomy& gold);

// Edge-F1 of a possibly-incomplete tree against gold, with recall measured
// over the full gold edge set. Total: empty predicted edge set scores 0.
double edge_f1_against(const Taxonomy& predicted, const Taxonomy& gold);

}  // namespace taxorl

#endif
