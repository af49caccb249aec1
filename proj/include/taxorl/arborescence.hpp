#ifndef TAXORL_ARBORESCENCE_HPP
#define TAXORL_ARBORESCENCE_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "taxorl/taxonomy.hpp"

namespace taxorl {

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightedEdge {
  int child = -1;
  int parent = -1;
  double weight = 0;
};

// Maximum-weight spanning arborescence over nodes 0..n-1 rooted at root
// (every non-root node ends up with exactly one parent). Ties between equal
// total weights are broken by preferring the lexicographically lowest
// (child, parent) edge, so results are reproducible across platforms.
// Throws InfeasibleError naming a node that cannot be reached.
Taxonomy max_arborescence(int n, const std::vector<WeightedEdge>& edges,
                          int root);

Taxonomy max_arborescence(int n,
                          const std::map<std::pair<int, int>, double>& weights,
                          int root);

// Two-phase induction: hypernym graph from pairwise scores, then Edmonds from
// a virtual root whose edges carry root_prior weight (default: min score - 1,
// so the virtual root attracts exactly one child unless infeasibility forces
// more). The virtual root is stripped from the returned tree.
Taxonomy two_phase_baseline(
    const std::map<std::pair<int, int>, double>& pair_scores,
    const std::set<int>& vocab, std::optional<double> root_prior = {});

}  // namespace taxorl

#endif
