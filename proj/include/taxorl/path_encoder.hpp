#ifndef TAXORL_PATH_ENCODER_HPP
#define TAXORL_PATH_ENCODER_HPP

#include <map>
#include <utility>
#include <vector>

#include "taxorl/model.hpp"
#include "taxorl/tape.hpp"

namespace taxorl {

// Builds term-pair representations R_xy on a tape:
// [pooled path encoding, word vector of x, word vector of y, feature bins].
// The per-episode cache maps a term-id pair to its tape node so repeated
// pairs cost one lookup.
class PairEncoder {
 public:
  PairEncoder(Model& model, const Resources& res, bool use_cache)
      : model_(model), res_(res), use_cache_(use_cache) {}

  NodeId encode_edge(Tape& tape, const DependencyEdge& e);
  NodeId encode_path(Tape& tape, const std::vector<DependencyEdge>& edges);
  // (encoding node, count) pairs; empty list yields the learned empty path.
  NodeId pool_paths(Tape& tape,
                    const std::vector<std::pair<NodeId, double>>& paths);
  // x, y are term ids; y may be kVirtualRootId (RE mode).
  NodeId pair_representation(Tape& tape, int x, int y);

  void clear_cache() { cache_.clear(); }

 private:
  NodeId word_vector(Tape& tape, int id);

  Model& model_;
  const Resources& res_;
  bool use_cache_;
  std::map<std::pair<int, int>, NodeId> cache_;
};

}  // namespace taxorl

#endif
