#ifndef TAXORL_PAIRWISE_HPP
#define TAXORL_PAIRWISE_HPP

#include <map>
#include <utility>
#include <vector>

#include "taxorl/adam.hpp"
#include "taxorl/arborescence.hpp"
#include "taxorl/path_encoder.hpp"
#include "taxorl/rng.hpp"

namespace taxorl {

// Two-phase reference system: a binary hypernymy classifier over the same
// pair representations as the policy, followed by maximum-arborescence
// decoding. Positives are gold edges; negatives are sampled non-edges from
// the same taxonomy.
class PairwiseTrainer {
 public:
  PairwiseTrainer(Resources& res, Model& model, const Config& cfg);

  // One pass over all training edges (shuffled, with fresh negatives).
  // Returns the mean per-example loss.
  double train_epoch(Rng& rng);
  std::vector<double> train(int epochs, Rng& rng);

  double score_pair(int x, int y);  // classifier logit
  std::map<std::pair<int, int>, double> score_all_pairs(
      const std::vector<int>& vocab);
  Taxonomy induct(const std::vector<int>& vocab);

  int negatives_per_positive = 3;
  int batch_size = 32;

 private:
  NodeId logit(Tape& tape, PairEncoder& encoder, int x, int y);

  Resources& res_;
  Model& model_;
  Config cfg_;
  Adam adam_;
};

}  // namespace taxorl

#endif
