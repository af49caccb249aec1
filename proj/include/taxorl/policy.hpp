#ifndef TAXORL_POLICY_HPP
#define TAXORL_POLICY_HPP

#include <vector>

#include "taxorl/path_encoder.hpp"
#include "taxorl/rl_env.hpp"

namespace taxorl {

struct ScoredActions {
  std::vector<Action> actions;  // enumeration order from legal_actions()
  NodeId logits = -1;           // [n] tape node
  std::vector<double> probs;    // softmax of logits (values only)
};

// Two-layer feed-forward scorer over stacked pair representations.
class Policy {
 public:
  Policy(Model& model, PairEncoder& encoder)
      : model_(model), encoder_(encoder) {}

  ScoredActions score(Tape& tape, const TaxoEnv& env);
  // Log-probability of the chosen action, kept on the tape for backward.
  NodeId log_prob(Tape& tape, const ScoredActions& scored, int index) const {
    return tape.log_softmax_pick(scored.logits, index);
  }

  static int sample_index(const std::vector<double>& probs, Rng& rng);
  static int greedy_index(const std::vector<double>& probs);  // ties -> lowest

 private:
  Model& model_;
  PairEncoder& encoder_;
};

}  // namespace taxorl

#endif
