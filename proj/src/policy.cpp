#include "taxorl/policy.hpp"

namespace taxorl {

ScoredActions Policy::score(Tape& tape, const TaxoEnv& env) {
  ScoredActions out;
  out.actions = env.legal_actions();
  if (out.actions.empty())
    throw std::logic_error("Policy::score: no legal actions");

  std::vector<NodeId> cols;
  cols.reserve(out.actions.size());
  for (const Action& a : out.actions) {
    int x, y;
    if (a.new_root) {
      // The current root becomes a hyponym of the promoted term.
      x = *env.tree().root();
      y = a.term;
    } else {
      x = a.term;
      y = a.parent;
    }
    cols.push_back(encoder_.pair_representation(tape, x, y));
  }

  NodeId at = tape.stack_cols(cols);  // [rep_dim, n]
  NodeId hidden = tape.relu(
      tape.add_bias_cols(tape.matmul(tape.leaf(model_.w1), at),
                         tape.leaf(model_.b1)));
  NodeId scores = tape.matmul(tape.leaf(model_.w2), hidden);  // [1, n]
  out.logits = tape.add_scalar_all(tape.flatten(scores), tape.leaf(model_.b2));
  out.probs = tape.value(tape.softmax_vec(out.logits)).v;
  return out;
}

int Policy::sample_index(const std::vector<double>& probs, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // guard against rounding
}

int Policy::greedy_index(const std::vector<double>& probs) {
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace taxorl
