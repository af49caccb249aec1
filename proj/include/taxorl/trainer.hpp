#ifndef TAXORL_TRAINER_HPP
#define TAXORL_TRAINER_HPP

#include <memory>
#include <string>
#include <vector>

#include "taxorl/adam.hpp"
#include "taxorl/checkpoint.hpp"
#include "taxorl/policy.hpp"

namespace taxorl {

// v_i = r_i + gamma * v_{i+1}, computed by backward recursion.
std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double gamma);

struct BaselineState {
  double decay = 0.95;
  double value = 0;
  bool initialized = false;

  void update(double episode_return) {
    if (!initialized) {
      value = episode_return;
      initialized = true;
    } else {
      value = decay * value + (1.0 - decay) * episode_return;
    }
  }
};

struct Trajectory {
  std::vector<NodeId> log_probs;  // valid only for the tape that built them
  std::vector<double> rewards;
  Taxonomy final_tree;

  double undiscounted_return() const {
    double s = 0;
    for (double r : rewards) s += r;
    return s;
  }
};

struct EpochLog {
  int epoch = 0;
  std::string split;
  MetricReport metrics;
};

struct TrainResult {
  std::vector<EpochLog> log;
  MetricReport test_metrics;
  int best_epoch = 0;
  double best_val_edge_f1 = 0;
  std::string best_checkpoint_path;
};

class Trainer {
 public:
  Trainer(Resources& res, Model& model, const Config& cfg);

  // One sampled episode on the given tape. The representation cache is
  // per-episode; it is cleared before and after.
  Trajectory run_episode(Tape& tape, PairEncoder& encoder, int tax_idx,
                         Rng& rng, bool sample = true);

  // K rollouts, one accumulated backward, one Adam step, baseline update.
  // Returns the mean undiscounted return across rollouts.
  double reinforce_update(int tax_idx, Rng& rng);

  // Greedy induction with no gold feedback.
  Taxonomy greedy_induct(const std::vector<int>& vocab, Rng& rng);

  // Macro-averaged greedy metrics over a list of taxonomy indices.
  MetricReport evaluate_split(const std::vector<int>& indices);

  // Full loop: per-epoch shuffled training pass, validation selection by
  // Edge-F1, final test evaluation from the best checkpoint. out_dir may be
  // empty (no files written, best model kept in memory).
  TrainResult train(const std::string& out_dir);

  BaselineState& baseline() { return baseline_; }
  Adam& optimizer() { return adam_; }

 private:
  Rng eval_rng(int tax_idx) const;

  Resources& res_;
  Model& model_;
  Config cfg_;
  Adam adam_;
  BaselineState baseline_;
};

}  // namespace taxorl

#endif
