#ifndef TAXORL_RL_ENV_HPP
#define TAXORL_RL_ENV_HPP

#include <set>
#include <vector>

#include "taxorl/config.hpp"
#include "taxorl/model.hpp"
#include "taxorl/rng.hpp"
#include "taxorl/taxonomy.hpp"

namespace taxorl {

struct Action {
  bool new_root = false;
  int term = -1;    // x1, taken from the remaining vocabulary
  int parent = -1;  // x2 for ATTACH; kVirtualRootId at t=0 in RE mode

  bool operator==(const Action&) const = default;
};

struct StepOutcome {
  double reward = 0;
  bool done = false;
};

// The taxonomy-construction MDP. One instance per episode; not shareable
// mid-episode. Rewards are Edge-F1 deltas against the gold tree (zero when
// no gold is supplied, i.e. at inference).
class TaxoEnv {
 public:
  // forced_root picks the NR initial root by index into the sorted
  // vocabulary instead of drawing it; -1 draws from rng.
  TaxoEnv(std::vector<int> vocab, Mode mode, Restriction restriction,
          const Taxonomy* gold, const std::set<std::pair<int, int>>* candidates,
          Rng& rng, int forced_root = -1);

  // Fixed order: ATTACH actions by (term, parent), then NEW_ROOT by term.
  std::vector<Action> legal_actions() const;
  StepOutcome step(const Action& a);

  const std::vector<int>& remaining() const { return remaining_; }
  const Taxonomy& tree() const { return tree_; }
  bool done() const { return done_; }
  int step_index() const { return step_; }
  int initial_vocab_size() const { return initial_size_; }
  Mode mode() const { return mode_; }

 private:
  bool candidate_ok(int child, int parent) const;
  void refresh_done();

  Mode mode_;
  Restriction restriction_;
  const Taxonomy* gold_;
  const std::set<std::pair<int, int>>* candidates_;
  std::vector<int> remaining_;  // sorted
  Taxonomy tree_;
  double last_f1_ = 0;
  int step_ = 0;
  int initial_size_ = 0;
  bool done_ = false;
};

}  // namespace taxorl

#endif
