#include "taxorl/rl_env.hpp"

#include <algorithm>

namespace taxorl {

TaxoEnv::TaxoEnv(std::vector<int> vocab, Mode mode, Restriction restriction,
                 const Taxonomy* gold,
                 const std::set<std::pair<int, int>>* candidates, Rng& rng,
                 int forced_root)
    : mode_(mode),
      restriction_(restriction),
      gold_(gold),
      candidates_(candidates) {
  if (vocab.size() < 2)
    throw std::invalid_argument("TaxoEnv: vocabulary needs at least 2 terms");
  if (restriction_ != Restriction::NONE && candidates_ == nullptr)
    throw std::invalid_argument("TaxoEnv: restriction requires candidates");
  std::sort(vocab.begin(), vocab.end());
  initial_size_ = static_cast<int>(vocab.size());
  remaining_ = std::move(vocab);
  if (mode_ == Mode::NR) {
    int pick = forced_root >= 0
                   ? forced_root
                   : uniform_int(rng, static_cast<int>(remaining_.size()));
    if (pick >= static_cast<int>(remaining_.size()))
      throw std::invalid_argument("TaxoEnv: forced root index out of range");
    tree_.add_root(remaining_[pick]);
    remaining_.erase(remaining_.begin() + pick);
  } else {
    tree_.has_virtual_root = true;
  }
  refresh_done();
}

bool TaxoEnv::candidate_ok(int child, int parent) const {
  return candidates_->count({child, parent}) > 0;
}

std::vector<Action> TaxoEnv::legal_actions() const {
  if (done_) throw std::logic_error("legal_actions on terminal state");

  auto enumerate = [&](bool restricted) {
    std::vector<Action> out;
    if (mode_ == Mode::RE && tree_.node_count() == 0) {
      // Only the virtual root is attachable while the tree is empty.
      for (int x : remaining_) out.push_back({false, x, kVirtualRootId});
      return out;
    }
    for (int x : remaining_)
      for (int p : tree_.nodes())
        if (!restricted || candidate_ok(x, p)) out.push_back({false, x, p});
    if (mode_ == Mode::NR) {
      // Restriction covers attachments only; promotions always stay legal.
      for (int x : remaining_) out.push_back({true, x, -1});
    }
    // ATTACH rows are already ordered by (term, parent) since remaining_ and
    // tree_.nodes() are sorted; NEW_ROOT rows follow in term order.
    std::stable_sort(out.begin(), out.end(),
                     [](const Action& a, const Action& b) {
                       if (a.new_root != b.new_root) return !a.new_root;
                       if (a.term != b.term) return a.term < b.term;
                       return a.parent < b.parent;
                     });
    return out;
  };

  if (restriction_ == Restriction::NONE) return enumerate(false);
  std::vector<Action> restricted = enumerate(true);
  if (restricted.empty() && restriction_ == Restriction::FULL)
    return enumerate(false);  // full induction restores the whole space
  return restricted;
}

StepOutcome TaxoEnv::step(const Action& a) {
  if (done_) throw std::logic_error("step on terminal state");
  if (!std::binary_search(remaining_.begin(), remaining_.end(), a.term))
    throw std::invalid_argument("step: term not in remaining vocabulary");

  if (a.new_root) {
    if (mode_ != Mode::NR)
      throw std::invalid_argument("step: NEW_ROOT only valid in NR mode");
    tree_.promote_root(a.term);
  } else if (a.parent == kVirtualRootId) {
    if (mode_ != Mode::RE || tree_.node_count() != 0)
      throw std::invalid_argument("step: virtual root not attachable here");
    tree_.add_root(a.term);
  } else {
    if (!tree_.contains(a.parent))
      throw std::invalid_argument("step: parent not on tree");
    tree_.add_edge(a.term, a.parent);
  }
  remaining_.erase(
      std::lower_bound(remaining_.begin(), remaining_.end(), a.term));
  ++step_;

  StepOutcome out;
  if (gold_ != nullptr) {
    double f1 = edge_f1_against(tree_, *gold_);
    out.reward = f1 - last_f1_;
    last_f1_ = f1;
  }
  refresh_done();
  out.done = done_;
  return out;
}

void TaxoEnv::refresh_done() {
  if (remaining_.empty()) {
    done_ = true;
    return;
  }
  if (restriction_ == Restriction::PARTIAL) {
    // Partial induction ends as soon as no candidate action survives.
    done_ = false;
    done_ = legal_actions().empty();
  } else {
    done_ = false;
  }
}

}  // namespace taxorl
