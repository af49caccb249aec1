#include "taxorl/pairwise.hpp"

#include <algorithm>
#include <set>

namespace taxorl {

PairwiseTrainer::PairwiseTrainer(Resources& res, Model& model,
                                 const Config& cfg)
    : res_(res), model_(model), cfg_(cfg), adam_(cfg.lr) {}

NodeId PairwiseTrainer::logit(Tape& tape, PairEncoder& encoder, int x, int y) {
  NodeId rep = encoder.pair_representation(tape, x, y);
  NodeId hidden = tape.relu(
      tape.add(tape.matvec(tape.leaf(model_.w1), rep), tape.leaf(model_.b1)));
  return tape.add(tape.matvec(tape.leaf(model_.w2), hidden),
                  tape.leaf(model_.b2));
}

double PairwiseTrainer::train_epoch(Rng& rng) {
  struct Example {
    int x, y;
    double target;
  };
  std::vector<Example> examples;
  for (int ti : res_.train_idx) {
    const Taxonomy& gold = res_.gold[ti];
    const std::vector<int>& vocab = res_.vocabs[ti];
    // Hypernymy detection: every (descendant, ancestor) pair is a positive,
    // not just direct edges. Level disambiguation is left to the decoder.
    std::set<std::pair<int, int>> positives = ancestor_closure(gold);
    for (const auto& [d, a] : positives) {
      examples.push_back({d, a, 1.0});
      for (int k = 0; k < negatives_per_positive; ++k) {
        int x, y;
        int guard = 0;
        do {
          x = vocab[uniform_int(rng, static_cast<int>(vocab.size()))];
          y = vocab[uniform_int(rng, static_cast<int>(vocab.size()))];
        } while ((x == y || positives.count({x, y})) && ++guard < 100);
        if (x != y) examples.push_back({x, y, 0.0});
      }
    }
  }
  shuffle_vec(examples, rng);

  double total = 0;
  std::size_t done = 0;
  while (done < examples.size()) {
    std::size_t end = std::min(done + static_cast<std::size_t>(batch_size),
                               examples.size());
    Tape tape;
    PairEncoder encoder(model_, res_, cfg_.cache);
    std::vector<NodeId> losses;
    for (std::size_t i = done; i < end; ++i) {
      NodeId z = logit(tape, encoder, examples[i].x, examples[i].y);
      losses.push_back(tape.bce_with_logit(z, examples[i].target));
    }
    std::vector<double> coeffs(losses.size(),
                               1.0 / static_cast<double>(losses.size()));
    NodeId loss = tape.scalar_combo(losses, coeffs);
    total += tape.value(loss).v[0] * static_cast<double>(losses.size());
    tape.backward(loss);
    adam_.step(model_.trainable());
    done = end;
  }
  return examples.empty() ? 0.0 : total / static_cast<double>(examples.size());
}

std::vector<double> PairwiseTrainer::train(int epochs, Rng& rng) {
  std::vector<double> losses;
  for (int e = 0; e < epochs; ++e) losses.push_back(train_epoch(rng));
  return losses;
}

double PairwiseTrainer::score_pair(int x, int y) {
  Tape tape;
  PairEncoder encoder(model_, res_, cfg_.cache);
  return tape.value(logit(tape, encoder, x, y)).v[0];
}

std::map<std::pair<int, int>, double> PairwiseTrainer::score_all_pairs(
    const std::vector<int>& vocab) {
  std::map<std::pair<int, int>, double> scores;
  Tape tape;
  PairEncoder encoder(model_, res_, cfg_.cache);
  for (int x : vocab)
    for (int y : vocab) {
      if (x == y) continue;
      scores[{x, y}] = tape.value(logit(tape, encoder, x, y)).v[0];
    }
  return scores;
}

Taxonomy PairwiseTrainer::induct(const std::vector<int>& vocab) {
  std::set<int> vs(vocab.begin(), vocab.end());
  return two_phase_baseline(score_all_pairs(vocab), vs);
}

}  // namespace taxorl
