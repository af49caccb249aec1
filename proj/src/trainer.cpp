#include "taxorl/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace taxorl {

std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double gamma) {
  std::vector<double> v(rewards.size(), 0.0);
  double acc = 0;
  for (int i = static_cast<int>(rewards.size()) - 1; i >= 0; --i) {
    acc = rewards[i] + gamma * acc;
    v[i] = acc;
  }
  return v;
}

Trainer::Trainer(Resources& res, Model& model, const Config& cfg)
    : res_(res), model_(model), cfg_(cfg), adam_(cfg.lr) {
  baseline_.decay = cfg.baseline_decay;
}

Trajectory Trainer::run_episode(Tape& tape, PairEncoder& encoder, int tax_idx,
                                Rng& rng, bool sample) {
  TaxoEnv env(res_.vocabs[tax_idx], cfg_.mode, cfg_.restriction,
              &res_.gold[tax_idx], &res_.candidate_pairs, rng);
  encoder.clear_cache();
  Policy policy(model_, encoder);
  Trajectory traj;
  while (!env.done()) {
    ScoredActions scored = policy.score(tape, env);
    int idx = sample ? Policy::sample_index(scored.probs, rng)
                     : Policy::greedy_index(scored.probs);
    traj.log_probs.push_back(policy.log_prob(tape, scored, idx));
    StepOutcome out = env.step(scored.actions[idx]);
    traj.rewards.push_back(out.reward);
  }
  traj.final_tree = env.tree();
  encoder.clear_cache();
  return traj;
}

double Trainer::reinforce_update(int tax_idx, Rng& rng) {
  int k = cfg_.rollouts;
  double b = baseline_.initialized ? baseline_.value : 0.0;
  double mean_return = 0;
  for (int r = 0; r < k; ++r) {
    Tape tape;
    PairEncoder encoder(model_, res_, cfg_.cache);
    Trajectory traj = run_episode(tape, encoder, tax_idx, rng, true);
    std::vector<double> v = discounted_returns(traj.rewards, cfg_.gamma);
    std::vector<double> coeffs(v.size());
    for (std::size_t t = 0; t < v.size(); ++t)
      coeffs[t] = -(v[t] - b) / static_cast<double>(k);
    NodeId loss = tape.scalar_combo(traj.log_probs, coeffs);
    double loss_val = tape.value(loss).v[0];
    if (!std::isfinite(loss_val))
      throw std::runtime_error(
          "reinforce_update: non-finite loss on taxonomy '" +
          res_.tax_names[tax_idx] + "' (rollout " + std::to_string(r) +
          ", loss=" + std::to_string(loss_val) + ")");
    tape.backward(loss);
    mean_return += traj.undiscounted_return() / k;
  }
  adam_.step(model_.trainable());
  baseline_.update(mean_return);
  return mean_return;
}

Taxonomy Trainer::greedy_induct(const std::vector<int>& vocab, Rng& rng) {
  auto run_one = [&](Rng& r, double* total_logp) {
    Tape tape;
    PairEncoder encoder(model_, res_, cfg_.cache);
    TaxoEnv env(vocab, cfg_.mode, cfg_.restriction, nullptr,
                &res_.candidate_pairs, r);
    Policy policy(model_, encoder);
    double lp = 0;
    while (!env.done()) {
      ScoredActions scored = policy.score(tape, env);
      int idx = Policy::greedy_index(scored.probs);
      lp += std::log(std::max(scored.probs[idx], 1e-300));
      env.step(scored.actions[idx]);
    }
    if (total_logp) *total_logp = lp;
    return env.tree();
  };

  if (cfg_.mode == Mode::NR && cfg_.sweep_nr_roots) {
    // Try every initial root, keep the highest-likelihood greedy tree.
    Taxonomy best;
    double best_lp = -1e300;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      Tape tape;
      PairEncoder encoder(model_, res_, cfg_.cache);
      Rng unused(0);  // greedy episodes never draw from it
      TaxoEnv env(vocab, cfg_.mode, cfg_.restriction, nullptr,
                  &res_.candidate_pairs, unused, static_cast<int>(i));
      Policy policy(model_, encoder);
      double lp = 0;
      while (!env.done()) {
        ScoredActions scored = policy.score(tape, env);
        int idx = Policy::greedy_index(scored.probs);
        lp += std::log(std::max(scored.probs[idx], 1e-300));
        env.step(scored.actions[idx]);
      }
      if (lp > best_lp) {
        best_lp = lp;
        best = env.tree();
      }
    }
    return best;
  }
  return run_one(rng, nullptr);
}

Rng Trainer::eval_rng(int tax_idx) const {
  return Rng(cfg_.seed * 0x9E3779B97F4A7C15ULL +
             1000003ULL * static_cast<std::uint64_t>(tax_idx + 1));
}

MetricReport Trainer::evaluate_split(const std::vector<int>& indices) {
  MetricReport avg;
  if (indices.empty()) return avg;
  for (int idx : indices) {
    Rng r = eval_rng(idx);
    Taxonomy pred = greedy_induct(res_.vocabs[idx], r);
    MetricReport m = evaluate(pred, res_.gold[idx]);
    avg.ancestor_precision += m.ancestor_precision;
    avg.ancestor_recall += m.ancestor_recall;
    avg.ancestor_f1 += m.ancestor_f1;
    avg.edge_precision += m.edge_precision;
    avg.edge_recall += m.edge_recall;
    avg.edge_f1 += m.edge_f1;
  }
  double n = static_cast<double>(indices.size());
  avg.ancestor_precision /= n;
  avg.ancestor_recall /= n;
  avg.ancestor_f1 /= n;
  avg.edge_precision /= n;
  avg.edge_recall /= n;
  avg.edge_f1 /= n;
  return avg;
}

namespace {

void append_metric_line(std::ofstream& out, const EpochLog& e) {
  if (!out.is_open()) return;
  out.precision(6);
  out << std::fixed << e.epoch << '\t' << e.split << '\t'
      << e.metrics.ancestor_precision << '\t' << e.metrics.ancestor_recall
      << '\t' << e.metrics.ancestor_f1 << '\t' << e.metrics.edge_precision
      << '\t' << e.metrics.edge_recall << '\t' << e.metrics.edge_f1 << '\n';
  out.flush();
}

}  // namespace

TrainResult Trainer::train(const std::string& out_dir) {
  TrainResult result;
  Rng rng(cfg_.seed);

  std::ofstream log_file;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    log_file.open(fs::path(out_dir) / "metrics.tsv");
    log_file << "epoch\tsplit\tPa\tRa\tF1a\tPe\tRe\tF1e\n";
  }

  // Model selection runs on validation when present, else on train.
  const std::vector<int>& select_idx =
      res_.val_idx.empty() ? res_.train_idx : res_.val_idx;
  std::string select_name = res_.val_idx.empty() ? "train" : "validation";

  std::map<std::string, Tensor> best_params;
  double best_f1e = -1;
  for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
    std::vector<int> order = res_.train_idx;
    shuffle_vec(order, rng);
    for (int ti : order) reinforce_update(ti, rng);

    MetricReport val = evaluate_split(select_idx);
    EpochLog el{epoch, select_name, val};
    result.log.push_back(el);
    append_metric_line(log_file, el);

    if (val.edge_f1 > best_f1e) {
      best_f1e = val.edge_f1;
      result.best_epoch = epoch;
      best_params.clear();
      for (Parameter* p : model_.trainable()) best_params[p->name] = p->value;
    }
  }
  result.best_val_edge_f1 = best_f1e;

  // Restore the best snapshot for final evaluation and checkpointing.
  for (Parameter* p : model_.trainable()) {
    auto it = best_params.find(p->name);
    if (it != best_params.end()) p->value = it->second;
    p->zero_grad();
  }
  if (!out_dir.empty()) {
    result.best_checkpoint_path =
        (fs::path(out_dir) / "best.ckpt").string();
    save_checkpoint(result.best_checkpoint_path, model_, res_);
  }

  if (!res_.test_idx.empty()) {
    result.test_metrics = evaluate_split(res_.test_idx);
    EpochLog el{cfg_.epochs, "test", result.test_metrics};
    result.log.push_back(el);
    append_metric_line(log_file, el);
  }
  return result;
}

}  // namespace taxorl
