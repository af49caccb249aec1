#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "taxorl/pairwise.hpp"
#include "taxorl/trainer.hpp"
#include "fixtures.hpp"

using namespace taxorl;
using taxorl::tests::TinyWorld;
using taxorl::tests::tiny_config;
namespace fs = std::filesystem;

TEST_CASE("discounted returns match the closed form") {
  auto v = discounted_returns({1.0, 2.0, 3.0}, 0.5);
  CHECK(v[2] == doctest::Approx(3.0));
  CHECK(v[1] == doctest::Approx(2.0 + 0.5 * 3.0));
  CHECK(v[0] == doctest::Approx(1.0 + 0.5 * (2.0 + 0.5 * 3.0)));
  auto g1 = discounted_returns({0.25, 0.25, 0.5}, 1.0);
  CHECK(g1[0] == doctest::Approx(1.0));
}

TEST_CASE("baseline is a moving average seeded by the first value") {
  BaselineState b;
  b.decay = 0.9;
  b.update(2.0);
  CHECK(b.value == 2.0);
  b.update(1.0);
  CHECK(b.value == doctest::Approx(0.9 * 2.0 + 0.1 * 1.0));
}

TEST_CASE("episodes are deterministic given the seed") {
  TinyWorld w;
  Config cfg = tiny_config();
  Resources res = w.resources(cfg);
  Rng rng(1);
  Model model(cfg, res, rng);
  Trainer trainer(res, model, cfg);

  auto run = [&](bool cache) {
    Config c = cfg;
    c.cache = cache;
    Trainer t(res, model, c);
    Tape tape;
    PairEncoder enc(model, res, cache);
    Rng ep_rng(77);
    return t.run_episode(tape, enc, 0, ep_rng, true);
  };
  Trajectory a = run(true);
  Trajectory b = run(true);
  CHECK(a.rewards == b.rewards);
  CHECK(a.final_tree.edges() == b.final_tree.edges());
}

TEST_CASE("representation cache does not change episode outcomes") {
  TinyWorld w;
  Config cfg = tiny_config();
  Resources res = w.resources(cfg);
  Rng rng(1);
  Model model(cfg, res, rng);
  Trainer trainer(res, model, cfg);

  for (int seed = 0; seed < 10; ++seed) {
    Tape t1, t2;
    PairEncoder cached(model, res, true);
    PairEncoder plain(model, res, false);
    Rng r1(seed), r2(seed);
    Trajectory a = trainer.run_episode(t1, cached, 0, r1, true);
    Trajectory b = trainer.run_episode(t2, plain, 0, r2, true);
    CHECK(a.rewards == b.rewards);
    CHECK(a.final_tree.edges() == b.final_tree.edges());
    REQUIRE(a.log_probs.size() == b.log_probs.size());
    for (std::size_t i = 0; i < a.log_probs.size(); ++i)
      CHECK(t1.value(a.log_probs[i]).v[0] == t2.value(b.log_probs[i]).v[0]);
  }
}

TEST_CASE("reinforce update moves parameters and keeps the loss finite") {
  TinyWorld w;
  Config cfg = tiny_config();
  cfg.rollouts = 4;
  Resources res = w.resources(cfg);
  Rng rng(1);
  Model model(cfg, res, rng);
  Tensor w1_before = model.w1.value;
  Trainer trainer(res, model, cfg);
  Rng train_rng(5);
  double ret = trainer.reinforce_update(0, train_rng);
  CHECK(std::isfinite(ret));
  CHECK(ret >= 0.0);
  CHECK(ret <= 1.0);
  CHECK(model.w1.value.v != w1_before.v);
  CHECK(trainer.baseline().value == doctest::Approx(ret));
}

TEST_CASE("short training on the tiny fixture improves greedy F1") {
  TinyWorld w;
  Config cfg = tiny_config();
  cfg.epochs = 30;
  cfg.rollouts = 5;
  Resources res = w.resources(cfg);
  Rng rng(1);
  Model model(cfg, res, rng);
  Trainer trainer(res, model, cfg);
  MetricReport before = trainer.evaluate_split(res.train_idx);
  TrainResult result = trainer.train("");
  MetricReport after = trainer.evaluate_split(res.train_idx);
  CHECK(after.edge_f1 >= before.edge_f1);
  CHECK(result.best_val_edge_f1 >= before.edge_f1);
}

TEST_CASE("checkpoint round trip reproduces greedy inductions") {
  TinyWorld w;
  Config cfg = tiny_config();
  cfg.epochs = 3;
  cfg.rollouts = 2;
  Resources res = w.resources(cfg);
  Rng rng(1);
  Model model(cfg, res, rng);
  Trainer trainer(res, model, cfg);
  Rng train_rng(9);
  for (int i = 0; i < 3; ++i) trainer.reinforce_update(0, train_rng);

  fs::path ck = fs::temp_directory_path() / "taxorl_test_ck.txt";
  save_checkpoint(ck.string(), model, res);
  Checkpoint loaded = load_checkpoint(ck.string());

  ResourceOverrides ov;
  ov.lemma_vocab = &loaded.lemma_vocab;
  ov.pos_vocab = &loaded.pos_vocab;
  ov.dep_vocab = &loaded.dep_vocab;
  ov.binner_boundaries = &loaded.binner_boundaries;
  ov.binner_bins = loaded.binner_bins;
  Resources res2 = build_resources(w.taxonomies, w.embeddings, w.paths,
                                   w.candidates, w.split, loaded.cfg, &ov);
  Rng rng2(1);
  Model model2(loaded.cfg, res2, rng2);
  apply_checkpoint_params(loaded, model2);
  Trainer trainer2(res2, model2, loaded.cfg);

  Rng ra(4), rb(4);
  Taxonomy t1 = trainer.greedy_induct(res.vocabs[0], ra);
  Taxonomy t2 = trainer2.greedy_induct(res2.vocabs[0], rb);
  CHECK(t1.edges() == t2.edges());
  fs::remove(ck);

  // Bit-exact parameter round trip.
  for (Parameter* p : model.trainable()) {
    Parameter* q = model2.find(p->name);
    REQUIRE(q != nullptr);
    CHECK(p->value.v == q->value.v);
  }
}

TEST_CASE("corrupt checkpoint version is reported as such") {
  fs::path ck = fs::temp_directory_path() / "taxorl_test_badck.txt";
  {
    std::ofstream out(ck);
    out << "taxorl-checkpoint v99\n";
  }
  try {
    load_checkpoint(ck.string());
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    CHECK(e.version_mismatch);
  }
  fs::remove(ck);
}

TEST_CASE("pairwise classifier separates the tiny fixture") {
  TinyWorld w;
  Config cfg = tiny_config();
  Resources res = w.resources(cfg);
  Rng rng(1);
  Model model(cfg, res, rng);
  PairwiseTrainer pw(res, model, cfg);
  Rng train_rng(3);
  auto losses = pw.train(40, train_rng);
  CHECK(losses.back() < losses.front());
  Taxonomy t = pw.induct(res.vocabs[0]);
  CHECK(t.node_count() == res.vocabs[0].size());
}
