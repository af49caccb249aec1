#include <doctest.h>

#include "taxorl/rl_env.hpp"

using namespace taxorl;

namespace {

Taxonomy chain_gold() {
  Taxonomy g;
  g.add_root(0);
  g.add_edge(1, 0);
  g.add_edge(2, 1);
  g.add_edge(3, 2);
  return g;
}

}  // namespace

TEST_CASE("RE episode runs |V0| steps and keeps the count invariant") {
  Taxonomy gold = chain_gold();
  Rng rng(1);
  TaxoEnv env({0, 1, 2, 3}, Mode::RE, Restriction::NONE, &gold, nullptr, rng);
  CHECK(env.initial_vocab_size() == 4);
  int steps = 0;
  while (!env.done()) {
    CHECK(static_cast<int>(env.tree().node_count() + env.remaining().size()) ==
          4);
    auto actions = env.legal_actions();
    REQUIRE_FALSE(actions.empty());
    if (steps == 0)
      for (const auto& a : actions) CHECK(a.parent == kVirtualRootId);
    env.step(actions[uniform_int(rng, static_cast<int>(actions.size()))]);
    ++steps;
  }
  CHECK(steps == 4);
  CHECK(env.tree().node_count() == 4);
  CHECK_FALSE(env.tree().root() == std::nullopt);
}

TEST_CASE("NR episode runs |V0|-1 steps and can promote a new root") {
  Taxonomy gold = chain_gold();
  Rng rng(3);
  TaxoEnv env({0, 1, 2, 3}, Mode::NR, Restriction::NONE, &gold, nullptr, rng);
  CHECK(env.tree().node_count() == 1);  // random initial root
  int steps = 0;
  bool saw_new_root_action = false;
  while (!env.done()) {
    auto actions = env.legal_actions();
    // Action space |V_t|*|T_t| + |V_t| in NR mode.
    std::size_t vt = env.remaining().size();
    std::size_t tt = env.tree().node_count();
    CHECK(actions.size() == vt * tt + vt);
    for (const auto& a : actions) saw_new_root_action |= a.new_root;
    env.step(actions[uniform_int(rng, static_cast<int>(actions.size()))]);
    ++steps;
  }
  CHECK(steps == 3);
  CHECK(saw_new_root_action);
}

TEST_CASE("forced initial root is honored in NR mode") {
  Rng rng(1);
  TaxoEnv env({5, 9, 2, 7}, Mode::NR, Restriction::NONE, nullptr, nullptr, rng,
              2);  // sorted vocab 2,5,7,9 -> index 2 is 7
  CHECK(env.tree().root() == 7);
}

TEST_CASE("action enumeration is sorted: attaches then promotions") {
  Rng rng(1);
  TaxoEnv env({0, 1, 2, 3}, Mode::NR, Restriction::NONE, nullptr, nullptr, rng,
              0);
  auto actions = env.legal_actions();
  bool seen_promo = false;
  Action prev;
  bool first = true;
  for (const auto& a : actions) {
    if (a.new_root) seen_promo = true;
    else CHECK_FALSE(seen_promo);  // promotions come last
    if (!first && a.new_root == prev.new_root) {
      CHECK(std::pair(a.term, a.parent) >= std::pair(prev.term, prev.parent));
    }
    prev = a;
    first = false;
  }
}

TEST_CASE("rewards telescope to final edge F1 at gamma = 1") {
  Taxonomy gold = chain_gold();
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    TaxoEnv env({0, 1, 2, 3}, Mode::NR, Restriction::NONE, &gold, nullptr,
                rng);
    double total = 0;
    while (!env.done()) {
      auto actions = env.legal_actions();
      total += env.step(actions[uniform_int(rng, static_cast<int>(actions.size()))])
                   .reward;
    }
    MetricReport m = evaluate(env.tree(), gold);
    CHECK(total == doctest::Approx(m.edge_f1).epsilon(1e-12));
  }
}

TEST_CASE("partial restriction stops early and leaves terms unattached") {
  Taxonomy gold = chain_gold();
  std::set<std::pair<int, int>> candidates = {{1, 0}};  // only 1->0 allowed
  Rng rng(1);
  TaxoEnv env({0, 1, 2, 3}, Mode::RE, Restriction::PARTIAL, &gold, &candidates,
              rng);
  auto first = env.legal_actions();
  REQUIRE(first.size() == 4);  // virtual-root attachment ignores restriction
  env.step(first[0]);          // term 0 becomes the real root
  auto actions = env.legal_actions();
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].term == 1);
  CHECK(actions[0].parent == 0);
  auto out = env.step(actions[0]);
  CHECK(out.done);  // nothing else is allowed
  CHECK(env.remaining().size() == 2);
}

TEST_CASE("promotions stay legal under partial restriction") {
  Taxonomy gold = chain_gold();
  std::set<std::pair<int, int>> candidates = {{1, 0}};
  Rng rng(1);
  TaxoEnv env({0, 1, 2, 3}, Mode::NR, Restriction::PARTIAL, &gold, &candidates,
              rng, 0);  // root = 0
  auto actions = env.legal_actions();
  // ATTACH(1,0) survives the table; the three promotions are unrestricted.
  REQUIRE(actions.size() == 4);
  CHECK_FALSE(actions[0].new_root);
  for (int i = 1; i < 4; ++i) CHECK(actions[i].new_root);
  while (!env.done()) env.step(env.legal_actions()[0]);
  CHECK(env.tree().node_count() == 4);  // promotions attach everything
}

TEST_CASE("full restriction falls back to the whole action space") {
  std::set<std::pair<int, int>> candidates = {{1, 0}};
  Rng rng(1);
  TaxoEnv env({0, 1, 2, 3}, Mode::RE, Restriction::FULL, nullptr, &candidates,
              rng);
  env.step(env.legal_actions()[0]);  // term 0 under the virtual root
  env.step(env.legal_actions()[0]);  // consume the only candidate
  auto actions = env.legal_actions();
  CHECK_FALSE(actions.empty());  // restored
  while (!env.done()) env.step(env.legal_actions()[0]);
  CHECK(env.tree().node_count() == 4);  // everything attached
}

TEST_CASE("invalid actions are rejected") {
  Rng rng(1);
  TaxoEnv env({0, 1, 2}, Mode::NR, Restriction::NONE, nullptr, nullptr, rng, 0);
  CHECK_THROWS_AS(env.step({false, 99, 0}), std::invalid_argument);
  CHECK_THROWS_AS(env.step({false, 1, 99}), std::invalid_argument);
  Rng rng2(1);
  TaxoEnv re({0, 1, 2}, Mode::RE, Restriction::NONE, nullptr, nullptr, rng2);
  CHECK_THROWS_AS(re.step({true, 1, -1}), std::invalid_argument);
}
