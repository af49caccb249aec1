#include <doctest.h>

#include "taxorl/taxonomy.hpp"

using namespace taxorl;

namespace {

Taxonomy chain(const std::vector<int>& ids) {
  Taxonomy t;
  t.add_root(ids[0]);
  for (std::size_t i = 1; i < ids.size(); ++i) t.add_edge(ids[i], ids[i - 1]);
  return t;
}

}  // namespace

TEST_CASE("structural rules") {
  Taxonomy t;
  t.add_root(1);
  CHECK_THROWS_AS(t.add_root(2), StructuralError);
  t.add_edge(2, 1);
  CHECK_THROWS_AS(t.add_edge(2, 1), StructuralError);   // already attached
  CHECK_THROWS_AS(t.add_edge(3, 99), StructuralError);  // parent absent
  t.promote_root(5);
  CHECK(t.root() == 5);
  CHECK(t.parent_map().at(1) == 5);
  CHECK(t.edge_count() == 2);
}

TEST_CASE("ancestor closure of a chain is all ordered pairs") {
  Taxonomy t = chain({0, 1, 2, 3});
  auto c = ancestor_closure(t);
  CHECK(c.size() == 6);
  CHECK(c.count({3, 0}) == 1);
  CHECK(c.count({0, 3}) == 0);
}

TEST_CASE("metrics on the hand-derived example") {
  // gold: r->a, r->b, a->c   predicted: r->a, a->b, a->c
  Taxonomy gold, pred;
  gold.add_root(0);
  gold.add_edge(1, 0);
  gold.add_edge(2, 0);
  gold.add_edge(3, 1);
  pred.add_root(0);
  pred.add_edge(1, 0);
  pred.add_edge(2, 1);
  pred.add_edge(3, 1);

  MetricReport m = evaluate(pred, gold);
  CHECK(m.ancestor_precision == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.ancestor_recall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.ancestor_f1 == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(m.edge_precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.edge_recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.edge_f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("identical trees score 1.0 everywhere") {
  Taxonomy t = chain({2, 7, 4, 9});
  MetricReport m = evaluate(t, t);
  CHECK(m.ancestor_f1 == 1.0);
  CHECK(m.edge_f1 == 1.0);
}

TEST_CASE("partial prediction recall uses the full gold edge set") {
  Taxonomy gold = chain({0, 1, 2, 3});
  Taxonomy partial = chain({0, 1});
  CHECK(edge_f1_against(partial, gold) ==
        doctest::Approx(2.0 * 1.0 * (1.0 / 3.0) / (1.0 + 1.0 / 3.0)));
  Taxonomy rootonly;
  rootonly.add_root(0);
  CHECK(edge_f1_against(rootonly, gold) == 0.0);
}

TEST_CASE("evaluate rejects an edgeless gold tree") {
  Taxonomy gold, pred;
  gold.add_root(0);
  pred.add_root(0);
  CHECK_THROWS_AS(evaluate(pred, gold), std::invalid_argument);
}
