#ifndef TAXORL_TESTS_FIXTURES_HPP
#define TAXORL_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "taxorl/model.hpp"

namespace taxorl::tests {

// Config scaled down so episodes and gradient checks run in milliseconds.
inline Config tiny_config() {
  Config cfg;
  cfg.word_dim = 4;
  cfg.lemma_dim = 4;
  cfg.pos_dim = 2;
  cfg.dep_dim = 2;
  cfg.dir_dim = 1;
  cfg.path_dim = 5;
  cfg.feat_dim = 3;
  cfg.feat_bins = 4;
  cfg.hidden_dim = 6;
  return cfg;
}

// One four-term taxonomy (root r, children "a r"/"b r", grandchild "c a r")
// with a couple of paths and candidate counts; enough structure to exercise
// every representation component.
struct TinyWorld {
  std::vector<TaxonomyFile> taxonomies;
  EmbeddingTable embeddings;
  PathMap paths;
  CandidateTable candidates;
  DatasetSplit split;

  TinyWorld() : embeddings(4) {
    TaxonomyFile tf;
    tf.name = "tiny";
    tf.edges = {{"a r", "r"}, {"b r", "r"}, {"c a r", "a r"}};
    taxonomies.push_back(tf);

    int k = 0;
    for (const std::string& tok : {"a", "b", "c", "r"}) {
      std::vector<double> v(4);
      for (int i = 0; i < 4; ++i) v[i] = 0.1 * (++k) + 0.01 * i;
      embeddings.insert(tok, v);
    }

    paths[{"a r", "r"}] = {{{{"be", "VERB", "ROOT", '^'},
                             {"a", "DET", "det", '>'}},
                            3}};
    paths[{"c a r", "a r"}] = {{{{"such", "ADJ", "amod", '<'},
                                 {"as", "ADP", "prep", '<'}},
                                2},
                               {{{"and", "CCONJ", "cc", '<'}}, 1}};

    candidates.insert("a r", "r", 10);
    candidates.insert("b r", "r", 8);
    candidates.insert("c a r", "a r", 6);
    candidates.insert("c a r", "r", 5);

    split.train = {"tiny"};
  }

  Resources resources(const Config& cfg) const {
    return build_resources(taxonomies, embeddings, paths, candidates, split,
                           cfg);
  }
};

}  // namespace taxorl::tests

#endif
