#ifndef TAXORL_MODEL_HPP
#define TAXORL_MODEL_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "taxorl/config.hpp"
#include "taxorl/data_io.hpp"
#include "taxorl/features.hpp"
#include "taxorl/rng.hpp"
#include "taxorl/tape.hpp"
#include "taxorl/taxonomy.hpp"

namespace taxorl {

// Sentinel term id for the RE-mode virtual root.
inline constexpr int kVirtualRootId = -1;

struct DependencyEdge {
  int lemma = 0, pos = 0, dep = 0, dir = 0;
};

struct IndexedPathRecord {
  std::vector<DependencyEdge> edges;
  long long count = 1;
};

// Everything loaded, indexed and frozen before training starts.
struct Resources {
  Config cfg;

  std::vector<std::string> terms;  // id -> surface
  std::unordered_map<std::string, int> term_ids;
  std::vector<std::vector<double>> word_vecs;  // frozen distributional vectors

  std::map<std::pair<int, int>, std::vector<IndexedPathRecord>> paths;
  CandidateTable candidates;
  std::set<std::pair<int, int>> candidate_pairs;  // id pairs, for restriction
  FeatureBinner binner;

  std::vector<std::string> lemma_vocab, pos_vocab, dep_vocab;  // [0] = UNK
  std::unordered_map<std::string, int> lemma_ids, pos_ids, dep_ids;
  // Pre-trained vector per lemma where the token is covered, else empty;
  // used to seed the trainable lemma embeddings.
  std::vector<std::vector<double>> lemma_init;

  std::vector<std::string> tax_names;
  std::vector<Taxonomy> gold;
  std::vector<std::vector<int>> vocabs;  // per taxonomy, sorted term ids
  std::vector<int> train_idx, val_idx, test_idx;

  const std::string& surface(int id) const;
  const std::vector<double>& word_vec(int id) const;
};

// Checkpoint-restore hook: fixes the component vocabularies and bin
// boundaries instead of deriving them from the data.
struct ResourceOverrides {
  const std::vector<std::string>* lemma_vocab = nullptr;
  const std::vector<std::string>* pos_vocab = nullptr;
  const std::vector<std::string>* dep_vocab = nullptr;
  const std::vector<std::vector<double>>* binner_boundaries = nullptr;
  int binner_bins = 0;
};

Resources build_resources(const std::vector<TaxonomyFile>& taxonomies,
                          const EmbeddingTable& embeddings,
                          const PathMap& path_map,
                          const CandidateTable& candidates,
                          const DatasetSplit& split, const Config& cfg,
                          const ResourceOverrides* overrides = nullptr);

// All learnable parameters. Construction order is fixed so that seeded
// initialization is reproducible.
class Model {
 public:
  Model(const Config& cfg, const Resources& res, Rng& rng);

  Parameter lemma_emb, pos_emb, dep_emb, dir_emb;
  Parameter lstm_wx, lstm_wh, lstm_b;
  Parameter empty_path;
  Parameter root_word;  // RE-mode virtual root word embedding
  Parameter term_emb;   // only allocated when cfg.finetune_word_emb
  std::vector<Parameter> feat_emb;  // one table per enabled feature
  std::vector<std::string> feat_names;
  Parameter w1, b1, w2, b2;  // scoring head

  const Config& cfg() const { return cfg_; }
  std::vector<Parameter*> trainable();
  Parameter* find(const std::string& name);
  void zero_all_grads();

 private:
  Config cfg_;
};

}  // namespace taxorl

#endif
