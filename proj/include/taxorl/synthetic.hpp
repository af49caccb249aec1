#ifndef TAXORL_SYNTHETIC_HPP
#define TAXORL_SYNTHETIC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "taxorl/data_io.hpp"

namespace taxorl {

struct SyntheticOptions {
  int n_train = 49;
  int n_validation = 10;
  int n_test = 11;
  int min_size = 11;  // sizes drawn uniformly from [min_size, max_size]
  int max_size = 15;
  int embedding_dim = 50;
  std::uint64_t seed = 1;
  // Fraction of children whose surface carries no string cue from the parent.
  double uncued_fraction = 0.25;
  // Probability that a gold ancestor pair appears in the candidate table.
  double candidate_coverage = 0.9;
  // When set, the coverage draw is made once per descendant term instead of
  // per pair: either all of a term's ancestor pairs are attested or none,
  // as with a detector that either knows a term or does not.
  bool candidate_per_term = false;
  // Multiplier on the reversed-direction and unrelated-pair candidate noise.
  double candidate_noise = 1.0;
  // Probability that a gold edge has dependency paths in the corpus.
  double path_coverage = 0.75;
  // Probability that a non-parent ancestor pair carries edge-style paths,
  // making local pairwise decisions ambiguous.
  double ancestor_confusion = 0.35;
  // Likewise for sibling pairs.
  double sibling_confusion = 0.15;
};

struct SyntheticDataset {
  std::vector<TaxonomyFile> taxonomies;
  DatasetSplit split;
  PathMap paths;
  CandidateTable candidates;
  std::map<std::string, std::vector<double>> token_embeddings;
  int embedding_dim = 50;
};

// Deterministic desk-scale benchmark generator: trees of height four whose
// child surfaces mostly extend the parent surface with a modifier token,
// plus consistent candidate frequencies and templated dependency paths.
SyntheticDataset gen_synthetic(const SyntheticOptions& opts);

// Layout: <dir>/taxonomies/*.tsv, embeddings.txt, paths.tsv, candidates.tsv,
// split.tsv.
void write_dataset(const std::string& dir, const SyntheticDataset& ds);

}  // namespace taxorl

#endif
