#ifndef TAXORL_CHECKPOINT_HPP
#define TAXORL_CHECKPOINT_HPP

#include <map>
#include <string>
#include <vector>

#include "taxorl/model.hpp"

namespace taxorl {

struct CheckpointError : std::runtime_error {
  explicit CheckpointError(const std::string& msg, bool version = false)
      : std::runtime_error(msg), version_mismatch(version) {}
  bool version_mismatch;
};

// Versioned text format; parameter values are written as hex floats so a
// save/load round trip is bit-exact.
struct Checkpoint {
  static constexpr int kVersion = 1;

  Config cfg;
  std::vector<std::vector<double>> binner_boundaries;
  int binner_bins = FeatureBinner::kDefaultBins;
  std::vector<std::string> lemma_vocab, pos_vocab, dep_vocab, terms;
  std::map<std::string, Tensor> params;
};

void save_checkpoint(const std::string& path, Model& model,
                     const Resources& res);
Checkpoint load_checkpoint(const std::string& path);

// Copies checkpointed tensors into a freshly constructed model; shapes must
// match (they do when the model was built from checkpoint-derived resources).
void apply_checkpoint_params(const Checkpoint& ck, Model& model);

}  // namespace taxorl

#endif
