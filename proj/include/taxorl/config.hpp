#ifndef TAXORL_CONFIG_HPP
#define TAXORL_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace taxorl {

enum class Mode { RE, NR };
enum class Restriction { NONE, PARTIAL, FULL };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);
std::string restriction_name(Restriction r);
Restriction parse_restriction(const std::string& s);

struct Config {
  // Representation dims.
  int word_dim = 50;
  int lemma_dim = 50;
  int pos_dim = 4;
  int dep_dim = 5;
  int dir_dim = 1;
  int path_dim = 60;   // LSTM hidden size = path representation size
  int feat_dim = 10;   // per-feature bin embedding size
  int feat_bins = 8;
  int hidden_dim = 100;
  int path_cap = 200;

  // Training.
  Mode mode = Mode::NR;
  Restriction restriction = Restriction::NONE;
  double gamma = 0.4;
  int rollouts = 10;
  double lr = 1e-3;
  int epochs = 50;
  std::uint64_t seed = 1;
  double baseline_decay = 0.95;
  bool use_surface = true;
  bool use_fg = true;
  bool cache = true;
  bool finetune_word_emb = false;  // word vectors frozen by default
  bool sweep_nr_roots = false;     // NR inference: try every initial root

  int edge_dim() const { return lemma_dim + pos_dim + dep_dim + dir_dim; }
  int feat_total_dim() const {
    return ((use_surface ? 7 : 0) + (use_fg ? 2 : 0)) * feat_dim;
  }
  int rep_dim() const { return path_dim + 2 * word_dim + feat_total_dim(); }

  void validate() const {
    if (gamma < 0 || gamma > 1) throw std::invalid_argument("gamma must be in [0,1]");
    if (rollouts < 1) throw std::invalid_argument("rollouts must be >= 1");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (word_dim < 1 || path_dim < 1 || hidden_dim < 1 || feat_dim < 1 ||
        feat_bins < 2)
      throw std::invalid_argument("model dimensions must be positive");
  }
};

}  // namespace taxorl

#endif
