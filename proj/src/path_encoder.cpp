#include "taxorl/path_encoder.hpp"

namespace taxorl {

NodeId PairEncoder::encode_edge(Tape& tape, const DependencyEdge& e) {
  return tape.concat({tape.lookup(model_.lemma_emb, e.lemma),
                      tape.lookup(model_.pos_emb, e.pos),
                      tape.lookup(model_.dep_emb, e.dep),
                      tape.lookup(model_.dir_emb, e.dir)});
}

NodeId PairEncoder::encode_path(Tape& tape,
                                const std::vector<DependencyEdge>& edges) {
  if (edges.empty())
    throw std::invalid_argument("encode_path: empty edge sequence");
  int hd = model_.cfg().path_dim;
  NodeId h = tape.constant(Tensor({hd}));
  NodeId c = tape.constant(Tensor({hd}));
  NodeId wx = tape.leaf(model_.lstm_wx);
  NodeId wh = tape.leaf(model_.lstm_wh);
  NodeId b = tape.leaf(model_.lstm_b);
  for (const auto& e : edges) {
    NodeId x = encode_edge(tape, e);
    auto [h2, c2] = tape.lstm_step(x, h, c, wx, wh, b);
    h = h2;
    c = c2;
  }
  return h;
}

NodeId PairEncoder::pool_paths(
    Tape& tape, const std::vector<std::pair<NodeId, double>>& paths) {
  if (paths.empty()) return tape.leaf(model_.empty_path);
  std::vector<NodeId> vecs;
  std::vector<double> weights;
  for (const auto& [node, count] : paths) {
    vecs.push_back(node);
    weights.push_back(count);
  }
  return tape.mean_weighted(vecs, weights);
}

NodeId PairEncoder::word_vector(Tape& tape, int id) {
  if (id == kVirtualRootId) return tape.leaf(model_.root_word);
  if (model_.cfg().finetune_word_emb) return tape.lookup(model_.term_emb, id);
  return tape.constant(Tensor::vec(res_.word_vec(id)));
}

NodeId PairEncoder::pair_representation(Tape& tape, int x, int y) {
  if (use_cache_) {
    auto it = cache_.find({x, y});
    if (it != cache_.end()) return it->second;
  }

  std::vector<std::pair<NodeId, double>> encoded;
  auto pit = res_.paths.find({x, y});
  if (pit != res_.paths.end()) {
    for (const auto& rec : pit->second)
      encoded.emplace_back(encode_path(tape, rec.edges),
                           static_cast<double>(rec.count));
  }
  NodeId pooled = pool_paths(tape, encoded);

  std::vector<NodeId> parts = {pooled, word_vector(tape, x),
                               word_vector(tape, y)};

  const Config& cfg = model_.cfg();
  if (cfg.use_surface || cfg.use_fg) {
    FeatureBins bins =
        compute_feature_bins(res_.surface(x), res_.surface(y), res_.candidates,
                             res_.binner, cfg.use_surface, cfg.use_fg);
    std::vector<int> all = bins.surface;
    all.insert(all.end(), bins.fg.begin(), bins.fg.end());
    for (std::size_t i = 0; i < all.size(); ++i)
      parts.push_back(tape.lookup(model_.feat_emb[i], all[i]));
  }

  NodeId rep = tape.concat(parts);
  if (use_cache_) cache_[{x, y}] = rep;
  return rep;
}

}  // namespace taxorl
