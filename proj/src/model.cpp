#include "taxorl/model.hpp"

#include <algorithm>
#include <cmath>

namespace taxorl {

const std::string& Resources::surface(int id) const {
  static const std::string empty;
  if (id == kVirtualRootId) return empty;
  return terms.at(id);
}

const std::vector<double>& Resources::word_vec(int id) const {
  return word_vecs.at(id);
}

namespace {

int index_of(const std::unordered_map<std::string, int>& ids,
             const std::string& tok) {
  auto it = ids.find(tok);
  return it == ids.end() ? 0 : it->second;  // 0 = UNK
}

void build_vocab(const std::set<std::string>& seen,
                 std::vector<std::string>& vocab,
                 std::unordered_map<std::string, int>& ids) {
  vocab.clear();
  vocab.push_back("<unk>");
  for (const auto& t : seen) vocab.push_back(t);
  ids.clear();
  for (int i = 0; i < static_cast<int>(vocab.size()); ++i) ids[vocab[i]] = i;
}

}  // namespace

Resources build_resources(const std::vector<TaxonomyFile>& taxonomies,
                          const EmbeddingTable& embeddings,
                          const PathMap& path_map,
                          const CandidateTable& candidates,
                          const DatasetSplit& split, const Config& cfg,
                          const ResourceOverrides* overrides) {
  cfg.validate();
  Resources res;
  res.cfg = cfg;
  res.candidates = candidates;

  // Global term index over the union of taxonomy surfaces, sorted for
  // reproducibility.
  std::set<std::string> surfaces;
  for (const auto& tf : taxonomies)
    for (const auto& [hypo, hyper] : tf.edges) {
      surfaces.insert(hypo);
      surfaces.insert(hyper);
    }
  for (const auto& s : surfaces) {
    res.term_ids[s] = static_cast<int>(res.terms.size());
    res.terms.push_back(s);
  }
  res.word_vecs.reserve(res.terms.size());
  for (const auto& s : res.terms)
    res.word_vecs.push_back(embeddings.term_vector(s));

  // Path-component vocabularies, then indexed path records.
  std::set<std::string> lemmas, poss, deps;
  for (const auto& [key, recs] : path_map)
    for (const auto& rec : recs)
      for (const auto& e : rec.edges) {
        lemmas.insert(e.lemma);
        poss.insert(e.pos);
        deps.insert(e.dep);
      }
  auto restore_vocab = [](const std::vector<std::string>& fixed,
                          std::vector<std::string>& vocab,
                          std::unordered_map<std::string, int>& ids) {
    vocab = fixed;
    ids.clear();
    for (int i = 0; i < static_cast<int>(vocab.size()); ++i) ids[vocab[i]] = i;
  };
  if (overrides && overrides->lemma_vocab) {
    restore_vocab(*overrides->lemma_vocab, res.lemma_vocab, res.lemma_ids);
    restore_vocab(*overrides->pos_vocab, res.pos_vocab, res.pos_ids);
    restore_vocab(*overrides->dep_vocab, res.dep_vocab, res.dep_ids);
  } else {
    build_vocab(lemmas, res.lemma_vocab, res.lemma_ids);
    build_vocab(poss, res.pos_vocab, res.pos_ids);
    build_vocab(deps, res.dep_vocab, res.dep_ids);
  }
  for (const auto& tok : res.lemma_vocab) {
    if (tok != "<unk>" && embeddings.has_token(tok))
      res.lemma_init.push_back(embeddings.term_vector(tok));
    else
      res.lemma_init.push_back({});
  }

  static const std::string dirs = "<>^V";
  for (const auto& [key, recs] : path_map) {
    auto xi = res.term_ids.find(key.first);
    auto yi = res.term_ids.find(key.second);
    if (xi == res.term_ids.end() || yi == res.term_ids.end()) continue;
    auto& dst = res.paths[{xi->second, yi->second}];
    for (const auto& rec : recs) {
      IndexedPathRecord ir;
      ir.count = rec.count;
      for (const auto& e : rec.edges) {
        DependencyEdge de;
        de.lemma = index_of(res.lemma_ids, e.lemma);
        de.pos = index_of(res.pos_ids, e.pos);
        de.dep = index_of(res.dep_ids, e.dep);
        de.dir = static_cast<int>(dirs.find(e.dir));
        ir.edges.push_back(de);
      }
      dst.push_back(std::move(ir));
    }
  }

  for (const auto& [key, f] : candidates.entries()) {
    auto xi = res.term_ids.find(key.first);
    auto yi = res.term_ids.find(key.second);
    if (xi != res.term_ids.end() && yi != res.term_ids.end())
      res.candidate_pairs.insert({xi->second, yi->second});
  }

  // Taxonomies and split membership.
  std::map<std::string, int> split_of;  // 0 train, 1 val, 2 test
  for (const auto& n : split.train) split_of[n] = 0;
  for (const auto& n : split.validation) split_of[n] = 1;
  for (const auto& n : split.test) split_of[n] = 2;

  for (const auto& tf : taxonomies) {
    validate_taxonomy(tf);
    int ti = static_cast<int>(res.gold.size());
    Taxonomy t;
    // Root first so edges can be added in one child-before-parent-safe pass.
    std::map<std::string, std::string> parent;
    for (const auto& [hypo, hyper] : tf.edges) parent[hypo] = hyper;
    std::string root;
    for (const auto& [hypo, hyper] : tf.edges)
      if (!parent.count(hyper)) root = hyper;
    t.add_root(res.term_ids.at(root));
    // Attach repeatedly until all edges placed.
    std::vector<std::pair<std::string, std::string>> pending = tf.edges;
    while (!pending.empty()) {
      std::size_t before = pending.size();
      for (auto it = pending.begin(); it != pending.end();) {
        int cid = res.term_ids.at(it->first);
        int pid = res.term_ids.at(it->second);
        if (t.contains(pid)) {
          t.add_edge(cid, pid);
          it = pending.erase(it);
        } else {
          ++it;
        }
      }
      if (pending.size() == before)
        throw ParseError(tf.name + ": disconnected edges");
    }
    res.tax_names.push_back(tf.name);
    std::vector<int> vocab(t.nodes().begin(), t.nodes().end());
    res.vocabs.push_back(std::move(vocab));
    res.gold.push_back(std::move(t));

    auto it = split_of.find(tf.name);
    if (it == split_of.end()) continue;  // unlisted taxonomies are ignored
    if (it->second == 0) res.train_idx.push_back(ti);
    else if (it->second == 1) res.val_idx.push_back(ti);
    else res.test_idx.push_back(ti);
  }

  if (overrides && overrides->binner_boundaries) {
    res.binner.restore(*overrides->binner_boundaries, overrides->binner_bins);
    return res;
  }

  // Quantile bin boundaries from all ordered training pairs.
  std::vector<std::vector<double>> samples(FeatureBinner::N_SCALARS);
  for (int ti : res.train_idx) {
    const auto& vocab = res.vocabs[ti];
    for (int x : vocab)
      for (int y : vocab) {
        if (x == y) continue;
        SurfaceFeatures sf = surface_features(res.terms[x], res.terms[y]);
        samples[FeatureBinner::SUFFIX_MATCH].push_back(sf.suffix_match);
        samples[FeatureBinner::LCS_RATIO].push_back(sf.lcs_ratio);
        samples[FeatureBinner::LENGTH_DIFF].push_back(sf.length_diff);
        samples[FeatureBinner::FREQ_DIFF].push_back(
            freq_diff(res.terms[x], res.terms[y], res.candidates));
        samples[FeatureBinner::GENERALITY_DIFF].push_back(
            generality_diff(res.terms[x], res.terms[y], res.candidates));
      }
  }
  res.binner.fit(samples, cfg.feat_bins);
  return res;
}

namespace {

Tensor xavier(std::vector<int> shape, Rng& rng) {
  Tensor t(shape);
  double fan_in = shape.size() > 1 ? shape[1] : shape[0];
  double fan_out = shape[0];
  double r = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& x : t.v) x = uniform_range(rng, -r, r);
  return t;
}

Tensor small_uniform(std::vector<int> shape, Rng& rng, double r = 0.1) {
  Tensor t(shape);
  for (double& x : t.v) x = uniform_range(rng, -r, r);
  return t;
}

}  // namespace

Model::Model(const Config& cfg, const Resources& res, Rng& rng) : cfg_(cfg) {
  int n_lemma = static_cast<int>(res.lemma_vocab.size());
  int n_pos = static_cast<int>(res.pos_vocab.size());
  int n_dep = static_cast<int>(res.dep_vocab.size());

  lemma_emb = Parameter("lemma_emb", small_uniform({n_lemma, cfg.lemma_dim}, rng));
  // Lemmas covered by the distributional table start from those vectors;
  // the rest (and UNK) keep their random init.
  if (cfg.lemma_dim == cfg.word_dim) {
    for (int i = 0; i < n_lemma && i < static_cast<int>(res.lemma_init.size()); ++i) {
      if (res.lemma_init[i].empty()) continue;
      for (int j = 0; j < cfg.lemma_dim; ++j)
        lemma_emb.value.at(i, j) = res.lemma_init[i][j];
    }
  }
  pos_emb = Parameter("pos_emb", small_uniform({n_pos, cfg.pos_dim}, rng));
  dep_emb = Parameter("dep_emb", small_uniform({n_dep, cfg.dep_dim}, rng));
  dir_emb = Parameter("dir_emb", small_uniform({4, cfg.dir_dim}, rng));

  int h = cfg.path_dim, d = cfg.edge_dim();
  lstm_wx = Parameter("lstm_wx", xavier({4 * h, d}, rng));
  lstm_wh = Parameter("lstm_wh", xavier({4 * h, h}, rng));
  lstm_b = Parameter("lstm_b", Tensor({4 * h}));
  empty_path = Parameter("empty_path", small_uniform({h}, rng));
  root_word = Parameter("root_word", small_uniform({cfg.word_dim}, rng));
  if (cfg.finetune_word_emb) {
    int n_terms = static_cast<int>(res.terms.size());
    Tensor t({n_terms, cfg.word_dim});
    for (int i = 0; i < n_terms; ++i)
      for (int j = 0; j < cfg.word_dim; ++j)
        t.at(i, j) = res.word_vecs[i][j];
    term_emb = Parameter("term_emb", std::move(t));
  }

  if (cfg.use_surface)
    feat_names.insert(feat_names.end(),
                      {"f_cap_x", "f_cap_y", "f_ends_with", "f_contains",
                       "f_suffix", "f_lcs", "f_len"});
  if (cfg.use_fg) feat_names.insert(feat_names.end(), {"f_freq", "f_gen"});
  for (const auto& name : feat_names) {
    bool boolean = name == "f_cap_x" || name == "f_cap_y" ||
                   name == "f_ends_with" || name == "f_contains";
    int bins = boolean ? 2 : cfg.feat_bins;
    feat_emb.emplace_back(name, small_uniform({bins, cfg.feat_dim}, rng));
  }

  w1 = Parameter("w1", xavier({cfg.hidden_dim, cfg.rep_dim()}, rng));
  b1 = Parameter("b1", Tensor({cfg.hidden_dim}));
  w2 = Parameter("w2", xavier({1, cfg.hidden_dim}, rng));
  b2 = Parameter("b2", Tensor({1}));
}

std::vector<Parameter*> Model::trainable() {
  std::vector<Parameter*> out = {&lemma_emb, &pos_emb,    &dep_emb, &dir_emb,
                                 &lstm_wx,   &lstm_wh,    &lstm_b,  &empty_path,
                                 &root_word, &w1,         &b1,      &w2,
                                 &b2};
  if (cfg_.finetune_word_emb) out.push_back(&term_emb);
  for (auto& p : feat_emb) out.push_back(&p);
  return out;
}

Parameter* Model::find(const std::string& name) {
  for (Parameter* p : trainable())
    if (p->name == name) return p;
  return nullptr;
}

void Model::zero_all_grads() {
  for (Parameter* p : trainable()) p->zero_grad();
}

}  // namespace taxorl
