#include "taxorl/synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "taxorl/rng.hpp"

namespace fs = std::filesystem;

namespace taxorl {

namespace {

std::string fresh_token(std::uint64_t& counter) {
  static const char cons[] = "bdfgklmnprstvz";
  static const char vow[] = "aeiou";
  std::uint64_t x = counter++;
  std::string s;
  for (int i = 0; i < 3; ++i) {
    s += cons[x % 14];
    x /= 14;
    s += vow[x % 5];
    x /= 5;
  }
  return s;
}

struct Node {
  int parent = -1;
  int depth = 0;
  std::string surface;
};

// Path templates per relation kind.
const std::vector<std::vector<RawPathEdge>> kEdgeTemplates = {
    {{"such", "ADJ", "amod", '<'}, {"as", "ADP", "prep", '<'}},
    {{"be", "VERB", "ROOT", '^'}, {"a", "DET", "det", '>'}},
    {{"be", "VERB", "ROOT", '^'},
     {"kind", "NOUN", "attr", '>'},
     {"of", "ADP", "prep", '>'}},
};
const std::vector<std::vector<RawPathEdge>> kAncestorTemplates = {
    {{"include", "VERB", "ROOT", '^'}, {"type", "NOUN", "dobj", '>'}},
    {{"family", "NOUN", "pobj", 'V'}, {"of", "ADP", "prep", '>'}},
};
const std::vector<std::vector<RawPathEdge>> kSiblingTemplates = {
    {{"and", "CCONJ", "cc", '<'}},
    {{"or", "CCONJ", "cc", '<'}, {"other", "ADJ", "amod", '>'}},
};
const std::vector<std::vector<RawPathEdge>> kNoiseTemplates = {
    {{"near", "ADP", "prep", '<'}},
    {{"with", "ADP", "prep", '>'}},
};

}  // namespace

SyntheticDataset gen_synthetic(const SyntheticOptions& opts) {
  if (opts.min_size <= 10 || opts.max_size > 50 ||
      opts.min_size > opts.max_size)
    throw std::invalid_argument("gen_synthetic: sizes must lie in (10, 50]");
  if (opts.n_train < 1 || opts.n_validation < 0 || opts.n_test < 0)
    throw std::invalid_argument("gen_synthetic: bad split counts");

  Rng rng(opts.seed);
  std::uint64_t token_counter = 0;
  SyntheticDataset ds;
  ds.embedding_dim = opts.embedding_dim;

  int total = opts.n_train + opts.n_validation + opts.n_test;
  for (int ti = 0; ti < total; ++ti) {
    int size = opts.min_size + uniform_int(rng, opts.max_size - opts.min_size + 1);
    std::vector<Node> nodes(size);
    nodes[0].surface = fresh_token(token_counter);
    // Guarantee height four: one chain down to depth 3, rest attach anywhere
    // above the leaf level.
    for (int i = 1; i < size; ++i) {
      int parent;
      if (i <= 3) {
        parent = i - 1;
      } else {
        do {
          parent = uniform_int(rng, i);
        } while (nodes[parent].depth >= 3);
      }
      nodes[i].parent = parent;
      nodes[i].depth = nodes[parent].depth + 1;
      if (uniform01(rng) < opts.uncued_fraction) {
        nodes[i].surface = fresh_token(token_counter);
      } else {
        // Cued surface: a fresh modifier prepended to the parent surface.
        nodes[i].surface = fresh_token(token_counter) + " " + nodes[parent].surface;
      }
    }

    // Subtree sizes (descendant counts + 1).
    std::vector<int> subtree(size, 1);
    for (int i = size - 1; i >= 1; --i) subtree[nodes[i].parent] += subtree[i];

    // Per-term dropout only hits leaves: an absent internal term would force
    // every descendant onto a wrong ancestor, which no detector gap causes.
    // Dropped terms also lose their surface cue, modelling the rare opaque
    // terms a hypernym detector misses.
    std::vector<char> term_covered(size, 1);
    if (opts.candidate_per_term)
      for (int i = 1; i < size; ++i)
        if (subtree[i] == 1 &&
            !(term_covered[i] = uniform01(rng) < opts.candidate_coverage))
          nodes[i].surface = fresh_token(token_counter);

    TaxonomyFile tf;
    tf.name = "syn" + std::string(ti < 10 ? "00" : ti < 100 ? "0" : "") +
              std::to_string(ti);
    for (int i = 1; i < size; ++i)
      tf.edges.emplace_back(nodes[i].surface, nodes[nodes[i].parent].surface);
    ds.taxonomies.push_back(tf);

    // Ancestor pairs.
    std::vector<std::pair<int, int>> ancestors;
    for (int i = 1; i < size; ++i)
      for (int a = nodes[i].parent; a != -1; a = nodes[a].parent)
        ancestors.emplace_back(i, a);

    for (auto [d, a] : ancestors) {
      bool covered = opts.candidate_per_term
                         ? term_covered[d]
                         : uniform01(rng) < opts.candidate_coverage;
      if (covered) {
        long long f = 4LL * subtree[a] + uniform_int(rng, 4);
        ds.candidates.insert(nodes[d].surface, nodes[a].surface, f);
      }
      if (uniform01(rng) < 0.1 * opts.candidate_noise)  // reversed noise
        ds.candidates.insert(nodes[a].surface, nodes[d].surface,
                             1 + uniform_int(rng, 2));
    }
    // Unrelated-pair noise.
    std::set<std::pair<int, int>> anc_set(ancestors.begin(), ancestors.end());
    int n_noise = static_cast<int>(size / 4 * opts.candidate_noise);
    for (int k = 0; k < n_noise; ++k) {
      int u = uniform_int(rng, size), v = uniform_int(rng, size);
      if (u == v || anc_set.count({u, v})) continue;
      ds.candidates.insert(nodes[u].surface, nodes[v].surface,
                           1 + uniform_int(rng, 2));
    }

    // Dependency paths.
    auto emit = [&](int x, int y,
                    const std::vector<std::vector<RawPathEdge>>& templates,
                    int n_templates, int max_count) {
      std::vector<int> order(templates.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      shuffle_vec(order, rng);
      for (int k = 0; k < n_templates && k < static_cast<int>(order.size()); ++k) {
        PathRecord rec;
        rec.edges = templates[order[k]];
        rec.count = 1 + uniform_int(rng, max_count);
        ds.paths[{nodes[x].surface, nodes[y].surface}].push_back(rec);
      }
    };
    for (int i = 1; i < size; ++i) {
      int p = nodes[i].parent;
      if (uniform01(rng) < opts.path_coverage)
        emit(i, p, kEdgeTemplates, 1 + uniform_int(rng, 2), 5);
      if (uniform01(rng) < 0.15)
        emit(p, i, kNoiseTemplates, 1, 2);
    }
    for (auto [d, a] : ancestors) {
      if (a == nodes[d].parent) continue;
      if (uniform01(rng) < opts.ancestor_confusion)
        emit(d, a, kEdgeTemplates, 1, 3);
      else if (uniform01(rng) < 0.4)
        emit(d, a, kAncestorTemplates, 1, 3);
    }
    for (int i = 1; i < size; ++i)
      for (int j = i + 1; j < size; ++j) {
        if (nodes[i].parent != nodes[j].parent) continue;
        if (uniform01(rng) < opts.sibling_confusion)
          emit(i, j, kEdgeTemplates, 1, 2);
        else if (uniform01(rng) < 0.4)
          emit(i, j, kSiblingTemplates, 1, 3);
      }
    for (int k = 0; k < size / 5; ++k) {
      int u = uniform_int(rng, size), v = uniform_int(rng, size);
      if (u != v) emit(u, v, kNoiseTemplates, 1, 2);
    }
  }

  // Split assignment in generation order.
  for (int ti = 0; ti < total; ++ti) {
    const std::string& name = ds.taxonomies[ti].name;
    if (ti < opts.n_train)
      ds.split.train.push_back(name);
    else if (ti < opts.n_train + opts.n_validation)
      ds.split.validation.push_back(name);
    else
      ds.split.test.push_back(name);
  }

  // Token embeddings for every token appearing in a surface.
  std::set<std::string> tokens;
  for (const auto& tf : ds.taxonomies)
    for (const auto& [hypo, hyper] : tf.edges) {
      for (const auto& t : split_tokens(hypo)) tokens.insert(t);
      for (const auto& t : split_tokens(hyper)) tokens.insert(t);
    }
  for (const auto& t : tokens) {
    std::vector<double> vec(opts.embedding_dim);
    for (double& x : vec) x = 0.3 * normal01(rng);
    ds.token_embeddings[t] = std::move(vec);
  }

  return ds;
}

void write_dataset(const std::string& dir, const SyntheticDataset& ds) {
  fs::create_directories(fs::path(dir) / "taxonomies");
  for (const auto& tf : ds.taxonomies)
    write_taxonomy_file((fs::path(dir) / "taxonomies" / (tf.name + ".tsv")).string(), tf);
  write_embeddings((fs::path(dir) / "embeddings.txt").string(),
                   ds.token_embeddings);
  write_paths((fs::path(dir) / "paths.tsv").string(), ds.paths);
  write_candidates((fs::path(dir) / "candidates.tsv").string(), ds.candidates);
  write_split((fs::path(dir) / "split.tsv").string(), ds.split);
}

}  // namespace taxorl
