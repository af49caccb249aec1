// taxorl: taxonomy induction by policy-gradient attachment.
//
// Subcommands: train, induct, eval, baseline-mst, gen-synthetic.
// Exit codes: 0 success, 1 configuration error, 2 data error,
// 3 checkpoint version mismatch.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "taxorl/pairwise.hpp"
#include "taxorl/synthetic.hpp"
#include "taxorl/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace taxorl;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int log_level() {
  const char* v = std::getenv("TAXORL_LOG");
  if (!v) return 1;
  std::string s = v;
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << msg << "\n";
}

struct RunConfig {
  Config cfg;
  std::string taxonomy_dir, embeddings, paths, candidates, split, out_dir;
};

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": top level must be an object");

  RunConfig rc;
  Config& c = rc.cfg;
  for (const auto& [key, val] : j.items()) {
    try {
      if (key == "taxonomy_dir") rc.taxonomy_dir = val.get<std::string>();
      else if (key == "embeddings") rc.embeddings = val.get<std::string>();
      else if (key == "paths") rc.paths = val.get<std::string>();
      else if (key == "candidates") rc.candidates = val.get<std::string>();
      else if (key == "split") rc.split = val.get<std::string>();
      else if (key == "out_dir") rc.out_dir = val.get<std::string>();
      else if (key == "word_dim") c.word_dim = val.get<int>();
      else if (key == "lemma_dim") c.lemma_dim = val.get<int>();
      else if (key == "pos_dim") c.pos_dim = val.get<int>();
      else if (key == "dep_dim") c.dep_dim = val.get<int>();
      else if (key == "dir_dim") c.dir_dim = val.get<int>();
      else if (key == "path_dim") c.path_dim = val.get<int>();
      else if (key == "feat_dim") c.feat_dim = val.get<int>();
      else if (key == "feat_bins") c.feat_bins = val.get<int>();
      else if (key == "hidden_dim") c.hidden_dim = val.get<int>();
      else if (key == "path_cap") c.path_cap = val.get<int>();
      else if (key == "mode") c.mode = parse_mode(val.get<std::string>());
      else if (key == "restriction")
        c.restriction = parse_restriction(val.get<std::string>());
      else if (key == "gamma") c.gamma = val.get<double>();
      else if (key == "rollouts") c.rollouts = val.get<int>();
      else if (key == "lr") c.lr = val.get<double>();
      else if (key == "epochs") c.epochs = val.get<int>();
      else if (key == "seed") c.seed = val.get<std::uint64_t>();
      else if (key == "baseline_decay") c.baseline_decay = val.get<double>();
      else if (key == "use_surface") c.use_surface = val.get<bool>();
      else if (key == "use_fg") c.use_fg = val.get<bool>();
      else if (key == "cache") c.cache = val.get<bool>();
      else if (key == "finetune_word_emb")
        c.finetune_word_emb = val.get<bool>();
      else if (key == "sweep_nr_roots") c.sweep_nr_roots = val.get<bool>();
      else throw ConfigError(path + ": unknown key '" + key + "'");
    } catch (const json::exception& e) {
      throw ConfigError(path + ": key '" + key + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": key '" + key + "': " + e.what());
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }

  auto require = [&](const std::string& key, const std::string& value) {
    if (value.empty())
      throw ConfigError(path + ": missing required key '" + key + "'");
    if (!fs::exists(value))
      throw ConfigError(path + ": key '" + key + "': no such path: " + value);
  };
  require("taxonomy_dir", rc.taxonomy_dir);
  require("embeddings", rc.embeddings);
  require("paths", rc.paths);
  require("candidates", rc.candidates);
  require("split", rc.split);
  return rc;
}

Resources load_resources(const RunConfig& rc,
                         const ResourceOverrides* overrides = nullptr) {
  auto taxonomies = load_taxonomy_dir(rc.taxonomy_dir);
  auto embeddings = load_embeddings(rc.embeddings, rc.cfg.word_dim);
  auto paths = load_paths(rc.paths, rc.cfg.path_cap);
  auto candidates = load_candidates(rc.candidates);
  auto split = load_split(rc.split);
  return build_resources(taxonomies, embeddings, paths, candidates, split,
                         rc.cfg, overrides);
}

void print_metrics(const std::string& label, const MetricReport& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%-12s Pa=%.4f Ra=%.4f F1a=%.4f Pe=%.4f Re=%.4f F1e=%.4f",
                label.c_str(), m.ancestor_precision, m.ancestor_recall,
                m.ancestor_f1, m.edge_precision, m.edge_recall, m.edge_f1);
  std::cout << buf << "\n";
}

// Builds resources and a parameter-loaded model from a checkpoint plus the
// dataset named in the run config.
struct Restored {
  Checkpoint ck;
  Resources res;
  std::unique_ptr<Model> model;
};

Restored restore(const RunConfig& rc, const std::string& ck_path) {
  Restored r;
  r.ck = load_checkpoint(ck_path);
  ResourceOverrides ov;
  ov.lemma_vocab = &r.ck.lemma_vocab;
  ov.pos_vocab = &r.ck.pos_vocab;
  ov.dep_vocab = &r.ck.dep_vocab;
  ov.binner_boundaries = &r.ck.binner_boundaries;
  ov.binner_bins = r.ck.binner_bins;
  RunConfig rc2 = rc;
  rc2.cfg = r.ck.cfg;  // architecture always comes from the checkpoint
  r.res = load_resources(rc2, &ov);
  Rng rng(r.ck.cfg.seed);
  r.model = std::make_unique<Model>(r.ck.cfg, r.res, rng);
  apply_checkpoint_params(r.ck, *r.model);
  return r;
}

std::vector<int> split_indices(const Resources& res, const std::string& name) {
  if (name == "train") return res.train_idx;
  if (name == "validation") return res.val_idx;
  if (name == "test") return res.test_idx;
  throw ConfigError("unknown split: " + name);
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<int> epochs, const std::string& mode,
              const std::string& restriction, const std::string& out) {
  RunConfig rc = load_run_config(config_path);
  if (seed) rc.cfg.seed = *seed;
  if (epochs) rc.cfg.epochs = *epochs;
  if (!mode.empty()) rc.cfg.mode = parse_mode(mode);
  if (!restriction.empty()) rc.cfg.restriction = parse_restriction(restriction);
  if (!out.empty()) rc.out_dir = out;
  if (rc.out_dir.empty())
    throw ConfigError(config_path + ": missing required key 'out_dir'");

  Resources res = load_resources(rc);
  info("loaded " + std::to_string(res.gold.size()) + " taxonomies (" +
       std::to_string(res.train_idx.size()) + " train)");
  Rng rng(rc.cfg.seed);
  Model model(rc.cfg, res, rng);
  Trainer trainer(res, model, rc.cfg);
  TrainResult result = trainer.train(rc.out_dir);
  info("best epoch " + std::to_string(result.best_epoch) +
       ", checkpoint at " + result.best_checkpoint_path);
  print_metrics("test", result.test_metrics);
  return 0;
}

int cmd_induct(const std::string& config_path, const std::string& ck_path,
               const std::string& vocab_path, const std::string& mode,
               const std::string& restriction, std::uint64_t seed) {
  RunConfig rc = load_run_config(config_path);
  Restored r = restore(rc, ck_path);
  // Mode and restriction are inference-time choices and may differ from the
  // training configuration.
  Config c = r.model->cfg();
  if (!mode.empty()) c.mode = parse_mode(mode);
  if (!restriction.empty()) c.restriction = parse_restriction(restriction);
  c.seed = seed;

  std::ifstream in(vocab_path);
  if (!in) throw ConfigError("cannot open vocab file: " + vocab_path);
  std::vector<int> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto it = r.res.term_ids.find(line);
    if (it == r.res.term_ids.end()) {
      // Unknown surfaces still participate: zero word vector, no paths.
      int id = static_cast<int>(r.res.terms.size());
      r.res.term_ids[line] = id;
      r.res.terms.push_back(line);
      r.res.word_vecs.push_back(std::vector<double>(c.word_dim, 0.0));
      vocab.push_back(id);
    } else {
      vocab.push_back(it->second);
    }
  }

  Trainer trainer(r.res, *r.model, c);
  Rng rng(seed);
  Taxonomy tree = trainer.greedy_induct(vocab, rng);
  for (const auto& [child, parent] : tree.edges())
    std::cout << r.res.terms[child] << "\t" << r.res.terms[parent] << "\n";
  for (int id : vocab)
    if (!tree.contains(id))
      std::cout << "# unattached: " << r.res.terms[id] << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& ck_path,
             const std::string& split, bool sweep) {
  RunConfig rc = load_run_config(config_path);
  Restored r = restore(rc, ck_path);
  Config c = r.ck.cfg;
  c.sweep_nr_roots = c.sweep_nr_roots || sweep;
  Trainer trainer(r.res, *r.model, c);
  std::vector<int> idx = split_indices(r.res, split);
  if (idx.empty()) throw ConfigError("split '" + split + "' is empty");
  print_metrics(split, trainer.evaluate_split(idx));
  return 0;
}

int cmd_baseline_mst(const std::string& config_path,
                     const std::string& scores_path, int epochs,
                     std::optional<std::uint64_t> seed) {
  if (!scores_path.empty()) {
    // Decode pre-computed pair scores directly; emit the tree as TSV edges.
    std::ifstream in(scores_path);
    if (!in) throw ConfigError("cannot open scores file: " + scores_path);
    std::map<std::string, int> ids;
    std::vector<std::string> names;
    std::map<std::pair<int, int>, double> scores;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto f = split_tabs(line);
      if (f.size() != 3)
        throw ParseError(scores_path + ":" + std::to_string(lineno) +
                         ": expected 3 tab-separated fields");
      auto id_of = [&](const std::string& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(names.size());
        ids[s] = id;
        names.push_back(s);
        return id;
      };
      scores[{id_of(f[0]), id_of(f[1])}] = std::stod(f[2]);
    }
    std::set<int> vocab;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) vocab.insert(i);
    Taxonomy tree = two_phase_baseline(scores, vocab);
    for (const auto& [child, parent] : tree.edges())
      std::cout << names[child] << "\t" << names[parent] << "\n";
    return 0;
  }

  RunConfig rc = load_run_config(config_path);
  if (seed) rc.cfg.seed = *seed;
  Resources res = load_resources(rc);
  Rng rng(rc.cfg.seed);
  Model model(rc.cfg, res, rng);
  PairwiseTrainer pw(res, model, rc.cfg);
  Rng train_rng(rc.cfg.seed);
  auto losses = pw.train(epochs, train_rng);
  if (!losses.empty())
    info("final classifier loss " + std::to_string(losses.back()));

  auto eval_split = [&](const std::string& label,
                        const std::vector<int>& idx) {
    if (idx.empty()) return;
    MetricReport avg;
    for (int ti : idx) {
      Taxonomy pred = pw.induct(res.vocabs[ti]);
      MetricReport m = evaluate(pred, res.gold[ti]);
      avg.ancestor_precision += m.ancestor_precision;
      avg.ancestor_recall += m.ancestor_recall;
      avg.ancestor_f1 += m.ancestor_f1;
      avg.edge_precision += m.edge_precision;
      avg.edge_recall += m.edge_recall;
      avg.edge_f1 += m.edge_f1;
    }
    double n = static_cast<double>(idx.size());
    avg.ancestor_precision /= n;
    avg.ancestor_recall /= n;
    avg.ancestor_f1 /= n;
    avg.edge_precision /= n;
    avg.edge_recall /= n;
    avg.edge_f1 /= n;
    print_metrics(label, avg);
  };
  eval_split("validation", res.val_idx);
  eval_split("test", res.test_idx);
  return 0;
}

int cmd_gen_synthetic(const std::string& out, std::uint64_t seed, int count,
                      int min_size, int max_size) {
  SyntheticOptions opts;
  opts.seed = seed;
  opts.min_size = min_size;
  opts.max_size = max_size;
  if (count > 0) {
    opts.n_validation = std::max(1, count * 3 / 20);
    opts.n_test = std::max(1, count * 3 / 20);
    opts.n_train = count - opts.n_validation - opts.n_test;
    if (opts.n_train < 1) throw ConfigError("--count too small");
  }
  SyntheticDataset ds = gen_synthetic(opts);
  write_dataset(out, ds);
  info("wrote " + std::to_string(ds.taxonomies.size()) + " taxonomies to " +
       out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taxonomy induction by policy-gradient attachment"};
  app.require_subcommand(1);

  std::string config_path, ck_path, vocab_path, mode, restriction, out,
      scores_path, split_name = "test";
  std::optional<std::uint64_t> seed_opt;
  std::optional<int> epochs_opt;
  std::uint64_t seed = 1;
  int count = 0, min_size = 11, max_size = 15, baseline_epochs = 10;

  auto* train = app.add_subcommand("train", "train a policy");
  train->add_option("--config", config_path, "JSON run config")->required();
  train->add_option("--seed", seed_opt, "override config seed");
  train->add_option("--epochs", epochs_opt, "override config epochs");
  train->add_option("--mode", mode, "override mode (RE|NR)");
  train->add_option("--restriction", restriction,
                    "override restriction (none|partial|full)");
  train->add_option("--out", out, "override output directory");

  auto* induct = app.add_subcommand("induct", "greedy induction to stdout");
  induct->add_option("--config", config_path, "JSON run config")->required();
  induct->add_option("--checkpoint", ck_path, "model checkpoint")->required();
  induct->add_option("--vocab", vocab_path, "term list, one per line")
      ->required();
  induct->add_option("--mode", mode, "override mode (RE|NR)");
  induct->add_option("--restriction", restriction,
                     "override restriction (none|partial|full)");
  induct->add_option("--seed", seed, "rng seed");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cmd->add_option("--config", config_path, "JSON run config")->required();
  eval_cmd->add_option("--checkpoint", ck_path, "model checkpoint")
      ->required();
  eval_cmd->add_option("--split", split_name, "train|validation|test");
  bool sweep = false;
  eval_cmd->add_flag("--sweep", sweep,
                     "NR inference: try every initial root, keep the "
                     "highest-likelihood tree");

  auto* mst = app.add_subcommand(
      "baseline-mst", "two-phase classifier + arborescence baseline");
  mst->add_option("--config", config_path, "JSON run config");
  mst->add_option("--pair-scores", scores_path,
                  "TSV hypo/hyper/score; decode without training");
  mst->add_option("--epochs", baseline_epochs, "classifier epochs");
  mst->add_option("--seed", seed_opt, "override config seed");

  auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic dataset");
  gen->add_option("--out", out, "output directory")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--count", count, "total taxonomy count (0 = default 70)");
  gen->add_option("--min-size", min_size, "minimum tree size");
  gen->add_option("--max-size", max_size, "maximum tree size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train)
      return cmd_train(config_path, seed_opt, epochs_opt, mode, restriction,
                       out);
    if (*induct)
      return cmd_induct(config_path, ck_path, vocab_path, mode, restriction,
                        seed);
    if (*eval_cmd) return cmd_eval(config_path, ck_path, split_name, sweep);
    if (*mst) {
      if (scores_path.empty() && config_path.empty())
        throw ConfigError("baseline-mst needs --config or --pair-scores");
      return cmd_baseline_mst(config_path, scores_path, baseline_epochs,
                              seed_opt);
    }
    if (*gen) return cmd_gen_synthetic(out, seed, count, min_size, max_size);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return e.version_mismatch ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
