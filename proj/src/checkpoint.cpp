#include "taxorl/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace taxorl {

namespace {

using nlohmann::json;

json config_to_json(const Config& c) {
  return json{{"word_dim", c.word_dim},
              {"lemma_dim", c.lemma_dim},
              {"pos_dim", c.pos_dim},
              {"dep_dim", c.dep_dim},
              {"dir_dim", c.dir_dim},
              {"path_dim", c.path_dim},
              {"feat_dim", c.feat_dim},
              {"feat_bins", c.feat_bins},
              {"hidden_dim", c.hidden_dim},
              {"path_cap", c.path_cap},
              {"mode", mode_name(c.mode)},
              {"restriction", restriction_name(c.restriction)},
              {"gamma", c.gamma},
              {"rollouts", c.rollouts},
              {"lr", c.lr},
              {"epochs", c.epochs},
              {"seed", c.seed},
              {"baseline_decay", c.baseline_decay},
              {"use_surface", c.use_surface},
              {"use_fg", c.use_fg},
              {"cache", c.cache},
              {"finetune_word_emb", c.finetune_word_emb},
              {"sweep_nr_roots", c.sweep_nr_roots}};
}

Config config_from_json(const json& j) {
  Config c;
  c.word_dim = j.at("word_dim");
  c.lemma_dim = j.at("lemma_dim");
  c.pos_dim = j.at("pos_dim");
  c.dep_dim = j.at("dep_dim");
  c.dir_dim = j.at("dir_dim");
  c.path_dim = j.at("path_dim");
  c.feat_dim = j.at("feat_dim");
  c.feat_bins = j.at("feat_bins");
  c.hidden_dim = j.at("hidden_dim");
  c.path_cap = j.at("path_cap");
  c.mode = parse_mode(j.at("mode"));
  c.restriction = parse_restriction(j.at("restriction"));
  c.gamma = j.at("gamma");
  c.rollouts = j.at("rollouts");
  c.lr = j.at("lr");
  c.epochs = j.at("epochs");
  c.seed = j.at("seed");
  c.baseline_decay = j.at("baseline_decay");
  c.use_surface = j.at("use_surface");
  c.use_fg = j.at("use_fg");
  c.cache = j.at("cache");
  c.finetune_word_emb = j.at("finetune_word_emb");
  c.sweep_nr_roots = j.at("sweep_nr_roots");
  return c;
}

std::string hex(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

double unhex(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

void write_string_list(std::ostream& out, const std::string& tag,
                       const std::vector<std::string>& items) {
  out << tag << ' ' << items.size() << '\n';
  for (const auto& s : items) out << s << '\n';
}

std::vector<std::string> read_string_list(std::istream& in, const std::string& tag) {
  std::string line;
  if (!std::getline(in, line))
    throw CheckpointError("checkpoint truncated before " + tag);
  std::istringstream hs(line);
  std::string got;
  std::size_t n;
  if (!(hs >> got >> n) || got != tag)
    throw CheckpointError("expected '" + tag + "' section, got '" + line + "'");
  std::vector<std::string> items(n);
  for (auto& s : items)
    if (!std::getline(in, s))
      throw CheckpointError("checkpoint truncated inside " + tag);
  return items;
}

}  // namespace

void save_checkpoint(const std::string& path, Model& model,
                     const Resources& res) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot create " + path);
  out << "taxorl-checkpoint v" << Checkpoint::kVersion << '\n';
  out << "config " << config_to_json(model.cfg()).dump() << '\n';

  out << "binner " << res.binner.bins() << ' ' << res.binner.boundaries().size()
      << '\n';
  for (const auto& cuts : res.binner.boundaries()) {
    out << cuts.size();
    for (double c : cuts) out << ' ' << hex(c);
    out << '\n';
  }

  write_string_list(out, "lemma_vocab", res.lemma_vocab);
  write_string_list(out, "pos_vocab", res.pos_vocab);
  write_string_list(out, "dep_vocab", res.dep_vocab);
  write_string_list(out, "terms", res.terms);

  auto params = model.trainable();
  out << "params " << params.size() << '\n';
  for (Parameter* p : params) {
    out << p->name << ' ' << p->value.shape.size();
    for (int d : p->value.shape) out << ' ' << d;
    out << '\n';
    for (std::size_t i = 0; i < p->value.v.size(); ++i)
      out << (i ? " " : "") << hex(p->value.v[i]);
    out << '\n';
  }
  out << "end\n";
  if (!out) throw CheckpointError("write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw CheckpointError("empty checkpoint " + path);
  if (line.rfind("taxorl-checkpoint v", 0) != 0)
    throw CheckpointError(path + " is not a taxorl checkpoint");
  int version = std::atoi(line.c_str() + std::strlen("taxorl-checkpoint v"));
  if (version != Checkpoint::kVersion)
    throw CheckpointError("unsupported checkpoint version " +
                              std::to_string(version),
                          /*version=*/true);

  Checkpoint ck;
  if (!std::getline(in, line) || line.rfind("config ", 0) != 0)
    throw CheckpointError("missing config section");
  try {
    ck.cfg = config_from_json(json::parse(line.substr(7)));
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("bad config json: ") + e.what());
  }

  if (!std::getline(in, line) || line.rfind("binner ", 0) != 0)
    throw CheckpointError("missing binner section");
  std::istringstream bh(line.substr(7));
  std::size_t n_feats;
  bh >> ck.binner_bins >> n_feats;
  ck.binner_boundaries.resize(n_feats);
  for (auto& cuts : ck.binner_boundaries) {
    if (!std::getline(in, line))
      throw CheckpointError("checkpoint truncated in binner");
    std::istringstream ls(line);
    std::size_t k;
    ls >> k;
    cuts.resize(k);
    std::string tok;
    for (auto& c : cuts) {
      ls >> tok;
      c = unhex(tok);
    }
  }

  ck.lemma_vocab = read_string_list(in, "lemma_vocab");
  ck.pos_vocab = read_string_list(in, "pos_vocab");
  ck.dep_vocab = read_string_list(in, "dep_vocab");
  ck.terms = read_string_list(in, "terms");

  if (!std::getline(in, line) || line.rfind("params ", 0) != 0)
    throw CheckpointError("missing params section");
  std::size_t n_params = std::stoul(line.substr(7));
  for (std::size_t i = 0; i < n_params; ++i) {
    if (!std::getline(in, line))
      throw CheckpointError("checkpoint truncated in params");
    std::istringstream hs(line);
    std::string name;
    std::size_t rank;
    hs >> name >> rank;
    std::vector<int> shape(rank);
    for (auto& d : shape) hs >> d;
    Tensor t(shape);
    if (!std::getline(in, line))
      throw CheckpointError("checkpoint truncated in param " + name);
    std::istringstream vs(line);
    std::string tok;
    for (auto& x : t.v) {
      if (!(vs >> tok))
        throw CheckpointError("too few values for param " + name);
      x = unhex(tok);
    }
    ck.params[name] = std::move(t);
  }
  return ck;
}

void apply_checkpoint_params(const Checkpoint& ck, Model& model) {
  for (Parameter* p : model.trainable()) {
    auto it = ck.params.find(p->name);
    if (it == ck.params.end())
      throw CheckpointError("checkpoint missing parameter " + p->name);
    if (it->second.shape != p->value.shape)
      throw CheckpointError("parameter " + p->name + " has shape " +
                            it->second.shape_str() + ", model expects " +
                            p->value.shape_str());
    p->value = it->second;
    p->zero_grad();
  }
}

}  // namespace taxorl
