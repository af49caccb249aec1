#include "taxorl/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace taxorl {

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream create_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot create " + path);
  return out;
}

}  // namespace

std::string validate_taxonomy(const TaxonomyFile& tf) {
  if (tf.edges.empty())
    throw ParseError(tf.name + ": taxonomy has no edges");
  std::map<std::string, std::string> parent;
  std::set<std::string> nodes;
  for (const auto& [hypo, hyper] : tf.edges) {
    if (parent.count(hypo))
      throw ParseError(tf.name + ": term '" + hypo +
                       "' has two parents (duplicate or conflicting edge)");
    parent[hypo] = hyper;
    nodes.insert(hypo);
    nodes.insert(hyper);
  }
  std::vector<std::string> roots;
  for (const auto& n : nodes)
    if (!parent.count(n)) roots.push_back(n);
  if (roots.size() != 1)
    throw ParseError(tf.name + ": expected exactly one root, found " +
                     std::to_string(roots.size()));
  // Cycle check: walk up from every node.
  for (const auto& n : nodes) {
    std::string cur = n;
    std::size_t hops = 0;
    while (parent.count(cur)) {
      cur = parent.at(cur);
      if (++hops > nodes.size())
        throw ParseError(tf.name + ": cycle involving '" + n + "'");
    }
  }
  return roots.front();
}

TaxonomyFile load_taxonomy_file(const std::string& path) {
  auto in = open_or_throw(path);
  TaxonomyFile tf;
  tf.name = fs::path(path).stem().string();
  std::string line;
  int lineno = 0;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2)
      fail(path, lineno, "expected 'hyponym<TAB>hypernym'");
    std::string hypo = to_lower(trim(cols[0]));
    std::string hyper = to_lower(trim(cols[1]));
    if (hypo.empty() || hyper.empty())
      fail(path, lineno, "empty term surface");
    if (!seen.insert({hypo, hyper}).second)
      fail(path, lineno, "duplicate edge '" + hypo + "' -> '" + hyper + "'");
    tf.edges.emplace_back(hypo, hyper);
  }
  try {
    validate_taxonomy(tf);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return tf;
}

std::vector<TaxonomyFile> load_taxonomy_dir(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  std::vector<TaxonomyFile> out;
  for (const auto& f : files) out.push_back(load_taxonomy_file(f));
  return out;
}

void write_taxonomy_file(const std::string& path, const TaxonomyFile& tf) {
  auto out = create_or_throw(path);
  for (const auto& [hypo, hyper] : tf.edges) out << hypo << '\t' << hyper << '\n';
}

void EmbeddingTable::insert(const std::string& token, std::vector<double> vec) {
  if (static_cast<int>(vec.size()) != dim_)
    throw ParseError("embedding for '" + token + "' has wrong dimension");
  vectors_[to_lower(token)] = std::move(vec);
}

bool EmbeddingTable::has_token(const std::string& token) const {
  return vectors_.count(to_lower(token)) > 0;
}

std::vector<double> EmbeddingTable::term_vector(const std::string& surface) const {
  std::vector<double> acc(dim_, 0.0);
  int hits = 0;
  for (const auto& tok : split_tokens(to_lower(surface))) {
    auto it = vectors_.find(tok);
    if (it == vectors_.end()) continue;
    for (int i = 0; i < dim_; ++i) acc[i] += it->second[i];
    ++hits;
  }
  if (hits > 1)
    for (double& x : acc) x /= hits;
  return acc;  // zero vector when nothing matched
}

std::vector<std::string> EmbeddingTable::missing_tokens(
    const std::string& surface) const {
  std::vector<std::string> out;
  for (const auto& tok : split_tokens(to_lower(surface)))
    if (!vectors_.count(tok)) out.push_back(tok);
  return out;
}

EmbeddingTable load_embeddings(const std::string& path, int dim) {
  auto in = open_or_throw(path);
  EmbeddingTable table(dim);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tokens(line);
    if (static_cast<int>(cols.size()) != dim + 1)
      fail(path, lineno,
           "expected token plus " + std::to_string(dim) + " floats, got " +
               std::to_string(cols.size()) + " columns");
    std::vector<double> vec(dim);
    for (int i = 0; i < dim; ++i) {
      try {
        vec[i] = std::stod(cols[i + 1]);
      } catch (const std::exception&) {
        fail(path, lineno, "bad float '" + cols[i + 1] + "'");
      }
    }
    table.insert(cols[0], std::move(vec));
  }
  return table;
}

void write_embeddings(const std::string& path,
                      const std::map<std::string, std::vector<double>>& vecs) {
  auto out = create_or_throw(path);
  out.precision(17);
  for (const auto& [tok, vec] : vecs) {
    out << tok;
    for (double x : vec) out << ' ' << x;
    out << '\n';
  }
}

std::string format_path(const std::vector<RawPathEdge>& edges) {
  std::string s;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) s += '_';
    s += edges[i].lemma + "/" + edges[i].pos + "/" + edges[i].dep + "/" +
         edges[i].dir;
  }
  return s;
}

std::vector<RawPathEdge> parse_path(const std::string& text) {
  std::vector<RawPathEdge> edges;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('_', start);
    std::string tok = text.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    std::vector<std::string> parts;
    std::size_t p = 0;
    while (true) {
      std::size_t q = tok.find('/', p);
      if (q == std::string::npos) {
        parts.push_back(tok.substr(p));
        break;
      }
      parts.push_back(tok.substr(p, q - p));
      p = q + 1;
    }
    if (parts.size() != 4 || parts[3].size() != 1 ||
        std::string("<>^V").find(parts[3][0]) == std::string::npos)
      throw ParseError("malformed path edge '" + tok + "'");
    edges.push_back({parts[0], parts[1], parts[2], parts[3][0]});
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return edges;
}

PathMap load_paths(const std::string& path, int cap) {
  auto in = open_or_throw(path);
  PathMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 4)
      fail(path, lineno, "expected 'x<TAB>y<TAB>path<TAB>count'");
    PathRecord rec;
    try {
      rec.edges = parse_path(cols[2]);
    } catch (const ParseError& e) {
      fail(path, lineno, e.what());
    }
    try {
      rec.count = std::stoll(cols[3]);
    } catch (const std::exception&) {
      fail(path, lineno, "bad count '" + cols[3] + "'");
    }
    if (rec.count < 1) fail(path, lineno, "count must be >= 1");
    out[{to_lower(cols[0]), to_lower(cols[1])}].push_back(std::move(rec));
  }
  // Keep the cap most frequent paths per pair; stable sort preserves file
  // order among ties.
  for (auto& [key, recs] : out) {
    if (static_cast<int>(recs.size()) > cap) {
      std::stable_sort(recs.begin(), recs.end(),
                       [](const PathRecord& a, const PathRecord& b) {
                         return a.count > b.count;
                       });
      recs.resize(cap);
    }
  }
  return out;
}

void write_paths(const std::string& path, const PathMap& paths) {
  auto out = create_or_throw(path);
  for (const auto& [key, recs] : paths)
    for (const auto& rec : recs)
      out << key.first << '\t' << key.second << '\t' << format_path(rec.edges)
          << '\t' << rec.count << '\n';
}

void CandidateTable::insert(const std::string& hypo, const std::string& hyper,
                            long long freq) {
  auto key = std::make_pair(to_lower(hypo), to_lower(hyper));
  auto [it, fresh] = entries_.emplace(key, freq);
  if (!fresh) it->second += freq;
  long long& mx = max_by_hypo_[key.first];
  mx = std::max(mx, it->second);
  if (fresh) ++hypo_count_by_hyper_[key.second];
}

long long CandidateTable::freq(const std::string& hypo,
                               const std::string& hyper) const {
  auto it = entries_.find({to_lower(hypo), to_lower(hyper)});
  return it == entries_.end() ? 0 : it->second;
}

long long CandidateTable::max_freq_for_hypo(const std::string& hypo) const {
  auto it = max_by_hypo_.find(to_lower(hypo));
  return it == max_by_hypo_.end() ? 0 : it->second;
}

long long CandidateTable::distinct_hyponyms(const std::string& hyper) const {
  auto it = hypo_count_by_hyper_.find(to_lower(hyper));
  return it == hypo_count_by_hyper_.end() ? 0 : it->second;
}

bool CandidateTable::contains(const std::string& hypo,
                              const std::string& hyper) const {
  return entries_.count({to_lower(hypo), to_lower(hyper)}) > 0;
}

CandidateTable load_candidates(const std::string& path) {
  auto in = open_or_throw(path);
  CandidateTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3)
      fail(path, lineno, "expected 'hypo<TAB>hyper<TAB>freq'");
    long long f = 0;
    try {
      f = std::stoll(cols[2]);
    } catch (const std::exception&) {
      fail(path, lineno, "bad frequency '" + cols[2] + "'");
    }
    if (f < 0) fail(path, lineno, "negative frequency");
    table.insert(cols[0], cols[1], f);
  }
  return table;
}

void write_candidates(const std::string& path, const CandidateTable& table) {
  auto out = create_or_throw(path);
  for (const auto& [key, f] : table.entries())
    out << key.first << '\t' << key.second << '\t' << f << '\n';
}

DatasetSplit load_split(const std::string& path) {
  auto in = open_or_throw(path);
  DatasetSplit split;
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2)
      fail(path, lineno, "expected 'name<TAB>{train|validation|test}'");
    if (!seen.insert(cols[0]).second)
      fail(path, lineno, "taxonomy '" + cols[0] + "' listed twice");
    if (cols[1] == "train")
      split.train.push_back(cols[0]);
    else if (cols[1] == "validation")
      split.validation.push_back(cols[0]);
    else if (cols[1] == "test")
      split.test.push_back(cols[0]);
    else
      fail(path, lineno, "unknown split label '" + cols[1] + "'");
  }
  return split;
}

void write_split(const std::string& path, const DatasetSplit& split) {
  auto out = create_or_throw(path);
  for (const auto& n : split.train) out << n << "\ttrain\n";
  for (const auto& n : split.validation) out << n << "\tvalidation\n";
  for (const auto& n : split.test) out << n << "\ttest\n";
}

}  // namespace taxorl
