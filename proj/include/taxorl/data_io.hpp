#ifndef TAXORL_DATA_IO_HPP
#define TAXORL_DATA_IO_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taxorl/taxonomy.hpp"

namespace taxorl {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One gold taxonomy on disk: TSV lines "hyponym<TAB>hypernym".
struct TaxonomyFile {
  std::string name;  // file stem
  std::vector<std::pair<std::string, std::string>> edges;  // (hypo, hyper)
};

// Throws ParseError if the edges do not form a tree (cycle, several roots,
// duplicate edge). Returns the root surface.
std::string validate_taxonomy(const TaxonomyFile& tf);

TaxonomyFile load_taxonomy_file(const std::string& path);
std::vector<TaxonomyFile> load_taxonomy_dir(const std::string& dir);
void write_taxonomy_file(const std::string& path, const TaxonomyFile& tf);

// GloVe text layout: token then dim floats per line. Lookups lowercase the
// token; a multi-word surface gets the mean of its in-vocabulary token
// vectors, or the zero vector when nothing is covered.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  void insert(const std::string& token, std::vector<double> vec);
  bool has_token(const std::string& token) const;
  // Mean-pooled vector for a (possibly multi-word) surface.
  std::vector<double> term_vector(const std::string& surface) const;
  // Tokens of the surface missing from the table, for coverage reporting.
  std::vector<std::string> missing_tokens(const std::string& surface) const;
  std::size_t size() const { return vectors_.size(); }

 private:
  int dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

EmbeddingTable load_embeddings(const std::string& path, int dim);
void write_embeddings(const std::string& path,
                      const std::map<std::string, std::vector<double>>& vecs);

// A dependency-path edge as it appears on disk: lemma/POS/dep/dir.
struct RawPathEdge {
  std::string lemma, pos, dep;
  char dir = '<';  // one of < > ^ V

  bool operator==(const RawPathEdge&) const = default;
};

struct PathRecord {
  std::vector<RawPathEdge> edges;
  long long count = 1;

  bool operator==(const PathRecord&) const = default;
};

using PathMap = std::map<std::pair<std::string, std::string>,
                         std::vector<PathRecord>>;

std::string format_path(const std::vector<RawPathEdge>& edges);
std::vector<RawPathEdge> parse_path(const std::string& text);

// Per pair, keeps the `cap` most frequent paths (file order breaks ties).
PathMap load_paths(const std::string& path, int cap = 200);
void write_paths(const std::string& path, const PathMap& paths);

class CandidateTable {
 public:
  void insert(const std::string& hypo, const std::string& hyper,
              long long freq);
  long long freq(const std::string& hypo, const std::string& hyper) const;
  long long max_freq_for_hypo(const std::string& hypo) const;
  // Number of distinct hyponym surfaces attested for this hypernym.
  long long distinct_hyponyms(const std::string& hyper) const;
  bool contains(const std::string& hypo, const std::string& hyper) const;
  const std::map<std::pair<std::string, std::string>, long long>& entries()
      const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, long long> entries_;
  std::unordered_map<std::string, long long> max_by_hypo_;
  std::unordered_map<std::string, long long> hypo_count_by_hyper_;
};

CandidateTable load_candidates(const std::string& path);
void write_candidates(const std::string& path, const CandidateTable& table);

struct DatasetSplit {
  std::vector<std::string> train, validation, test;
};

DatasetSplit load_split(const std::string& path);
void write_split(const std::string& path, const DatasetSplit& split);

// Shared helpers.
std::string to_lower(std::string s);
std::vector<std::string> split_tokens(const std::string& s);  // on whitespace
std::vector<std::string> split_tabs(const std::string& s);

}  // namespace taxorl

#endif
