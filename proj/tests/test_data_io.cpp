#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "taxorl/data_io.hpp"

using namespace taxorl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("taxorl_test_io_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static inline int counter = 0;
};

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("taxonomy file round trip") {
  TempDir d;
  TaxonomyFile tf;
  tf.name = "animals";
  tf.edges = {{"brown bear", "bear"}, {"bear", "animal"}, {"cat", "animal"}};
  write_taxonomy_file(d.file("animals.tsv"), tf);
  TaxonomyFile back = load_taxonomy_file(d.file("animals.tsv"));
  CHECK(back.name == "animals");
  CHECK(back.edges == tf.edges);
  CHECK(validate_taxonomy(back) == "animal");
}

TEST_CASE("taxonomy validation catches broken trees") {
  TaxonomyFile two_parents{"x", {{"a", "b"}, {"a", "c"}, {"b", "r"}, {"c", "r"}}};
  CHECK_THROWS_AS(validate_taxonomy(two_parents), ParseError);
  TaxonomyFile cycle{"x", {{"a", "b"}, {"b", "a"}}};
  CHECK_THROWS_AS(validate_taxonomy(cycle), ParseError);
  TaxonomyFile two_roots{"x", {{"a", "r"}, {"b", "s"}}};
  CHECK_THROWS_AS(validate_taxonomy(two_roots), ParseError);
}

TEST_CASE("malformed taxonomy line reports its position") {
  TempDir d;
  write_file(d.file("bad.tsv"), "a\tb\nc\n");
  try {
    load_taxonomy_file(d.file("bad.tsv"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("embedding lookups pool multi-word surfaces") {
  TempDir d;
  write_file(d.file("emb.txt"), "bear 1 2\ncat 3 4\n");
  EmbeddingTable t = load_embeddings(d.file("emb.txt"), 2);
  CHECK(t.term_vector("bear") == std::vector<double>{1, 2});
  CHECK(t.term_vector("Bear") == std::vector<double>{1, 2});  // lowercased
  CHECK(t.term_vector("bear cat") == std::vector<double>{2, 3});
  CHECK(t.term_vector("bear dodo") == std::vector<double>{1, 2});
  CHECK(t.term_vector("dodo") == std::vector<double>{0, 0});
  CHECK(t.missing_tokens("bear dodo") == std::vector<std::string>{"dodo"});
}

TEST_CASE("embedding dimension mismatch is a parse error") {
  TempDir d;
  write_file(d.file("emb.txt"), "bear 1 2 3\n");
  CHECK_THROWS_AS(load_embeddings(d.file("emb.txt"), 2), ParseError);
}

TEST_CASE("path format round trip") {
  std::vector<RawPathEdge> edges = {{"such", "ADJ", "amod", '<'},
                                    {"as", "ADP", "prep", '>'},
                                    {"of", "ADP", "pobj", '^'}};
  CHECK(parse_path(format_path(edges)) == edges);
  CHECK(format_path(edges) ==
        "such/ADJ/amod/<_as/ADP/prep/>_of/ADP/pobj/^");
}

TEST_CASE("path file round trip and frequency cap") {
  TempDir d;
  PathMap m;
  m[{"a", "b"}] = {{{{"x", "N", "d", '<'}}, 4}, {{{"y", "V", "e", '>'}}, 2}};
  write_paths(d.file("p.tsv"), m);
  PathMap back = load_paths(d.file("p.tsv"));
  CHECK(back == m);

  // Cap keeps the most frequent records.
  std::string body;
  for (int i = 0; i < 5; ++i)
    body += "a\tb\tw" + std::to_string(i) + "/N/d/<\t" + std::to_string(i + 1) +
            "\n";
  write_file(d.file("many.tsv"), body);
  PathMap capped = load_paths(d.file("many.tsv"), 2);
  REQUIRE(capped.at({"a", "b"}).size() == 2);
  CHECK(capped.at({"a", "b"})[0].count == 5);
  CHECK(capped.at({"a", "b"})[1].count == 4);
}

TEST_CASE("bad path direction is a parse error") {
  TempDir d;
  write_file(d.file("p.tsv"), "a\tb\tw/N/d/?\t1\n");
  CHECK_THROWS_AS(load_paths(d.file("p.tsv")), ParseError);
}

TEST_CASE("candidate table round trip and aggregates") {
  TempDir d;
  CandidateTable t;
  t.insert("cat", "animal", 20);
  t.insert("cat", "mammal", 5);
  t.insert("dog", "animal", 30);
  write_candidates(d.file("c.tsv"), t);
  CandidateTable back = load_candidates(d.file("c.tsv"));
  CHECK(back.entries() == t.entries());
  CHECK(back.freq("cat", "animal") == 20);
  CHECK(back.max_freq_for_hypo("cat") == 20);
  CHECK(back.distinct_hyponyms("animal") == 2);
  CHECK_FALSE(back.contains("animal", "cat"));
}

TEST_CASE("split file round trip rejects bad labels") {
  TempDir d;
  DatasetSplit s;
  s.train = {"t1", "t2"};
  s.validation = {"v1"};
  s.test = {"x1"};
  write_split(d.file("s.tsv"), s);
  DatasetSplit back = load_split(d.file("s.tsv"));
  CHECK(back.train == s.train);
  CHECK(back.validation == s.validation);
  CHECK(back.test == s.test);

  write_file(d.file("bad.tsv"), "t1\tdev\n");
  CHECK_THROWS_AS(load_split(d.file("bad.tsv")), ParseError);
}

TEST_CASE("taxonomy dir loads stems in sorted order") {
  TempDir d;
  write_file(d.file("b.tsv"), "x\ty\n");
  write_file(d.file("a.tsv"), "p\tq\n");
  auto all = load_taxonomy_dir(d.path.string());
  REQUIRE(all.size() == 2);
  CHECK(all[0].name == "a");
  CHECK(all[1].name == "b");
}
