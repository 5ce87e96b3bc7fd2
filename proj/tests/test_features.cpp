#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "replikit/features.hpp"
#include "test_support.hpp"

using namespace replikit;
using namespace replikit::testing;

namespace {

EmbeddingTable fixture_table() {
  EmbeddingTable table;
  table.dim = 3;
  table.vectors["we"] = {1.0, 2.0, 3.0};
  table.vectors["replicate"] = {-1.0, 0.0, 1.0};
  table.vectors["the"] = {0.0, 0.0, 3.0};
  table.vectors["study"] = {2.0, 2.0, 2.0};
  return table;
}

}  // namespace

TEST_CASE("prefix frequency columns are positional and literal") {
  // order: replicat, reproduc, note, comment, reply, re-, reinvestigat
  Vec f = prefix_frequencies({"replicated", "reproduces", "notes", "commentary", "reply",
                              "re-analysis", "reinvestigated", "banana"});
  REQUIRE(f.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(f[i] == doctest::Approx(1.0 / 8.0));

  // "re-" needs the hyphen: plain "reanalysis" or "rely" must not count.
  Vec g = prefix_frequencies({"reanalysis", "rely", "relate", "re-examination"});
  CHECK(g[5] == doctest::Approx(1.0 / 4.0));
  CHECK(g[0] == 0.0);

  // "notable" misses the final e of "note".
  Vec h = prefix_frequencies({"notable", "note", "noted"});
  CHECK(h[2] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("prefix frequencies of no tokens are all zero") {
  CHECK(prefix_frequencies({}) == Vec(7, 0.0));
}

TEST_CASE("one token can feed several prefix columns") {
  Vec f = prefix_frequencies({"re-investigation"});
  CHECK(f[5] == 1.0);   // re-
  CHECK(f[0] == 0.0);   // replicat
  CHECK(f[6] == 0.0);   // reinvestigat (hyphen breaks it)
}

TEST_CASE("hand-computed text+title feature vector") {
  auto table = fixture_table();
  PaperRecord rec;
  rec.id = "r1";
  rec.role = Role::replication;
  rec.text = "we replicate the replication study again";
  rec.title = "replication of smith";

  Vec x = build_identify_features(rec, table);
  REQUIRE(x.size() == 2 * (3 + 7));

  // text embedding: mean of we, replicate, the, study ("replication" and
  // "again" are out of vocabulary)
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(x[2] == doctest::Approx(2.25));
  // text prefix block: replicate + replication out of 6 tokens
  CHECK(x[3] == doctest::Approx(2.0 / 6.0));
  for (int i = 4; i < 10; ++i) CHECK(x[i] == 0.0);
  // title embedding: nothing in vocabulary
  CHECK(x[10] == 0.0);
  CHECK(x[11] == 0.0);
  CHECK(x[12] == 0.0);
  // title prefix block: replication out of 3 tokens
  CHECK(x[13] == doctest::Approx(1.0 / 3.0));
  for (int i = 14; i < 20; ++i) CHECK(x[i] == 0.0);

  Vec text_only = build_outcome_features(rec, table);
  REQUIRE(text_only.size() == 3);
  CHECK(text_only[0] == doctest::Approx(0.5));
  CHECK(text_only[1] == doctest::Approx(1.0));
  CHECK(text_only[2] == doctest::Approx(2.25));
}

TEST_CASE("feature column names match the layouts") {
  auto identify = feature_column_names(Task::identify, 3);
  REQUIRE(identify.size() == 20);
  CHECK(identify[0] == "emb_text_00");
  CHECK(identify[2] == "emb_text_02");
  CHECK(identify[3] == "freq_text_replicat");
  CHECK(identify[8] == "freq_text_re-");
  CHECK(identify[9] == "freq_text_reinvestigat");
  CHECK(identify[10] == "emb_title_00");
  CHECK(identify[13] == "freq_title_replicat");
  CHECK(identify[19] == "freq_title_reinvestigat");

  auto outcome = feature_column_names(Task::categorize, 50);
  REQUIRE(outcome.size() == 50);
  CHECK(outcome.front() == "emb_text_00");
  CHECK(outcome.back() == "emb_text_49");
}

TEST_CASE("features CSV carries ids plus named columns") {
  auto table = fixture_table();
  Corpus corpus;
  corpus.embedding_dim = table.dim;
  PaperRecord original;
  original.id = "o1";
  original.role = Role::original;
  original.title = "plain";
  original.text = "the study";
  PaperRecord replication;
  replication.id = "r1";
  replication.role = Role::replication;
  replication.title = "replication of it";
  replication.text = "we replicate";
  replication.replicates = {"o1"};
  corpus.records = {original, replication};

  LabeledDataset ds = build_identify_dataset(corpus, table);
  TempDir dir;
  auto path = dir.file("features.csv");
  write_features_csv(ds, table.dim, path);

  std::ifstream in(path);
  std::string header, row1, row2;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row1));
  REQUIRE(std::getline(in, row2));
  CHECK(header.starts_with("id,emb_text_00"));
  CHECK(row1.starts_with("o1,"));
  CHECK(row2.starts_with("r1,"));

  // every row has 1 + d comma-separated cells
  auto cells = [](const std::string& line) {
    return 1 + std::count(line.begin(), line.end(), ',');
  };
  CHECK(cells(header) == 21);
  CHECK(cells(row1) == 21);
  CHECK(cells(row2) == 21);

  // values round-trip: r1 text block mean of we+replicate = (0, 1, 2)
  std::istringstream row(row2);
  std::string cell;
  std::getline(row, cell, ',');  // id
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(0.0));
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(1.0));
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(2.0));
}
