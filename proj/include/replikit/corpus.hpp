#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "replikit/common.hpp"
#include "replikit/embeddings.hpp"

namespace replikit {

enum class Role { original, replication };

// Outcome of a replication attempt; `unknown` doubles as "missing".
enum class Outcome { success, failure, partial, unknown };

enum class Task { identify, categorize, predict };

std::string to_string(Role role);
std::string to_string(Outcome outcome);
std::string to_string(Task task);
Role parse_role(std::string_view s);
Outcome parse_outcome(std::string_view s);
Task parse_task(std::string_view s);

struct PaperRecord {
  std::string id;
  Role role = Role::original;
  std::string title;
  std::optional<std::string> doi;
  std::string text;
  std::string text_path;  // manifest source of `text`
  Outcome outcome = Outcome::unknown;
  std::optional<bool> different_data;
  std::optional<bool> new_methods;
  std::vector<std::string> replicates;  // ids of the replicated originals
};

struct Corpus {
  std::vector<PaperRecord> records;
  int embedding_dim = 50;

  const PaperRecord* find(const std::string& id) const;
};

struct LabeledDataset {
  Task task = Task::identify;
  std::vector<std::string> ids;
  Matrix X;
  std::vector<int> y;  // 1 = positive class
  std::size_t d = 0;

  std::size_t size() const { return ids.size(); }
  std::size_t positives() const;
};

// Lowercased tokens; a token is a maximal run of letters, digits, hyphens
// and apostrophes, everything else separates. Bytes >= 0x80 are kept inside
// tokens so multi-byte UTF-8 letters survive intact.
std::vector<std::string> tokenize(std::string_view text);

// Tokens that are purely ASCII-alphabetic and present in the embedding
// vocabulary. The vocabulary doubles as the English lexicon.
std::size_t count_english_words(const std::vector<std::string>& tokens,
                                const EmbeddingTable& table);

struct FilterResult {
  Corpus corpus;
  std::vector<std::string> discarded_ids;
};

// Keeps exactly the records whose text has >= 100 English words. Dangling
// `replicates` references are dropped; a replication left with no surviving
// original keeps its row with an emptied link list.
FilterResult filter_corpus(const Corpus& corpus, const EmbeddingTable& table);

// Throws InputError naming the first record violating a corpus invariant:
// duplicate id, original with replicates, replication without replicates,
// or a reference to a missing id.
void validate_corpus(const Corpus& corpus);
void validate_records(const std::vector<PaperRecord>& records);

// Line-delimited JSON manifest, one record per line with fields exactly
// {id, role, title, doi?, outcome?, different_data?, new_methods?,
// replicates?, text_path}. Unknown fields are rejected naming the line.
// text_path is resolved relative to the manifest's directory and its
// content becomes the record text.
Corpus load_manifest(const std::string& path);

LabeledDataset build_identify_dataset(const Corpus& corpus, const EmbeddingTable& table);
LabeledDataset build_categorize_dataset(const Corpus& corpus, const EmbeddingTable& table);
LabeledDataset build_predict_dataset(const Corpus& corpus, const EmbeddingTable& table);

}  // namespace replikit
