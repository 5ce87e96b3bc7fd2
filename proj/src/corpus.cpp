#include "replikit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "replikit/features.hpp"

namespace replikit {

std::string to_string(Role role) {
  return role == Role::original ? "original" : "replication";
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::failure: return "failure";
    case Outcome::partial: return "partial";
    case Outcome::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Task task) {
  switch (task) {
    case Task::identify: return "identify";
    case Task::categorize: return "categorize";
    case Task::predict: return "predict";
  }
  return "identify";
}

Role parse_role(std::string_view s) {
  if (s == "original") return Role::original;
  if (s == "replication") return Role::replication;
  throw InputError("unknown role '" + std::string(s) + "'");
}

Outcome parse_outcome(std::string_view s) {
  if (s == "success") return Outcome::success;
  if (s == "failure") return Outcome::failure;
  if (s == "partial") return Outcome::partial;
  if (s == "unknown") return Outcome::unknown;
  throw InputError("unknown outcome '" + std::string(s) + "'");
}

Task parse_task(std::string_view s) {
  if (s == "identify") return Task::identify;
  if (s == "categorize") return Task::categorize;
  if (s == "predict") return Task::predict;
  throw InputError("unknown task '" + std::string(s) + "'");
}

const PaperRecord* Corpus::find(const std::string& id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '\'' || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

namespace {

bool is_ascii_alpha(const std::string& token) {
  if (token.empty()) return false;
  for (unsigned char c : token) {
    if (!std::isalpha(c) || c >= 0x80) return false;
  }
  return true;
}

}  // namespace

std::size_t count_english_words(const std::vector<std::string>& tokens,
                                const EmbeddingTable& table) {
  std::size_t count = 0;
  for (const auto& token : tokens) {
    if (is_ascii_alpha(token) && table.contains(token)) ++count;
  }
  return count;
}

FilterResult filter_corpus(const Corpus& corpus, const EmbeddingTable& table) {
  FilterResult result;
  result.corpus.embedding_dim = corpus.embedding_dim;
  std::unordered_set<std::string> surviving;
  for (const auto& record : corpus.records) {
    if (count_english_words(tokenize(record.text), table) >= 100) {
      surviving.insert(record.id);
    } else {
      result.discarded_ids.push_back(record.id);
    }
  }
  for (const auto& record : corpus.records) {
    if (!surviving.count(record.id)) continue;
    PaperRecord kept = record;
    std::erase_if(kept.replicates,
                  [&](const std::string& id) { return !surviving.count(id); });
    result.corpus.records.push_back(std::move(kept));
  }
  return result;
}

void validate_corpus(const Corpus& corpus) { validate_records(corpus.records); }

void validate_records(const std::vector<PaperRecord>& records) {
  std::unordered_set<std::string> ids;
  for (const auto& record : records) {
    if (!ids.insert(record.id).second) {
      throw InputError("duplicate record id '" + record.id + "'");
    }
  }
  for (const auto& record : records) {
    if (record.role == Role::original && !record.replicates.empty()) {
      throw InputError("record '" + record.id + "': original papers must not list replicates");
    }
    if (record.role == Role::replication) {
      if (record.replicates.empty()) {
        throw InputError("record '" + record.id + "': replication without replicates");
      }
      for (const auto& ref : record.replicates) {
        if (!ids.count(ref)) {
          throw InputError("record '" + record.id + "': replicates unknown id '" + ref + "'");
        }
      }
    }
  }
}

namespace {

const std::set<std::string> kManifestFields = {
    "id",      "role",           "title",       "doi",      "outcome",
    "replicates", "different_data", "new_methods", "text_path"};

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open text file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Corpus load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest: " + path);
  const auto base_dir = std::filesystem::path(path).parent_path();

  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ": line " + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(where + ": " + e.what());
    }
    if (!obj.is_object()) throw InputError(where + ": expected a JSON object");
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!kManifestFields.count(key)) {
        throw InputError(where + ": unknown field '" + key + "'");
      }
    }
    PaperRecord record;
    try {
      record.id = obj.at("id").get<std::string>();
      record.role = parse_role(obj.at("role").get<std::string>());
      record.title = obj.at("title").get<std::string>();
      record.text_path = obj.at("text_path").get<std::string>();
      if (obj.contains("doi")) record.doi = obj["doi"].get<std::string>();
      if (obj.contains("outcome")) record.outcome = parse_outcome(obj["outcome"].get<std::string>());
      if (obj.contains("different_data")) record.different_data = obj["different_data"].get<bool>();
      if (obj.contains("new_methods")) record.new_methods = obj["new_methods"].get<bool>();
      if (obj.contains("replicates")) {
        record.replicates = obj["replicates"].get<std::vector<std::string>>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    std::filesystem::path text_path = record.text_path;
    if (text_path.is_relative()) text_path = base_dir / text_path;
    record.text = read_text_file(text_path);
    corpus.records.push_back(std::move(record));
  }
  validate_corpus(corpus);
  return corpus;
}

namespace {

LabeledDataset finish_dataset(LabeledDataset dataset, const char* positive_desc,
                              const char* negative_desc) {
  const std::size_t pos = dataset.positives();
  if (pos == 0) {
    throw InputError(to_string(dataset.task) + " dataset: no " + positive_desc);
  }
  if (pos == dataset.size()) {
    throw InputError(to_string(dataset.task) + " dataset: no " + negative_desc);
  }
  return dataset;
}

}  // namespace

LabeledDataset build_identify_dataset(const Corpus& corpus, const EmbeddingTable& table) {
  LabeledDataset dataset;
  dataset.task = Task::identify;
  dataset.d = 2 * (table.dim + kPrefixes.size());
  for (const auto& record : corpus.records) {
    dataset.ids.push_back(record.id);
    dataset.X.push_back(build_identify_features(record, table));
    dataset.y.push_back(record.role == Role::replication ? 1 : 0);
  }
  return finish_dataset(std::move(dataset), "replications", "originals");
}

LabeledDataset build_categorize_dataset(const Corpus& corpus, const EmbeddingTable& table) {
  LabeledDataset dataset;
  dataset.task = Task::categorize;
  dataset.d = table.dim;
  for (const auto& record : corpus.records) {
    if (record.role != Role::replication) continue;
    if (record.outcome != Outcome::success && record.outcome != Outcome::failure) continue;
    dataset.ids.push_back(record.id);
    dataset.X.push_back(build_outcome_features(record, table));
    dataset.y.push_back(record.outcome == Outcome::failure ? 1 : 0);
  }
  return finish_dataset(std::move(dataset), "failed replications", "successful replications");
}

LabeledDataset build_predict_dataset(const Corpus& corpus, const EmbeddingTable& table) {
  // Outcomes of the replications referencing each original.
  std::unordered_map<std::string, std::vector<Outcome>> outcomes_of;
  for (const auto& record : corpus.records) {
    if (record.role != Role::replication) continue;
    for (const auto& ref : record.replicates) {
      outcomes_of[ref].push_back(record.outcome);
    }
  }
  LabeledDataset dataset;
  dataset.task = Task::predict;
  dataset.d = table.dim;
  for (const auto& record : corpus.records) {
    if (record.role != Role::original) continue;
    auto it = outcomes_of.find(record.id);
    if (it == outcomes_of.end()) continue;  // never replicated
    bool any_partial = false;
    std::size_t successes = 0;
    std::size_t failures = 0;
    for (Outcome outcome : it->second) {
      if (outcome == Outcome::partial) any_partial = true;
      if (outcome == Outcome::success) ++successes;
      if (outcome == Outcome::failure) ++failures;
    }
    // Unknown outcomes are ignored when at least one known outcome exists;
    // partial or mixed results disqualify the original.
    if (any_partial) continue;
    if (successes == 0 && failures == 0) continue;
    if (successes > 0 && failures > 0) continue;
    dataset.ids.push_back(record.id);
    dataset.X.push_back(build_outcome_features(record, table));
    dataset.y.push_back(failures > 0 ? 1 : 0);
  }
  return finish_dataset(std::move(dataset), "failed originals", "successfully replicated originals");
}

}  // namespace replikit
