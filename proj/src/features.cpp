#include "replikit/features.hpp"

#include <cstdio>
#include <fstream>

namespace replikit {

Vec prefix_frequencies(const std::vector<std::string>& tokens) {
  Vec freq(kPrefixes.size(), 0.0);
  if (tokens.empty()) return freq;
  for (const auto& token : tokens) {
    for (std::size_t i = 0; i < kPrefixes.size(); ++i) {
      if (token.starts_with(kPrefixes[i])) freq[i] += 1.0;
    }
  }
  const double total = static_cast<double>(tokens.size());
  for (double& f : freq) f /= total;
  return freq;
}

namespace {

void append(Vec& out, const Vec& part) { out.insert(out.end(), part.begin(), part.end()); }

}  // namespace

Vec build_identify_features(const PaperRecord& record, const EmbeddingTable& table) {
  const auto text_tokens = tokenize(record.text);
  const auto title_tokens = tokenize(record.title);
  Vec features;
  features.reserve(2 * (table.dim + kPrefixes.size()));
  append(features, document_vector(text_tokens, table));
  append(features, prefix_frequencies(text_tokens));
  append(features, document_vector(title_tokens, table));
  append(features, prefix_frequencies(title_tokens));
  return features;
}

Vec build_outcome_features(const PaperRecord& record, const EmbeddingTable& table) {
  return document_vector(tokenize(record.text), table);
}

std::vector<std::string> feature_column_names(Task task, int dim) {
  std::vector<std::string> names;
  auto add_block = [&](const std::string& unit) {
    char buf[32];
    for (int j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof(buf), "emb_%s_%02d", unit.c_str(), j);
      names.emplace_back(buf);
    }
    for (const auto& prefix : kPrefixes) {
      names.push_back("freq_" + unit + "_" + std::string(prefix));
    }
  };
  if (task == Task::identify) {
    add_block("text");
    add_block("title");
  } else {
    char buf[32];
    for (int j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof(buf), "emb_text_%02d", j);
      names.emplace_back(buf);
    }
  }
  return names;
}

void write_features_csv(const LabeledDataset& dataset, int dim, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << "id";
  for (const auto& name : feature_column_names(dataset.task, dim)) out << ',' << name;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.ids[i];
    for (double v : dataset.X[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace replikit
