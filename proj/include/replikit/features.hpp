#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "replikit/corpus.hpp"
#include "replikit/embeddings.hpp"

namespace replikit {

// Feature columns are positional; this order is frozen.
inline constexpr std::array<std::string_view, 7> kPrefixes = {
    "replicat", "reproduc", "note", "comment", "reply", "re-", "reinvestigat"};

// Component i = (#tokens starting with kPrefixes[i]) / (#tokens). Matching is
// on the literal character sequence, so "re-" only matches hyphenated tokens.
// Empty input yields the zero vector.
Vec prefix_frequencies(const std::vector<std::string>& tokens);

// identify layout (2*(dim+7) = 114 at dim 50):
//   [document_vector(text), prefix_frequencies(text),
//    document_vector(title), prefix_frequencies(title)]
Vec build_identify_features(const PaperRecord& record, const EmbeddingTable& table);

// outcome layout: the bare full-text embedding (dim 50).
Vec build_outcome_features(const PaperRecord& record, const EmbeddingTable& table);

// Header names for the task's feature matrix, e.g. emb_text_00..emb_text_49,
// freq_text_replicat, ..., emb_title_00, ..., freq_title_reinvestigat.
std::vector<std::string> feature_column_names(Task task, int dim);

// CSV export: id column followed by the named feature columns.
void write_features_csv(const LabeledDataset& dataset, int dim, const std::string& path);

}  // namespace replikit
