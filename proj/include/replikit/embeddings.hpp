#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "replikit/common.hpp"

namespace replikit {

// Pretrained word-vector table. Tokens are stored lowercased; every vector
// has exactly `dim` components. Read-only after load, safe for concurrent
// lookup.
struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<std::string, Vec> vectors;

  std::size_t vocab_size() const { return vectors.size(); }

  // nullptr when the token is out of vocabulary.
  const Vec* find(const std::string& token) const {
    auto it = vectors.find(token);
    return it == vectors.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& token) const {
    return vectors.count(token) != 0;
  }
};

// Parses a whitespace-separated vector file: one token per line followed by
// `expected_dim` decimal floats. Malformed lines and dimension mismatches
// raise InputError naming the line; duplicate tokens keep the last
// occurrence (warning on stderr). An empty vocabulary is an error.
EmbeddingTable load_embeddings(const std::string& path, int expected_dim);

// Component-wise mean of the vectors of in-vocabulary tokens, counted with
// multiplicity. Out-of-vocabulary tokens contribute nothing; if no token is
// in vocabulary the result is the zero vector. The accumulation order is
// canonical (sorted distinct tokens), so the result is exactly invariant
// under token reordering.
Vec document_vector(const std::vector<std::string>& tokens,
                    const EmbeddingTable& table);

}  // namespace replikit
