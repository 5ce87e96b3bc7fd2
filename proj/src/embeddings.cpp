#include "replikit/embeddings.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace replikit {

namespace {

std::string lowercase_ascii(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

EmbeddingTable load_embeddings(const std::string& path, int expected_dim) {
  if (expected_dim <= 0) throw InputError("embedding dimension must be positive");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embeddings file: " + path);

  EmbeddingTable table;
  table.dim = expected_dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream iss(line);
    std::string token;
    if (!(iss >> token)) {
      throw InputError(path + ": line " + std::to_string(line_no) + ": empty line");
    }
    Vec v;
    v.reserve(expected_dim);
    double value = 0.0;
    while (iss >> value) v.push_back(value);
    if (!iss.eof()) {
      throw InputError(path + ": line " + std::to_string(line_no) +
                       ": malformed vector component");
    }
    if (static_cast<int>(v.size()) != expected_dim) {
      throw InputError(path + ": line " + std::to_string(line_no) +
                       ": dimension mismatch: found " + std::to_string(v.size()) +
                       ", expected " + std::to_string(expected_dim));
    }
    std::string key = lowercase_ascii(token);
    auto it = table.vectors.find(key);
    if (it != table.vectors.end()) {
      std::cerr << "warning: " << path << ": line " << line_no << ": duplicate token '"
                << key << "', keeping last occurrence\n";
      it->second = std::move(v);
    } else {
      table.vectors.emplace(std::move(key), std::move(v));
    }
  }
  if (table.vectors.empty()) {
    throw InputError(path + ": empty vocabulary");
  }
  return table;
}

Vec document_vector(const std::vector<std::string>& tokens,
                    const EmbeddingTable& table) {
  // Counts per distinct in-vocabulary token, iterated in sorted order so the
  // floating-point accumulation is independent of the input ordering.
  std::map<std::string, int> counts;
  for (const auto& t : tokens) {
    if (table.contains(t)) ++counts[t];
  }
  Vec mean(table.dim, 0.0);
  if (counts.empty()) return mean;
  if (counts.size() == 1) {
    // c*v/c == v holds exactly only when computed as an identity.
    return *table.find(counts.begin()->first);
  }
  long long total = 0;
  for (const auto& [token, count] : counts) {
    const Vec& v = *table.find(token);
    for (int j = 0; j < table.dim; ++j) mean[j] += count * v[j];
    total += count;
  }
  for (double& x : mean) x /= static_cast<double>(total);
  return mean;
}

}  // namespace replikit
