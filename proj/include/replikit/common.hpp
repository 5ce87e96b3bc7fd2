#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace replikit {

using Vec = std::vector<double>;
using Matrix = std::vector<Vec>;

// Invalid user-supplied input (manifest, embeddings file, CLI arguments,
// inconsistent dataset). The CLI maps this to exit code 2; any other
// exception is an internal error and exits 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace replikit
