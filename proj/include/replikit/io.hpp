#pragma once

#include <string>

namespace replikit {

// Shortest decimal form that parses back to the same double (17 significant
// digits).
std::string fmt17(double value);

// Writes to `path + ".tmp"` then renames over `path`.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace replikit
