#pragma once

#include "depguard/frontend.hpp"

#include <string>
#include <vector>

namespace depguard::fixtures
{
/// Absolute path of tests/fixtures/<name>.hex.
std::string path(const std::string& name);

Contract load(const std::string& name);

/// Fixture names in the corpus, sorted.
std::vector<std::string> names();
}  // namespace depguard::fixtures
