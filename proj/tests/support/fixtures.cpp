#include "support/fixtures.hpp"

#include <algorithm>
#include <filesystem>

namespace depguard::fixtures
{
std::string path(const std::string& name)
{
    return std::string(DEPGUARD_FIXTURE_DIR) + "/" + name + ".hex";
}

Contract load(const std::string& name)
{
    return load_contract_file(path(name));
}

std::vector<std::string> names()
{
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(DEPGUARD_FIXTURE_DIR))
        if (e.path().extension() == ".hex")
            out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace depguard::fixtures
