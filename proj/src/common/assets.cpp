#include "taco/assets.hpp"

#include <algorithm>

namespace taco::assets {

std::optional<std::string_view> find(std::string_view path) {
    const auto files = all();
    const auto it = std::find_if(files.begin(), files.end(), [&](const Asset& a) { return a.path == path; });
    if (it == files.end()) return std::nullopt;
    return it->content;
}

}  // namespace taco::assets
