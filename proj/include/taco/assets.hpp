#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace taco::assets {

struct Asset {
    std::string_view path;
    std::string_view content;
};

/// Every file compiled in from data/templates and data/langid.
std::span<const Asset> all();

std::optional<std::string_view> find(std::string_view path);

}  // namespace taco::assets
