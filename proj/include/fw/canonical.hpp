#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace fw {

// Sorted keys, no insignificant whitespace (indent < 0) or fixed indentation,
// reals rendered with exactly nine decimals. The same value always yields the
// same bytes.
std::string canonical_dump(const nlohmann::json& value, int indent = -1);

// Rounds to the 1e-9 grid used by every exported real.
double round9(double x);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace fw
