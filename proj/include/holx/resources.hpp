#pragma once

#include <string_view>

namespace holx {

// Schema and mapping files compiled into the library from resources/.
// Returns an empty view for unknown names.
std::string_view builtin_resource(std::string_view name);

}  // namespace holx
