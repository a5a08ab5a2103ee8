#pragma once

#include <string_view>

namespace kofn {

// git-describe style identifier baked in at configure time.
std::string_view version_string() noexcept;

}  // namespace kofn
