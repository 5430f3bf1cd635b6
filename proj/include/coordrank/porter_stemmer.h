#pragma once

#include <string>
#include <string_view>

namespace coordrank {

// Classic Porter (1980) suffix stripping. Expects a lowercase a-z word; the
// result is never longer than the input.
std::string porter_stem(std::string_view word);

}  // namespace coordrank
