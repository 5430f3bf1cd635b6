#pragma once

#include <string_view>

namespace coordrank::builtin {

std::string_view stopwords_text();
std::string_view interjections_text();
std::string_view number_words_text();

}  // namespace coordrank::builtin
