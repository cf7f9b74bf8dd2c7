#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "milnor/string_link.hpp"

namespace milnor {

// {"k": 3, "R": 1.0, "strands": [{"vertices": [[x,y,z], ...]}, ...]}
std::string link_to_json(const StringLink& link);

// Parses and validates; throws InputError on any problem.
StringLink link_from_json(std::string_view text);

StringLink read_link_file(const std::filesystem::path& path);
void write_link_file(const std::filesystem::path& path, const StringLink& link);

}  // namespace milnor
