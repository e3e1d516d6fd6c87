#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace censorlens::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines. Throws IoError if the file cannot be read.
std::vector<Row> read_file(const std::filesystem::path& path, char delimiter = ',');
std::vector<Row> parse(std::string_view content, char delimiter = ',');

/// Quotes the field only when needed.
std::string escape(std::string_view field, char delimiter = ',');
std::string join(const Row& row, char delimiter = ',');

}  // namespace censorlens::csv
