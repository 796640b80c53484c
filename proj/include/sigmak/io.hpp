#pragma once

#include <string>
#include <vector>

namespace sigmak {

// Writes content to path, creating parent directories. Throws IoError.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// RFC 4180 field quoting: fields with commas, quotes or line breaks are quoted.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);
// Shortest round-trip decimal form of a double ("nan", "inf" and "-inf" otherwise).
std::string format_double(double v);

}  // namespace sigmak
