#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kath {

// Throws Error(kIo) when the file cannot be read.
std::string read_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// Writes to "<path>.tmp" and renames over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

// Splits on '\n' and drops a trailing '\r' from each line. A final empty
// segment after the last newline is not returned.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace kath
