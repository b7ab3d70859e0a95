#pragma once

// Minimal comma-separated reader/writer for the project's flat data files.
// No quoting: ids and fields never contain commas.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace meddispatch::csv {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, const std::string& source);

std::vector<std::string> split(std::string_view line);

// Throws DataError "<source>:<line>: <what>".
[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what);

double to_double(const Row& row, std::size_t column, const std::string& source);
long to_long(const Row& row, std::size_t column, const std::string& source);

std::string join(const std::vector<std::string>& fields);

}  // namespace meddispatch::csv
