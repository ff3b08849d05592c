#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace qfric::cli {

using Json = nlohmann::ordered_json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// Shortest text that still carries 17 significant digits: round-trips every double.
std::string cell(double x);

// Comma separated, header first, Unix line endings.
std::string to_csv(const Table& t);

// Throws qfric::Error(Io) when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

// {"config": ..., "diagnostics": ...} pretty-printed with a trailing newline.
std::string sidecar(const Json& config, const Json& diagnostics);

// csv: the table at path and the sidecar at path + ".json".
// json: one document at path holding config, diagnostics, columns and rows.
void emit(const std::string& path, const std::string& format, const Json& config, const Json& diagnostics,
          const Table& t);

}
