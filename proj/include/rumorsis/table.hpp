#pragma once

// Tabular output in two encodings with identical field names:
//
//   csv  - '#'-prefixed metadata lines, a header row, comma-separated rows,
//          then '#'-prefixed summary lines. Missing values are empty fields.
//   json - {"meta": {...}, "columns": [...], "rows": [{...}], "summary": {...}}
//          with missing values as null.
//
// Doubles are written with 17 significant digits so they re-parse exactly.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rumorsis::io {

using Cell = std::variant<std::monostate, double, bool, std::string>;

inline Cell cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

struct Document {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;
};

enum class Format { Csv, Json };

std::string format_double(double v);

void write_csv(std::ostream& os, const Document& doc);
void write_json(std::ostream& os, const Document& doc);
void write(std::ostream& os, const Document& doc, Format format);

} // namespace rumorsis::io
