#pragma once

#include <string>
#include <variant>
#include <vector>

#include "metapop/model.hpp"

namespace metapop::io {

// Scalar cell of an emitted record or table. The empty string doubles as the
// "absent" value: it serializes to an empty CSV field and to JSON null.
using Value = std::variant<double, bool, std::string>;

// Ordered flat key-value record.
struct Record {
    std::vector<std::pair<std::string, Value>> fields;

    void add(const std::string& key, Value v) { fields.emplace_back(key, std::move(v)); }
    const Value* find(const std::string& key) const;
    double number(const std::string& key) const; // throws if absent/non-numeric
};

// Rectangular table with a header row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
};

// 17 significant digits: lossless double round-trip, '.' separator.
std::string format_double(double v);

std::string to_csv(const Record& r);
std::string to_csv(const Table& t);
Record record_from_csv(const std::string& text);
Table table_from_csv(const std::string& text);

std::string to_json(const Record& r);
std::string to_json(const Table& t);
Record record_from_json(const std::string& text);
Table table_from_json(const std::string& text);

// Flat key = value file with '#' comments; exactly the nine model keys
// r1, r2, g1, g2, kappa1, kappa2, m1, m2, theta are required.
ModelParams read_config(const std::string& path);
ModelParams parse_config(const std::string& text, const std::string& origin);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace metapop::io
