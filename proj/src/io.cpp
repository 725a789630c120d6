#include "metapop/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "metapop/errors.hpp"

namespace metapop::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string value_to_string(const Value& v) {
    if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
    return std::get<std::string>(v);
}

Value value_from_string(const std::string& s) {
    if (s.empty()) return std::string();
    if (s == "true") return true;
    if (s == "false") return false;
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && end != s.c_str()) return d;
    return s;
}

ordered_json value_to_json(const Value& v) {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    const std::string& s = std::get<std::string>(v);
    if (s.empty()) return nullptr;
    return s;
}

Value value_from_json(const ordered_json& j) {
    if (j.is_null()) return std::string();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    throw PreconditionError("unsupported JSON value type in record/table");
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

const Value* Record::find(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

double Record::number(const std::string& key) const {
    const Value* v = find(key);
    if (!v || !std::holds_alternative<double>(*v))
        throw PreconditionError("record field '" + key + "' is missing or not numeric");
    return std::get<double>(*v);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const Record& r) {
    std::string out = "key,value\n";
    for (const auto& [k, v] : r.fields) out += k + "," + value_to_string(v) + "\n";
    return out;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ",";
        out += t.columns[c];
    }
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += value_to_string(row[c]);
        }
        out += "\n";
    }
    return out;
}

Record record_from_csv(const std::string& text) {
    const std::vector<std::string> ls = lines_of(text);
    if (ls.empty() || ls[0] != "key,value")
        throw PreconditionError("record CSV must start with a 'key,value' header");
    Record r;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (ls[i].empty()) continue;
        const std::size_t pos = ls[i].find(',');
        if (pos == std::string::npos)
            throw PreconditionError("malformed record CSV line: " + ls[i]);
        r.add(ls[i].substr(0, pos), value_from_string(ls[i].substr(pos + 1)));
    }
    return r;
}

Table table_from_csv(const std::string& text) {
    const std::vector<std::string> ls = lines_of(text);
    if (ls.empty()) throw PreconditionError("empty table CSV");
    Table t;
    t.columns = split(ls[0], ',');
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (ls[i].empty()) continue;
        std::vector<std::string> cells = split(ls[i], ',');
        if (cells.size() != t.columns.size())
            throw PreconditionError("table CSV row width mismatch: " + ls[i]);
        std::vector<Value> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) row.push_back(value_from_string(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string to_json(const Record& r) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : r.fields) j[k] = value_to_json(v);
    return j.dump(2) + "\n";
}

std::string to_json(const Table& t) {
    ordered_json j = ordered_json::object();
    j["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json r = ordered_json::array();
        for (const auto& v : row) r.push_back(value_to_json(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

Record record_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    if (!j.is_object()) throw PreconditionError("record JSON must be an object");
    Record r;
    for (const auto& [k, v] : j.items()) r.add(k, value_from_json(v));
    return r;
}

Table table_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    if (!j.is_object() || !j.contains("columns") || !j.contains("rows"))
        throw PreconditionError("table JSON must carry 'columns' and 'rows'");
    Table t;
    for (const auto& c : j["columns"]) t.columns.push_back(c.get<std::string>());
    for (const auto& row : j["rows"]) {
        std::vector<Value> r;
        for (const auto& v : row) r.push_back(value_from_json(v));
        if (r.size() != t.columns.size())
            throw PreconditionError("table JSON row width mismatch");
        t.rows.push_back(std::move(r));
    }
    return t;
}

ModelParams parse_config(const std::string& text, const std::string& origin) {
    static const char* keys[9] = {"r1", "r2", "g1", "g2", "kappa1",
                                  "kappa2", "m1", "m2", "theta"};
    std::map<std::string, double> seen;
    const std::vector<std::string> ls = lines_of(text);
    for (std::size_t i = 0; i < ls.size(); ++i) {
        std::string line = ls[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        std::ostringstream where;
        where << origin << ":" << (i + 1);
        if (eq == std::string::npos)
            throw PreconditionError(where.str() + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        bool known = false;
        for (const char* k : keys) known = known || key == k;
        if (!known)
            throw PreconditionError(where.str() + ": unknown key '" + key + "'");
        if (seen.count(key))
            throw PreconditionError(where.str() + ": duplicate key '" + key + "'");
        char* end = nullptr;
        const double d = std::strtod(val.c_str(), &end);
        if (val.empty() || !end || *end != '\0')
            throw PreconditionError(where.str() + ": invalid number '" + val + "'");
        seen[key] = d;
    }
    for (const char* k : keys)
        if (!seen.count(k))
            throw PreconditionError(origin + ": missing key '" + std::string(k) + "'");
    ModelParams p;
    p.r1 = seen["r1"];
    p.r2 = seen["r2"];
    p.g1 = seen["g1"];
    p.g2 = seen["g2"];
    p.kappa1 = seen["kappa1"];
    p.kappa2 = seen["kappa2"];
    p.m1 = seen["m1"];
    p.m2 = seen["m2"];
    p.theta = seen["theta"];
    return p;
}

ModelParams read_config(const std::string& path) {
    return parse_config(read_file(path), path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write file: " + path);
    out << content;
    if (!out) throw PreconditionError("write failed: " + path);
}

} // namespace metapop::io
