#include "spherelift/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "spherelift/errors.hpp"

#ifndef SPHERELIFT_VERSION
#define SPHERELIFT_VERSION "unknown"
#endif

namespace spherelift {
namespace {

void format_value(std::ostream& os, double v) {
    if (std::isnan(v)) {
        os << "nan";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

std::string build_version() { return SPHERELIFT_VERSION; }

std::string Table::to_csv() const {
    std::ostringstream os;
    for (const auto& [key, value] : meta) os << "# " << key << "=" << value << "\n";
    for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) os << ",";
            format_value(os, row[c]);
        }
        os << "\n";
    }
    return os.str();
}

std::string Table::to_json() const {
    nlohmann::json j;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [key, value] : meta) m[key] = value;
    j["meta"] = m;
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (size_t c = 0; c < row.size() && c < columns.size(); ++c) {
            if (std::isnan(row[c]))
                obj[columns[c]] = nullptr;
            else
                obj[columns[c]] = row[c];
        }
        rows_json.push_back(obj);
    }
    j["rows"] = rows_json;
    return j.dump(2) + "\n";
}

std::string Table::render(const std::string& format) const {
    if (format == "csv") return to_csv();
    if (format == "json") return to_json();
    throw ValidationError(ValidationError::Kind::BadParameter,
                          "unknown output format '" + format + "' (expected csv or json)");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp + " for writing");
        f << content;
        if (!f.good()) throw Error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot move " + tmp + " into place at " + path);
    }
}

}  // namespace spherelift
