#include "spherelift/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spherelift/errors.hpp"

namespace spherelift {
namespace {

bool comment_or_blank(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

Mat parse_json_matrix(std::istream& in, const std::string& name) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(name + ": invalid JSON: " + e.what());
    }
    if (!j.contains("k") || !j.contains("entries"))
        throw ParseError(name + ": JSON matrix needs \"k\" and \"entries\"");
    const int k = j["k"].get<int>();
    const auto& rows = j["entries"];
    if (k < 1 || !rows.is_array() || static_cast<int>(rows.size()) != k)
        throw ParseError(name + ": \"entries\" must hold k rows");
    Mat m(k, k);
    for (int i = 0; i < k; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != k)
            throw ParseError(name + ": row " + std::to_string(i + 1) + " must hold k values");
        for (int c = 0; c < k; ++c) m(i, c) = row[c].get<double>();
    }
    return m;
}

Mat parse_text_matrix(std::istream& in, const std::string& name) {
    std::string line;
    int line_no = 0;
    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!comment_or_blank(line)) return true;
        }
        return false;
    };

    if (!next_data_line()) throw ParseError(name + ": empty matrix file", line_no);
    int k = 0;
    {
        std::istringstream hs(line);
        if (!(hs >> k) || k < 1)
            throw ParseError(name + ": line " + std::to_string(line_no) +
                                 ": expected a positive integer k",
                             line_no);
        std::string extra;
        if (hs >> extra)
            throw ParseError(name + ": line " + std::to_string(line_no) +
                                 ": unexpected trailing content after k",
                             line_no);
    }

    Mat m(k, k);
    for (int r = 0; r < k; ++r) {
        if (!next_data_line())
            throw ParseError(name + ": line " + std::to_string(line_no + 1) + ": missing row " +
                                 std::to_string(r + 1) + " of " + std::to_string(k),
                             line_no + 1);
        std::istringstream rs(line);
        for (int c = 0; c < k; ++c) {
            if (!(rs >> m(r, c)))
                throw ParseError(name + ": line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(k) + " numeric values",
                                 line_no);
        }
        std::string extra;
        if (rs >> extra)
            throw ParseError(name + ": line " + std::to_string(line_no) +
                                 ": too many values on matrix row",
                             line_no);
    }
    return m;
}

}  // namespace

Mat read_matrix_stream(std::istream& in, const std::string& name) {
    // peek past whitespace: '{' means JSON
    int ch;
    while ((ch = in.peek()) != EOF && std::isspace(ch)) in.get();
    if (ch == '{') return parse_json_matrix(in, name);
    return parse_text_matrix(in, name);
}

Mat read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path + ": cannot open file");
    return read_matrix_stream(f, path);
}

}  // namespace spherelift
