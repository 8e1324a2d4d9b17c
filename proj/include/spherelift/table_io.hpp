#ifndef SPHERELIFT_TABLE_IO_HPP
#define SPHERELIFT_TABLE_IO_HPP

#include <string>
#include <utility>
#include <vector>

namespace spherelift {

// Column-oriented result table with provenance metadata. CSV renders the
// metadata as leading '#' comment lines; JSON keeps it in a "meta" object.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }

    std::string to_csv() const;
    std::string to_json() const;
    std::string render(const std::string& format) const;  // "csv" or "json"
};

// Build identifier baked in at configure time, for provenance headers.
std::string build_version();

// Write content to the path through a temp file + rename, so a failed run
// never leaves a truncated file behind. "-" writes to stdout directly.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace spherelift

#endif
