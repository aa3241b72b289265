// csv.hpp — deterministic CSV tables with a single JSON metadata comment line.
#pragma once

#include <sfqc/cli/config.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace sfqc::cli {

using Cell = std::variant<double, std::string>;

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json metadata; // written as `# {...}` on the first line

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("csv row width does not match header");
        rows.push_back(std::move(row));
    }
};

inline std::string escape_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

inline std::string render_csv(const CsvTable& t) {
    std::string s = "# " + t.metadata.dump() + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ",";
            if (const double* d = std::get_if<double>(&row[i])) s += format_number(*d);
            else s += escape_csv(std::get<std::string>(row[i]));
        }
        s += "\n";
    }
    return s;
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << render_csv(t);
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

} // namespace sfqc::cli
