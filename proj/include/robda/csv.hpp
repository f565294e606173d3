#ifndef ROBDA_CSV_HPP
#define ROBDA_CSV_HPP

// Comma-separated, header row first, '.' decimal point, UTF-8.

#include "robda/dataset.hpp"
#include "robda/error.hpp"
#include "robda/format.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace robda {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

inline std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace detail

inline CsvTable read_csv_table(std::istream& in, const std::string& source = "<stream>") {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) throw DataError(source + ": empty file");
    return table;
}

inline CsvTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return read_csv_table(in, path.string());
}

/// Parses every column except `skip` as numbers. Errors name the data row
/// (1-based, header excluded) and the column.
inline Eigen::MatrixXd numeric_columns(const CsvTable& table, std::vector<std::string>& names,
                                       std::optional<std::size_t> skip = std::nullopt) {
    std::vector<std::size_t> cols;
    names.clear();
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (skip && *skip == j) continue;
        cols.push_back(j);
        names.push_back(table.header[j]);
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto& cell = table.rows[i][cols[k]];
            double v = 0.0;
            if (!parse_double(cell, v) || !std::isfinite(v))
                throw DataError("row " + std::to_string(i + 1) + ", column '" + table.header[cols[k]] +
                                "': cannot parse '" + cell + "' as a finite number");
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
        }
    }
    return x;
}

inline std::size_t column_index(const CsvTable& table, const std::string& name) {
    for (std::size_t j = 0; j < table.header.size(); ++j)
        if (table.header[j] == name) return j;
    throw ConfigError("column '" + name + "' not found");
}

/// Reads a labeled dataset. Class names are the distinct label strings in
/// order of first appearance.
inline LabeledDataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    const auto table = read_csv_table(path);
    const auto label_col = column_index(table, label_column);
    std::vector<std::string> names;
    auto x = numeric_columns(table, names, label_col);

    std::vector<std::string> classes;
    std::vector<std::size_t> labels;
    labels.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& lab = table.rows[i][label_col];
        if (lab.empty())
            throw DataError("row " + std::to_string(i + 1) + ", column '" + label_column + "': empty label");
        std::size_t g = 0;
        while (g < classes.size() && classes[g] != lab) ++g;
        if (g == classes.size()) classes.push_back(lab);
        labels.push_back(g);
    }
    return LabeledDataset(std::move(x), std::move(labels), std::move(classes), std::move(names));
}

/// Extra per-case column appended by to_csv, e.g. provenance flags.
struct ExtraColumn {
    std::string name;
    std::vector<std::string> values;
};

inline std::string to_csv(const LabeledDataset& data, const std::string& label_column = "class",
                          const std::vector<ExtraColumn>& extra = {}) {
    std::ostringstream out;
    for (std::size_t j = 0; j < data.p(); ++j) {
        const std::string name = data.feature_names().empty() ? "x" + std::to_string(j + 1)
                                                              : data.feature_names()[j];
        out << detail::quote_if_needed(name) << ',';
    }
    out << detail::quote_if_needed(label_column);
    for (const auto& col : extra) {
        if (col.values.size() != data.n()) throw ShapeError("extra column '" + col.name + "' has wrong length");
        out << ',' << detail::quote_if_needed(col.name);
    }
    out << '\n';
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.p(); ++j)
            out << format_double(data.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << ',';
        out << detail::quote_if_needed(data.class_names()[data.label(i)]);
        for (const auto& col : extra) out << ',' << detail::quote_if_needed(col.values[i]);
        out << '\n';
    }
    return out.str();
}

inline void save_csv(const LabeledDataset& data, const std::filesystem::path& path,
                     const std::string& label_column = "class", const std::vector<ExtraColumn>& extra = {}) {
    write_file_atomic(path, to_csv(data, label_column, extra));
}

} // namespace robda

#endif // ROBDA_CSV_HPP
