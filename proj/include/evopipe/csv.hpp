#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "evopipe/dataset.hpp"

namespace evopipe {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace detail

// Loads a headered CSV. Feature cells must be numeric and non-empty; the
// label column (by name, defaulting to the last column) may hold arbitrary
// strings and is factorized to 0..K-1 by first appearance.
inline Dataset load_csv(const std::string& path, const std::string& label_column = {})
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file (header row required)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2) throw ConfigError(path + ": need at least one feature and a label column");

    std::size_t label_idx = header.size() - 1;
    if (!label_column.empty()) {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == label_column) {
                label_idx = i;
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError(path + ": no column named '" + label_column + "'");
    }

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ConfigError(path + ": row " + std::to_string(rowno) + " has "
                              + std::to_string(cells.size()) + " cells, expected "
                              + std::to_string(header.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) {
                if (cells[c].empty()) {
                    throw ConfigError(path + ": missing label at row " + std::to_string(rowno));
                }
                raw_labels.push_back(cells[c]);
                continue;
            }
            if (cells[c].empty()) {
                throw ConfigError(path + ": missing value at row " + std::to_string(rowno)
                                  + ", column '" + header[c] + "'");
            }
            double v = 0.0;
            const char* first = cells[c].data();
            const char* last = first + cells[c].size();
            while (first < last && *first == ' ') ++first;
            auto [p, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || p != last) {
                throw ConfigError(path + ": non-numeric value '" + cells[c] + "' at row "
                                  + std::to_string(rowno) + ", column '" + header[c] + "'");
            }
            values.push_back(v);
        }
    }
    if (raw_labels.empty()) throw ConfigError(path + ": no data rows");

    Dataset d;
    const std::size_t n_features = header.size() - 1;
    d.features = Matrix(raw_labels.size(), n_features);
    std::copy(values.begin(), values.end(), d.features.data().begin());

    std::unordered_map<std::string, int> label_ids;
    for (const auto& s : raw_labels) {
        auto [it, fresh] = label_ids.emplace(s, static_cast<int>(label_ids.size()));
        d.labels.push_back(it->second);
    }
    d.n_classes = static_cast<int>(label_ids.size());
    if (d.n_classes < 2) throw ConfigError(path + ": only one class present");
    return d;
}

inline void save_csv(const Dataset& d, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    for (std::size_t f = 0; f < d.n_features(); ++f) out << 'f' << f << ',';
    out << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < d.n_instances(); ++i) {
        for (std::size_t f = 0; f < d.n_features(); ++f) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d.features(i, f));
            out << std::string_view(buf, p - buf) << ',';
        }
        out << d.labels[i] << '\n';
    }
}

} // namespace evopipe
