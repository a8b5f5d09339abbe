#pragma once

// Dataset ingestion: numeric CSV (one point per row, optional weight column)
// and svmlight/libsvm ("label idx:val ...", 1-based indices, absent indices
// are zeros, label ignored, dimension = max index in the file).

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kseed/core.hpp"
#include "kseed/report.hpp"

namespace kseed {

enum class DataFormat { Csv, Svmlight };

inline std::optional<DataFormat> parse_format(std::string_view s) {
    if (s == "csv") return DataFormat::Csv;
    if (s == "svmlight" || s == "libsvm") return DataFormat::Svmlight;
    return std::nullopt;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view tok, std::size_t line_no) {
    tok = trim(tok);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw parse_error("not a number: '" + std::string(tok) + "'", line_no);
    return v;
}

}  // namespace detail

inline Dataset load_csv(const std::string& path, std::optional<std::size_t> weights_column = {}) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::vector<double> weights;
    std::string line;
    std::size_t line_no = 0;
    std::size_t arity = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;

        std::vector<double> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = sv.find(',', start);
            const std::string_view tok = sv.substr(start, comma == std::string_view::npos
                                                              ? std::string_view::npos
                                                              : comma - start);
            fields.push_back(detail::parse_number(tok, line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }

        if (arity == 0)
            arity = fields.size();
        else if (fields.size() != arity)
            throw parse_error("expected " + std::to_string(arity) + " columns, got " +
                                  std::to_string(fields.size()),
                              line_no);

        if (weights_column) {
            if (*weights_column >= fields.size())
                throw parse_error("weight column out of range", line_no);
            weights.push_back(fields[*weights_column]);
            fields.erase(fields.begin() + static_cast<std::ptrdiff_t>(*weights_column));
            if (fields.empty()) throw parse_error("row has no coordinate columns", line_no);
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw invalid_input("empty dataset: " + path);

    Dataset d = Dataset::from_rows(rows, std::move(weights));
    d.validate();
    return d;
}

inline Dataset load_svmlight(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);

    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        const std::size_t hash = sv.find('#');
        if (hash != std::string_view::npos) sv = detail::trim(sv.substr(0, hash));
        if (sv.empty()) continue;

        std::vector<std::pair<std::size_t, double>> entries;
        bool saw_label = false;
        std::size_t pos = 0;
        while (pos < sv.size()) {
            while (pos < sv.size() && (sv[pos] == ' ' || sv[pos] == '\t')) ++pos;
            if (pos >= sv.size()) break;
            std::size_t end = pos;
            while (end < sv.size() && sv[end] != ' ' && sv[end] != '\t') ++end;
            const std::string_view tok = sv.substr(pos, end - pos);
            pos = end;

            if (!saw_label) {
                detail::parse_number(tok, line_no);  // label: must be numeric, value ignored
                saw_label = true;
                continue;
            }
            const std::size_t colon = tok.find(':');
            if (colon == std::string_view::npos)
                throw parse_error("expected idx:val, got '" + std::string(tok) + "'", line_no);
            const double idx = detail::parse_number(tok.substr(0, colon), line_no);
            if (idx < 1 || idx != static_cast<double>(static_cast<std::size_t>(idx)))
                throw parse_error("feature indices are 1-based integers", line_no);
            const double val = detail::parse_number(tok.substr(colon + 1), line_no);
            const auto index = static_cast<std::size_t>(idx);
            entries.emplace_back(index, val);
            if (index > max_index) max_index = index;
        }
        if (!saw_label) continue;
        rows.push_back(std::move(entries));
    }
    if (rows.empty() || max_index == 0) throw invalid_input("empty dataset: " + path);

    Dataset d;
    d.n = rows.size();
    d.dim = max_index;
    d.coords.assign(d.n * d.dim, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [index, val] : rows[i]) d.coords[i * d.dim + (index - 1)] = val;
    d.weights.assign(d.n, 1.0);
    d.validate();
    return d;
}

inline Dataset load_dataset(const std::string& path, DataFormat format,
                            std::optional<std::size_t> weights_column = {}) {
    if (format == DataFormat::Svmlight) {
        if (weights_column) throw invalid_input("svmlight input does not carry a weight column");
        return load_svmlight(path);
    }
    return load_csv(path, weights_column);
}

// Full-precision CSV writer; reloading reproduces the exact values. When
// include_weights is set the weight goes in the last column (reload with
// weights_column = dim).
inline void write_csv(std::ostream& os, const Dataset& d, bool include_weights = false) {
    for (std::size_t i = 0; i < d.n; ++i) {
        for (std::size_t c = 0; c < d.dim; ++c) {
            if (c) os << ',';
            os << format_double(d.coords[i * d.dim + c]);
        }
        if (include_weights) os << ',' << format_double(d.weights[i]);
        os << '\n';
    }
}

}  // namespace kseed
