#pragma once

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"

namespace tzitzeica {

// Shortest-safe round-trip text: 17 significant digits, '.' decimal,
// scientific for |v| < 1e-4 (std::chars_format::general switches there).
inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw DomainError("format_number failed");
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DomainError("not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) {
        for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
        os_ << '\n';
    }

    template <class... Fields>
    void row(const Fields&... f) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(f), first = false), ...);
        os_ << '\n';
    }

private:
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    std::ostream& os_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<std::string>> raw; // unparsed cells, same shape as rows
};

// Numeric CSV reader; non-numeric cells are kept in `raw` and read as NaN.
inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (auto f : split_commas(line)) t.header.emplace_back(f);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_commas(line);
        if (cells.size() != t.header.size())
            throw DomainError("CSV line " + std::to_string(lineno) + ": wrong field count");
        std::vector<double> row;
        std::vector<std::string> raw;
        for (auto c : cells) {
            raw.emplace_back(c);
            try {
                row.push_back(parse_number(c));
            } catch (const DomainError&) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        t.rows.push_back(std::move(row));
        t.raw.push_back(std::move(raw));
    }
    return t;
}

} // namespace tzitzeica
