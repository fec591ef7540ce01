#pragma once
// Delimited-text reading and writing. Input may be comma- or tab-separated
// (auto-detected from the header unless forced) and may be gzip-compressed;
// zlib's gz* layer reads plain files transparently, so every input goes
// through it.

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "cohkit/errors.hpp"

namespace cohkit {

// Whole-file read, gzip-aware.
inline std::string read_file(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw Error(ErrorClass::data, "cannot open input file: " + path);
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, n);
    bool bad = n < 0;
    gzclose(f);
    if (bad) throw Error(ErrorClass::data, "error while reading: " + path);
    return out;
}

// One parsed row plus its 1-based line number in the source.
struct CsvRow {
    std::size_t line_number = 0;
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
    char delimiter = ',';

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
    int require_column(const std::string& name) const {
        int c = column(name);
        if (c < 0)
            throw Error(ErrorClass::data, "missing required column '" + name + "'");
        return c;
    }
};

namespace detail {

// Parses one line; RFC-4180-style quoting ("" escapes a quote).
inline std::vector<std::string> split_line(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
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
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace detail

// `delimiter` == '\0' auto-detects from the header line (tab wins if present).
inline CsvTable parse_csv(std::string_view text, char delimiter = '\0') {
    CsvTable table;
    std::size_t pos = 0, line_no = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!have_header) {
            if (delimiter == '\0')
                delimiter = line.find('\t') != std::string_view::npos ? '\t' : ',';
            table.delimiter = delimiter;
            table.header = detail::split_line(line, delimiter);
            have_header = true;
            continue;
        }
        table.rows.push_back({line_no, detail::split_line(line, delimiter)});
    }
    if (!have_header)
        throw Error(ErrorClass::data, "input has no header row");
    return table;
}

inline CsvTable read_csv(const std::string& path, char delimiter = '\0') {
    return parse_csv(read_file(path), delimiter);
}

// Shortest round-trippable decimal form of a double.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

// Quote a field only when it needs it.
inline std::string csv_field(const std::string& s, char delim = ',') {
    if (s.find_first_of(std::string{delim} + "\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline double parse_double_field(const std::string& s, std::size_t line,
                                 const std::string& what) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    double v = 0;
    auto [p, ec] = std::from_chars(b, e, v);
    while (p < e && (*p == ' ' || *p == '\t')) ++p;
    if (ec != std::errc{} || p != e)
        throw MalformedRow(line, "cannot parse " + what + " from '" + s + "'");
    return v;
}

inline long long parse_int_field(const std::string& s, std::size_t line,
                                 const std::string& what) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    long long v = 0;
    auto [p, ec] = std::from_chars(b, e, v);
    while (p < e && (*p == ' ' || *p == '\t')) ++p;
    if (ec != std::errc{} || p != e)
        throw MalformedRow(line, "cannot parse " + what + " from '" + s + "'");
    return v;
}

}  // namespace cohkit
