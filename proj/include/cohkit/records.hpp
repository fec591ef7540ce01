#pragma once
// Raw input records: patent families and firm balance-sheet rows. Parsers
// collect per-row problems into a report instead of aborting; only
// corpus-level inconsistencies (the same family id reappearing with
// different fields) throw.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cohkit/csv.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/ipc.hpp"

namespace cohkit {

struct PatentFamilyRecord {
    std::string family_id;
    int year = 0;
    std::set<std::string> applicants;
    std::set<std::string> tech_codes;
    bool triadic_flag = false;

    bool operator==(const PatentFamilyRecord&) const = default;
};

struct FirmFinancials {
    std::string firm_id;
    double value_added = 0;
    long long employees = 0;
    double total_assets = 0;
    std::string country;  // ISO-3166 alpha-2
    int year = 0;

    double labor_productivity() const {
        return value_added / static_cast<double>(employees);
    }
};

// Column-name mapping plus the separator used for multi-valued cells.
struct FamilySchema {
    std::string family_id = "family_id";
    std::string year = "year";
    std::string applicants = "applicants";
    std::string tech_codes = "tech_codes";
    std::string triadic = "triadic";
    char list_separator = ';';
};

struct FinancialsSchema {
    std::string firm_id = "firm_id";
    std::string value_added = "value_added";
    std::string employees = "employees";
    std::string total_assets = "total_assets";
    std::string country = "country";
    std::string year = "year";
};

// One rejected input row: where and why.
struct RowIssue {
    std::size_t line_number = 0;
    std::string reason;
};

template <typename Record>
struct ParseReport {
    std::vector<Record> records;
    std::vector<RowIssue> rejected;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& cell, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : cell) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c)) || !cur.empty()) {
            cur += c;
        }
    }
    while (!cur.empty() && std::isspace(static_cast<unsigned char>(cur.back())))
        cur.pop_back();
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline bool parse_bool_cell(const std::string& s) {
    return s == "1" || s == "true" || s == "TRUE" || s == "yes" || s == "y";
}

}  // namespace detail

// One row per family; repeated ids must carry identical fields and collapse
// to a single record. IPC codes are validated and normalized here so that
// nothing downstream sees an unparseable code.
inline ParseReport<PatentFamilyRecord> parse_family_records(
    const CsvTable& table, const FamilySchema& schema = {}) {
    ParseReport<PatentFamilyRecord> report;
    int c_id = table.require_column(schema.family_id);
    int c_year = table.require_column(schema.year);
    int c_app = table.require_column(schema.applicants);
    int c_tech = table.require_column(schema.tech_codes);
    int c_tri = table.column(schema.triadic);  // optional; default false

    std::map<std::string, std::size_t> seen;  // family_id -> index in records
    for (const CsvRow& row : table.rows) {
        try {
            std::size_t need = static_cast<std::size_t>(
                std::max({c_id, c_year, c_app, c_tech, c_tri}));
            if (row.fields.size() <= need)
                throw MalformedRow(row.line_number, "row has too few fields");

            PatentFamilyRecord rec;
            rec.family_id = row.fields[c_id];
            if (rec.family_id.empty())
                throw MalformedRow(row.line_number, "empty family_id");
            rec.year = static_cast<int>(
                parse_int_field(row.fields[c_year], row.line_number, "year"));

            for (const std::string& a :
                 detail::split_list(row.fields[c_app], schema.list_separator))
                rec.applicants.insert(a);
            if (rec.applicants.empty())
                throw MalformedRow(row.line_number, "empty applicant field");

            for (const std::string& t :
                 detail::split_list(row.fields[c_tech], schema.list_separator)) {
                auto code = parse_ipc(t);
                if (!code)
                    throw MalformedRow(row.line_number,
                                       "unparseable IPC code '" + t + "'");
                rec.tech_codes.insert(code->raw);
            }
            if (rec.tech_codes.empty())
                throw MalformedRow(row.line_number, "empty tech_codes field");

            rec.triadic_flag =
                c_tri >= 0 && detail::parse_bool_cell(row.fields[c_tri]);

            auto it = seen.find(rec.family_id);
            if (it != seen.end()) {
                if (report.records[it->second] != rec)
                    throw DuplicateFamily(rec.family_id);
                continue;  // identical repeat: dedup
            }
            seen.emplace(rec.family_id, report.records.size());
            report.records.push_back(std::move(rec));
        } catch (const MalformedRow& e) {
            report.rejected.push_back({e.line_number, e.reason});
        }
    }
    return report;
}

inline ParseReport<PatentFamilyRecord> parse_family_records(
    const std::string& text, const FamilySchema& schema = {}) {
    return parse_family_records(parse_csv(text), schema);
}

// Truncates every family's codes to `level` and re-deduplicates per family.
// Idempotent at fixed level.
inline std::vector<PatentFamilyRecord> truncate_codes(
    std::vector<PatentFamilyRecord> records, int level) {
    if (level < 1 || level > 4) throw InvalidLevel(level);
    for (PatentFamilyRecord& rec : records) {
        std::set<std::string> truncated;
        for (const std::string& code : rec.tech_codes) {
            auto parsed = parse_ipc(code);
            if (!parsed)
                throw Error(ErrorClass::data, "invalid IPC code '" + code +
                                                  "' in family " + rec.family_id);
            truncated.insert(parsed->truncated(level));
        }
        rec.tech_codes = std::move(truncated);
    }
    return records;
}

inline ParseReport<FirmFinancials> load_financials(
    const CsvTable& table, const FinancialsSchema& schema = {}) {
    ParseReport<FirmFinancials> report;
    int c_id = table.require_column(schema.firm_id);
    int c_va = table.require_column(schema.value_added);
    int c_emp = table.require_column(schema.employees);
    int c_ta = table.require_column(schema.total_assets);
    int c_cty = table.column(schema.country);
    int c_year = table.column(schema.year);

    for (const CsvRow& row : table.rows) {
        try {
            std::size_t need = static_cast<std::size_t>(
                std::max({c_id, c_va, c_emp, c_ta, c_cty, c_year}));
            if (row.fields.size() <= need)
                throw MalformedRow(row.line_number, "row has too few fields");

            FirmFinancials rec;
            rec.firm_id = row.fields[c_id];
            if (rec.firm_id.empty())
                throw MalformedRow(row.line_number, "empty firm_id");
            rec.value_added =
                parse_double_field(row.fields[c_va], row.line_number, "value_added");
            rec.employees =
                parse_int_field(row.fields[c_emp], row.line_number, "employees");
            rec.total_assets = parse_double_field(row.fields[c_ta],
                                                  row.line_number, "total_assets");
            if (c_cty >= 0) rec.country = row.fields[c_cty];
            if (c_year >= 0)
                rec.year = static_cast<int>(
                    parse_int_field(row.fields[c_year], row.line_number, "year"));

            if (!std::isfinite(rec.value_added) || !std::isfinite(rec.total_assets))
                throw MalformedRow(row.line_number, "non-finite financial value");
            if (rec.employees <= 0)
                throw NonPositiveEmployees(row.line_number, rec.firm_id);

            report.records.push_back(std::move(rec));
        } catch (const NonPositiveEmployees& e) {
            report.rejected.push_back({e.line_number, e.what()});
        } catch (const MalformedRow& e) {
            report.rejected.push_back({e.line_number, e.reason});
        }
    }
    return report;
}

inline ParseReport<FirmFinancials> load_financials(
    const std::string& text, const FinancialsSchema& schema = {}) {
    return load_financials(parse_csv(text), schema);
}

}  // namespace cohkit
