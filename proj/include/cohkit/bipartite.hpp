#pragma once
// The agents x technologies matrix and its construction from family
// records. Each active family carries total weight 1, split equally among
// its distinct (applicant, technology) pairs; shares are accumulated as
// exact rationals so cell values do not depend on record order, and are
// converted to floating point only when the matrix is materialized.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cohkit/errors.hpp"
#include "cohkit/records.hpp"

namespace cohkit {

using Rational = boost::multiprecision::cpp_rational;

struct BipartiteMatrix {
    std::vector<std::string> row_ids;  // agents, ascending
    std::vector<std::string> col_ids;  // technologies, ascending
    // per row: (col index, weight), col index ascending, weight > 0
    std::vector<std::vector<std::pair<int, double>>> rows;
    bool binary = false;

    std::size_t n_rows() const { return row_ids.size(); }
    std::size_t n_cols() const { return col_ids.size(); }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.size();
        return n;
    }
    double density() const {
        return n_rows() && n_cols()
                   ? static_cast<double>(nnz()) / (n_rows() * n_cols())
                   : 0.0;
    }

    double at(std::size_t r, std::size_t c) const {
        for (const auto& [col, v] : rows[r])
            if (col == static_cast<int>(c)) return v;
        return 0.0;
    }

    int row_index(const std::string& id) const {
        auto it = std::lower_bound(row_ids.begin(), row_ids.end(), id);
        return it != row_ids.end() && *it == id
                   ? static_cast<int>(it - row_ids.begin())
                   : -1;
    }
    int col_index(const std::string& id) const {
        auto it = std::lower_bound(col_ids.begin(), col_ids.end(), id);
        return it != col_ids.end() && *it == id
                   ? static_cast<int>(it - col_ids.begin())
                   : -1;
    }

    bool operator==(const BipartiteMatrix&) const = default;
};

namespace detail {

// (agent, tech) -> exact accumulated share. std::map keeps materialization
// order independent of insertion order.
using CellMap = std::map<std::pair<std::string, std::string>, Rational>;

inline BipartiteMatrix materialize(const CellMap& cells, bool binarize,
                                   double threshold) {
    std::set<std::string> row_set, col_set;
    for (const auto& [key, w] : cells) {
        double v = w.convert_to<double>();
        if (binarize && !(v > threshold)) continue;
        row_set.insert(key.first);
        col_set.insert(key.second);
    }
    if (row_set.empty()) throw AllPruned();

    BipartiteMatrix m;
    m.binary = binarize;
    m.row_ids.assign(row_set.begin(), row_set.end());
    m.col_ids.assign(col_set.begin(), col_set.end());
    m.rows.resize(m.row_ids.size());
    for (const auto& [key, w] : cells) {
        double v = w.convert_to<double>();
        if (binarize) {
            if (!(v > threshold)) continue;
            v = 1.0;
        }
        int r = m.row_index(key.first);
        int c = m.col_index(key.second);
        m.rows[r].emplace_back(c, v);
    }
    // map iteration is (agent, tech)-sorted, so cols are already ascending
    return m;
}

}  // namespace detail

// Fractional family counting per the splitting rule: family weight 1,
// divided equally over distinct (applicant, code) pairs. `threshold` only
// applies when binarize is set; a cell becomes 1 iff its weight exceeds it.
inline BipartiteMatrix build_matrix(const std::vector<PatentFamilyRecord>& records,
                                    int year, bool triadic_only, bool binarize,
                                    double threshold = 0.0) {
    detail::CellMap cells;
    bool any = false;
    for (const PatentFamilyRecord& rec : records) {
        if (rec.year != year) continue;
        if (triadic_only && !rec.triadic_flag) continue;
        any = true;
        auto n_pairs = static_cast<long long>(rec.applicants.size()) *
                       static_cast<long long>(rec.tech_codes.size());
        Rational share(1, n_pairs);
        for (const std::string& a : rec.applicants)
            for (const std::string& t : rec.tech_codes)
                cells[{a, t}] += share;
    }
    if (!any) throw EmptyYear(year);
    return detail::materialize(cells, binarize, threshold);
}

// Sums row weights within groups; binarization (if requested) happens after
// the summation. Column sums are conserved pre-binarization.
inline BipartiteMatrix aggregate_rows(
    const BipartiteMatrix& m, const std::map<std::string, std::string>& grouping,
    bool binarize, double threshold = 0.0) {
    std::set<std::string> group_set;
    std::vector<const std::string*> row_group(m.n_rows());
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        auto it = grouping.find(m.row_ids[r]);
        if (it == grouping.end()) throw UnmappedRow(m.row_ids[r]);
        row_group[r] = &it->second;
        group_set.insert(it->second);
    }

    BipartiteMatrix out;
    out.binary = binarize;
    out.row_ids.assign(group_set.begin(), group_set.end());
    out.col_ids = m.col_ids;

    std::vector<std::vector<double>> acc(out.row_ids.size(),
                                         std::vector<double>(m.n_cols(), 0.0));
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        int g = out.row_index(*row_group[r]);
        for (const auto& [c, v] : m.rows[r]) acc[g][c] += v;
    }

    out.rows.resize(out.row_ids.size());
    std::vector<bool> col_used(m.n_cols(), false);
    for (std::size_t g = 0; g < acc.size(); ++g) {
        for (std::size_t c = 0; c < m.n_cols(); ++c) {
            double v = acc[g][c];
            if (v == 0.0) continue;
            if (binarize) {
                if (!(v > threshold)) continue;
                v = 1.0;
            }
            out.rows[g].emplace_back(static_cast<int>(c), v);
            col_used[c] = true;
        }
    }

    // prune columns that lost all weight to the threshold
    if (std::find(col_used.begin(), col_used.end(), false) != col_used.end()) {
        std::vector<int> remap(m.n_cols(), -1);
        std::vector<std::string> kept;
        for (std::size_t c = 0; c < m.n_cols(); ++c)
            if (col_used[c]) {
                remap[c] = static_cast<int>(kept.size());
                kept.push_back(out.col_ids[c]);
            }
        out.col_ids = std::move(kept);
        for (auto& row : out.rows)
            for (auto& [c, v] : row) c = remap[c];
    }

    // prune empty group rows
    std::vector<std::string> kept_rows;
    std::vector<std::vector<std::pair<int, double>>> kept_data;
    for (std::size_t g = 0; g < out.rows.size(); ++g)
        if (!out.rows[g].empty()) {
            kept_rows.push_back(out.row_ids[g]);
            kept_data.push_back(std::move(out.rows[g]));
        }
    if (kept_rows.empty()) throw AllPruned();
    out.row_ids = std::move(kept_rows);
    out.rows = std::move(kept_data);
    return out;
}

// Binary view of a weighted matrix (strict positivity, same threshold rule).
inline BipartiteMatrix binarized(const BipartiteMatrix& m, double threshold = 0.0) {
    BipartiteMatrix out = m;
    out.binary = true;
    for (auto& row : out.rows) {
        std::vector<std::pair<int, double>> kept;
        for (auto& [c, v] : row)
            if (v > threshold) kept.emplace_back(c, 1.0);
        row = std::move(kept);
    }
    // pruning mirrors aggregate_rows
    std::vector<bool> col_used(out.n_cols(), false);
    for (auto& row : out.rows)
        for (auto& [c, v] : row) col_used[c] = true;
    if (std::find(col_used.begin(), col_used.end(), false) != col_used.end()) {
        std::vector<int> remap(out.n_cols(), -1);
        std::vector<std::string> kept;
        for (std::size_t c = 0; c < out.n_cols(); ++c)
            if (col_used[c]) {
                remap[c] = static_cast<int>(kept.size());
                kept.push_back(out.col_ids[c]);
            }
        out.col_ids = std::move(kept);
        for (auto& row : out.rows)
            for (auto& [c, v] : row) c = remap[c];
    }
    std::vector<std::string> kept_rows;
    std::vector<std::vector<std::pair<int, double>>> kept_data;
    for (std::size_t r = 0; r < out.rows.size(); ++r)
        if (!out.rows[r].empty()) {
            kept_rows.push_back(out.row_ids[r]);
            kept_data.push_back(std::move(out.rows[r]));
        }
    if (kept_rows.empty()) throw AllPruned();
    out.row_ids = std::move(kept_rows);
    out.rows = std::move(kept_data);
    return out;
}

// Ubiquity u_t (column sums) and diversification d_f (row sums) of a binary
// matrix. Strictly positive after pruning by construction.
struct DegreeVectors {
    std::vector<int> ubiquity;         // per column
    std::vector<int> diversification;  // per row
};

inline DegreeVectors degrees(const BipartiteMatrix& m) {
    if (!m.binary) throw NotBinary();
    DegreeVectors d;
    d.ubiquity.assign(m.n_cols(), 0);
    d.diversification.assign(m.n_rows(), 0);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        d.diversification[r] = static_cast<int>(m.rows[r].size());
        for (const auto& [c, v] : m.rows[r]) ++d.ubiquity[c];
    }
    return d;
}

}  // namespace cohkit
