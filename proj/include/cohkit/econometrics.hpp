#pragma once
// Relating coherent diversification to labor productivity: variable
// transforms, OLS with classical inference, equal-count binned quantile
// curves and equal-width heat grids.
//
// Conventions pinned here because tests depend on them:
//  - transform = log10 then z-score with the population (1/n) standard
//    deviation
//  - quantiles interpolate linearly between order statistics:
//    q(p) = v[floor(h)] + (h - floor(h)) (v[floor(h)+1] - v[floor(h)]),
//    h = (n-1) p on the sorted sample
//  - significance stars: * p<0.1, ** p<0.05, *** p<0.01

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "cohkit/coherence.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/records.hpp"

namespace cohkit {

struct AnalysisFrame {
    std::vector<std::string> firm_ids;
    std::vector<double> productivity;  // value added / employees, transformed
    std::vector<double> size;          // total assets, transformed
    std::vector<double> diversification;
    std::vector<double> Gamma;
    std::vector<std::string> country;
    std::vector<RowIssue> dropped;  // join misses and transform rejects

    std::size_t n() const { return firm_ids.size(); }

    const std::vector<double>& column(const std::string& name) const {
        if (name == "productivity") return productivity;
        if (name == "size") return size;
        if (name == "diversification") return diversification;
        if (name == "Gamma") return Gamma;
        throw Error(ErrorClass::usage, "unknown frame column '" + name + "'");
    }
};

struct TransformSpec {
    // columns passed through log10 followed by z-scoring
    std::vector<std::string> log_z_columns = {"productivity", "size",
                                              "diversification", "Gamma"};
};

namespace detail {

inline void log_z_transform(std::vector<double>& col, const std::string& name) {
    for (double& v : col) {
        if (!(v > 0) || !std::isfinite(v)) throw NonFinite(name);
        v = std::log10(v);
    }
    double n = static_cast<double>(col.size());
    double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double var = 0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= n;  // population convention
    double sd = std::sqrt(var);
    if (!(sd > 0) || !std::isfinite(sd)) throw NonFinite(name);
    for (double& v : col) v = (v - mean) / sd;
}

}  // namespace detail

// Inner join of financials and coherence rows on firm id. Rows with
// non-positive productivity or size are dropped into the report before the
// transforms run (log10 needs positive input).
inline AnalysisFrame make_frame(const std::vector<FirmFinancials>& financials,
                                const CoherenceTable& table,
                                const TransformSpec& transforms = {}) {
    std::map<std::string, const CoherenceRow*> by_firm;
    for (const CoherenceRow& row : table.rows) by_firm[row.firm_id] = &row;

    AnalysisFrame frame;
    std::size_t line = 0;
    for (const FirmFinancials& fin : financials) {
        ++line;
        auto it = by_firm.find(fin.firm_id);
        if (it == by_firm.end()) {
            frame.dropped.push_back({line, "no coherence row for " + fin.firm_id});
            continue;
        }
        double prod = fin.labor_productivity();
        if (!(prod > 0) || !std::isfinite(prod) || !(fin.total_assets > 0)) {
            frame.dropped.push_back(
                {line, "non-positive productivity or size for " + fin.firm_id});
            continue;
        }
        frame.firm_ids.push_back(fin.firm_id);
        frame.productivity.push_back(prod);
        frame.size.push_back(fin.total_assets);
        frame.diversification.push_back(it->second->diversification);
        frame.Gamma.push_back(it->second->Gamma);
        frame.country.push_back(fin.country);
    }
    if (frame.n() == 0) throw EmptyJoin();

    for (const std::string& name : transforms.log_z_columns) {
        if (name == "productivity")
            detail::log_z_transform(frame.productivity, name);
        else if (name == "size")
            detail::log_z_transform(frame.size, name);
        else if (name == "diversification")
            detail::log_z_transform(frame.diversification, name);
        else if (name == "Gamma")
            detail::log_z_transform(frame.Gamma, name);
        else
            throw Error(ErrorClass::usage, "unknown transform column '" + name + "'");
    }
    return frame;
}

struct RegressionTerm {
    std::string name;
    double coefficient = 0;
    double std_error = 0;
    double t_stat = 0;
    double p_value = 1;
    std::string stars;  // "", "*", "**", "***"
};

struct RegressionResult {
    std::vector<RegressionTerm> terms;  // regressors, then "(intercept)"
    double r_squared = 0;
    std::size_t n = 0;

    const RegressionTerm* term(const std::string& name) const {
        for (const auto& t : terms)
            if (t.name == name) return &t;
        return nullptr;
    }
};

inline std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

// OLS with intercept via column-pivoted QR. Classical homoskedastic
// standard errors by default; HC1 robust errors on request.
inline RegressionResult ols(const AnalysisFrame& frame,
                            const std::string& response,
                            const std::vector<std::string>& regressors,
                            bool robust_errors = false) {
    const std::vector<double>& y_col = frame.column(response);
    std::size_t n = frame.n();
    std::size_t k = regressors.size() + 1;  // + intercept
    if (n <= k) throw InsufficientData(n, regressors.size());

    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y(i) = y_col[i];
        X(i, 0) = 1.0;
    }
    for (std::size_t j = 0; j < regressors.size(); ++j) {
        const std::vector<double>& col = frame.column(regressors[j]);
        for (std::size_t i = 0; i < n; ++i) X(i, j + 1) = col[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(k)) throw RankDeficient();
    Eigen::VectorXd beta = qr.solve(y);

    Eigen::VectorXd resid = y - X * beta;
    double ssr = resid.squaredNorm();
    double y_mean = y.mean();
    double sst = (y.array() - y_mean).square().sum();
    double dof = static_cast<double>(n - k);

    Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd cov;
    if (robust_errors) {
        // HC1: (X'X)^-1 X' diag(e^2) X (X'X)^-1 * n/(n-k)
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::VectorXd xi = X.row(i).transpose();
            meat += resid(i) * resid(i) * xi * xi.transpose();
        }
        cov = xtx_inv * meat * xtx_inv * (static_cast<double>(n) / dof);
    } else {
        cov = xtx_inv * (ssr / dof);
    }

    boost::math::students_t t_dist(dof);
    RegressionResult result;
    result.n = n;
    result.r_squared = sst > 0 ? 1.0 - ssr / sst : 0.0;
    auto push_term = [&](const std::string& name, std::size_t idx) {
        RegressionTerm term;
        term.name = name;
        term.coefficient = beta(idx);
        term.std_error = std::sqrt(cov(idx, idx));
        term.t_stat = term.coefficient / term.std_error;
        term.p_value =
            2.0 * boost::math::cdf(boost::math::complement(
                      t_dist, std::abs(term.t_stat)));
        term.stars = significance_stars(term.p_value);
        result.terms.push_back(std::move(term));
    };
    for (std::size_t j = 0; j < regressors.size(); ++j)
        push_term(regressors[j], j + 1);
    push_term("(intercept)", 0);
    return result;
}

// One quantile of a copy of `values` under the linear-interpolation rule.
inline double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw TooFewPoints("quantile of empty sample");
    std::sort(values.begin(), values.end());
    double h = (static_cast<double>(values.size()) - 1.0) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

struct BinnedCurve {
    std::vector<double> bin_edges;  // n_bins + 1 x-values
    std::vector<double> x_mean;     // per-bin mean of x
    std::vector<std::vector<double>> y_quantiles;  // [bin][quantile]
    std::vector<std::size_t> counts;
    std::vector<double> quantile_levels;
};

// Equal-count bins on x; per-bin y-quantiles. Bin membership comes from the
// x-sorted order (ties keep original order), so counts differ by at most 1.
inline BinnedCurve binned_quantiles(const AnalysisFrame& frame,
                                    const std::string& x_var,
                                    const std::string& y_var, std::size_t n_bins,
                                    const std::vector<double>& quantiles_req) {
    if (n_bins < 2) throw Error(ErrorClass::usage, "need at least 2 bins");
    const auto& x = frame.column(x_var);
    const auto& y = frame.column(y_var);
    std::size_t n = x.size();
    if (n < n_bins) throw TooFewPoints("fewer points than bins");
    for (double q : quantiles_req)
        if (!(q > 0 && q < 1))
            throw Error(ErrorClass::usage, "quantiles must lie in (0, 1)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    BinnedCurve curve;
    curve.quantile_levels = quantiles_req;
    std::size_t base = n / n_bins, extra = n % n_bins;
    std::size_t start = 0;
    curve.bin_edges.push_back(x[order.front()]);
    for (std::size_t b = 0; b < n_bins; ++b) {
        std::size_t count = base + (b < extra ? 1 : 0);
        std::vector<double> ys;
        double x_sum = 0;
        ys.reserve(count);
        for (std::size_t i = start; i < start + count; ++i) {
            ys.push_back(y[order[i]]);
            x_sum += x[order[i]];
        }
        start += count;
        curve.counts.push_back(count);
        curve.x_mean.push_back(x_sum / static_cast<double>(count));
        curve.bin_edges.push_back(x[order[std::min(start, n - 1)]]);
        std::vector<double> qs;
        for (double q : quantiles_req) qs.push_back(quantile(ys, q));
        curve.y_quantiles.push_back(std::move(qs));
    }
    return curve;
}

struct HeatGrid {
    std::size_t n_cells = 0;
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    std::vector<double> mean_rank;     // n_cells^2, row-major (y major)
    std::vector<std::size_t> counts;   // same layout
    std::vector<bool> empty;           // below min_count
};

// Equal-width n_cells x n_cells grid; cell value is the mean quantile rank
// (average rank scaled to [0,1], ties averaged) of the response among the
// cell's members. Cells under min_count are marked empty, never zero-filled.
inline HeatGrid heat_grid(const AnalysisFrame& frame, const std::string& x_var,
                          const std::string& y_var, const std::string& response,
                          std::size_t n_cells, std::size_t min_count = 1) {
    if (n_cells < 1) throw Error(ErrorClass::usage, "need at least 1 cell");
    const auto& x = frame.column(x_var);
    const auto& y = frame.column(y_var);
    const auto& z = frame.column(response);
    std::size_t n = x.size();
    if (n < 2) throw TooFewPoints("heat grid needs at least 2 points");

    // quantile rank of the response, ties averaged
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && z[order[j + 1]] == z[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[order[k]] = avg / static_cast<double>(n - 1);
        i = j + 1;
    }

    HeatGrid grid;
    grid.n_cells = n_cells;
    grid.x_lo = *std::min_element(x.begin(), x.end());
    grid.x_hi = *std::max_element(x.begin(), x.end());
    grid.y_lo = *std::min_element(y.begin(), y.end());
    grid.y_hi = *std::max_element(y.begin(), y.end());
    double xw = grid.x_hi - grid.x_lo, yw = grid.y_hi - grid.y_lo;
    if (!(xw > 0) || !(yw > 0)) throw TooFewPoints("degenerate axis range");

    std::size_t cells = n_cells * n_cells;
    grid.mean_rank.assign(cells, 0.0);
    grid.counts.assign(cells, 0);
    grid.empty.assign(cells, true);
    auto cell_of = [&](double v, double lo, double w) {
        auto c = static_cast<std::size_t>((v - lo) / w *
                                          static_cast<double>(n_cells));
        return std::min(c, n_cells - 1);
    };
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t cx = cell_of(x[p], grid.x_lo, xw);
        std::size_t cy = cell_of(y[p], grid.y_lo, yw);
        std::size_t c = cy * n_cells + cx;
        grid.mean_rank[c] += rank[p];
        ++grid.counts[c];
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (grid.counts[c] >= min_count && grid.counts[c] > 0) {
            grid.mean_rank[c] /= static_cast<double>(grid.counts[c]);
            grid.empty[c] = false;
        } else {
            grid.mean_rank[c] = 0;
        }
    }
    return grid;
}

// Aligned-text rendering of a set of regression specifications, one column
// per spec: coefficient with stars, standard error in parentheses, R^2 and
// n rows at the bottom.
inline std::string format_regression_table(
    const std::vector<std::string>& row_names,
    const std::vector<std::string>& row_labels,
    const std::vector<RegressionResult>& columns) {
    std::ostringstream out;
    auto cell = [](const std::string& s, std::size_t w) {
        std::string padded = s;
        if (padded.size() < w) padded.insert(0, w - padded.size(), ' ');
        return padded;
    };
    const std::size_t name_w = 18, col_w = 14;
    out << cell("VARIABLES", name_w);
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << cell("(" + std::to_string(c) + ")", col_w);
    out << "\n";
    out << std::string(name_w + col_w * columns.size(), '-') << "\n";
    for (std::size_t r = 0; r < row_names.size(); ++r) {
        out << cell(row_labels[r], name_w);
        std::ostringstream coefs, ses;
        for (const RegressionResult& res : columns) {
            const RegressionTerm* t = res.term(row_names[r]);
            if (!t) {
                coefs << cell("", col_w);
                ses << cell("", col_w);
                continue;
            }
            std::ostringstream c1, c2;
            c1 << std::fixed << std::setprecision(3) << t->coefficient << t->stars;
            c2 << "(" << std::fixed << std::setprecision(3) << t->std_error << ")";
            coefs << cell(c1.str(), col_w);
            ses << cell(c2.str(), col_w);
        }
        out << coefs.str() << "\n" << cell("", name_w) << ses.str() << "\n";
    }
    out << std::string(name_w + col_w * columns.size(), '-') << "\n";
    out << cell("R2", name_w);
    for (const RegressionResult& res : columns) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(3) << res.r_squared;
        out << cell(c.str(), col_w);
    }
    out << "\n" << cell("N", name_w);
    for (const RegressionResult& res : columns)
        out << cell(std::to_string(res.n), col_w);
    out << "\n";
    return out.str();
}

}  // namespace cohkit
