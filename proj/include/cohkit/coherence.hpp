#pragma once
// Per-firm coherence quantities.
//
//   gamma[f][t] = sum_t' B[t][t'] M[f][t']   (defined for every t, owned or
//                 not; B's diagonal participates)
//   Gamma[f]    = sum_t M[f][t] gamma[f][t] / d_f
//   WAR_t       = sum_{t'!=t} tau[t][t'] p_t' / sum_{t'!=t} p_t'   over the
//                 firm's portfolio, shares p from the weighted (pre-
//                 binarization) matrix row, normalized per firm
//   WARN_t      = like WAR but restricted to t's neighbors in the maximum
//                 spanning tree of the firm's induced tau submatrix
//   COH         = sum_t (p_t / sum p_t) WAR_t
//
// Gamma is defined for singleton portfolios (it reduces to the B diagonal
// term); WAR, WARN and COH are not, and are reported as absent rather
// than zero.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cohkit/bipartite.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/matrix.hpp"
#include "cohkit/parallel.hpp"
#include "cohkit/relatedness.hpp"
#include "cohkit/spanning_tree.hpp"

namespace cohkit {

namespace detail {

inline void require_same_techs(const std::vector<std::string>& m_cols,
                               const std::vector<std::string>& b_cols) {
    if (m_cols != b_cols)
        throw DimensionMismatch(
            "bipartite columns and relatedness matrix index different "
            "technology sets");
}

}  // namespace detail

// Full gamma matrix (firms x technologies). Scalar follows B, so exact
// rational relatedness yields exact rational coherence.
template <typename Scalar>
std::vector<std::vector<Scalar>> gamma_matrix(const BipartiteMatrix& m,
                                              const RelatednessMatrixT<Scalar>& b) {
    if (!m.binary) throw NotBinary();
    detail::require_same_techs(m.col_ids, b.tech_ids);
    int t_count = static_cast<int>(m.n_cols());
    std::vector<std::vector<Scalar>> g(m.n_rows(),
                                       std::vector<Scalar>(t_count, Scalar(0)));
    parallel_for(m.n_rows(), [&](std::size_t f) {
        const auto& row = m.rows[f];
        for (int t = 0; t < t_count; ++t) {
            Scalar acc(0);
            for (const auto& [owned, v] : row) acc += b.values(t, owned);
            g[f][t] = acc;
        }
    });
    return g;
}

template <typename Scalar>
std::vector<Scalar> coherent_diversification(
    const BipartiteMatrix& m, const std::vector<std::vector<Scalar>>& gamma) {
    std::vector<Scalar> out(m.n_rows(), Scalar(0));
    for (std::size_t f = 0; f < m.n_rows(); ++f) {
        const auto& row = m.rows[f];
        if (row.empty()) throw ZeroDiversification(m.row_ids[f]);
        Scalar acc(0);
        for (const auto& [t, v] : row) acc += gamma[f][t];
        out[f] = acc / Scalar(static_cast<int>(row.size()));
    }
    return out;
}

// Gamma without materializing gamma rows for unowned technologies; the
// summation order matches the gamma_matrix path term for term, so the two
// routes agree bitwise.
template <typename Scalar = double>
std::vector<Scalar> coherent_diversification_direct(
    const BipartiteMatrix& m, const RelatednessMatrixT<Scalar>& b) {
    if (!m.binary) throw NotBinary();
    detail::require_same_techs(m.col_ids, b.tech_ids);
    std::vector<Scalar> out(m.n_rows(), Scalar(0));
    parallel_for(m.n_rows(), [&](std::size_t f) {
        const auto& row = m.rows[f];
        if (row.empty()) return;
        Scalar acc(0);
        for (const auto& [t, vt] : row) {
            Scalar g(0);
            for (const auto& [tp, vp] : row) g += b.values(t, tp);
            acc += g;
        }
        out[f] = acc / Scalar(static_cast<int>(row.size()));
    });
    for (std::size_t f = 0; f < m.n_rows(); ++f)
        if (m.rows[f].empty()) throw ZeroDiversification(m.row_ids[f]);
    return out;
}

// Patent shares per firm from the weighted matrix row. Sum to 1 per firm.
struct PortfolioWeights {
    std::vector<std::string> firm_ids;
    std::vector<std::vector<std::pair<int, double>>> shares;  // col index, p
};

inline PortfolioWeights portfolio_weights(const BipartiteMatrix& weighted) {
    PortfolioWeights w;
    w.firm_ids = weighted.row_ids;
    w.shares.resize(weighted.n_rows());
    for (std::size_t f = 0; f < weighted.n_rows(); ++f) {
        double total = 0;
        for (const auto& [c, v] : weighted.rows[f]) total += v;
        if (total <= 0) throw ZeroDiversification(weighted.row_ids[f]);
        for (const auto& [c, v] : weighted.rows[f])
            w.shares[f].emplace_back(c, v / total);
    }
    return w;
}

// Per-owned-technology WAR for one firm. `shares` must cover exactly the
// firm's portfolio (col index ascending).
inline std::vector<double> war(const RelatednessMatrix& tau_m,
                               const std::vector<std::pair<int, double>>& shares,
                               const std::string& firm_id) {
    if (tau_m.kind != RelKind::tau)
        throw Error(ErrorClass::data, "WAR needs a tau matrix");
    if (shares.size() < 2) throw SingletonPortfolio(firm_id);
    std::vector<double> out(shares.size(), 0.0);
    for (std::size_t i = 0; i < shares.size(); ++i) {
        double num = 0, den = 0;
        for (std::size_t k = 0; k < shares.size(); ++k) {
            if (k == i) continue;
            num += tau_m.values(shares[i].first, shares[k].first) * shares[k].second;
            den += shares[k].second;
        }
        out[i] = num / den;
    }
    return out;
}

// Maximum spanning tree over the firm's induced tau submatrix (complete
// graph: tau entries may be zero or negative, and the tree must still span
// the portfolio).
inline SpanningTree induced_max_tree(
    const RelatednessMatrix& tau_m,
    const std::vector<std::pair<int, double>>& shares) {
    std::vector<std::string> ids;
    ids.reserve(shares.size());
    for (const auto& [c, p] : shares) ids.push_back(tau_m.tech_ids[c]);
    std::vector<TreeEdge> edges;
    for (std::size_t i = 0; i < shares.size(); ++i)
        for (std::size_t j = i + 1; j < shares.size(); ++j)
            edges.push_back({static_cast<int>(i), static_cast<int>(j),
                             tau_m.values(shares[i].first, shares[j].first)});
    return detail::kruskal(std::move(ids), std::move(edges), TreeMode::max);
}

inline std::vector<double> warn(const RelatednessMatrix& tau_m,
                                const std::vector<std::pair<int, double>>& shares,
                                const std::string& firm_id) {
    if (tau_m.kind != RelKind::tau)
        throw Error(ErrorClass::data, "WARN needs a tau matrix");
    if (shares.size() < 2) throw SingletonPortfolio(firm_id);
    SpanningTree tree = induced_max_tree(tau_m, shares);
    std::vector<std::vector<int>> adj(shares.size());
    for (const TreeEdge& e : tree.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<double> out(shares.size(), 0.0);
    for (std::size_t i = 0; i < shares.size(); ++i) {
        double num = 0, den = 0;
        for (int k : adj[i]) {
            num += tau_m.values(shares[i].first, shares[k].first) * shares[k].second;
            den += shares[k].second;
        }
        out[i] = den > 0 ? num / den : 0.0;
    }
    return out;
}

inline double coh(const std::vector<double>& war_values,
                  const std::vector<std::pair<int, double>>& shares,
                  const std::string& firm_id) {
    if (shares.size() < 2) throw SingletonPortfolio(firm_id);
    if (war_values.size() != shares.size())
        throw DimensionMismatch("WAR values vs portfolio shares");
    double num = 0, den = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        num += shares[i].second * war_values[i];
        den += shares[i].second;
    }
    return num / den;
}

// One firm's row of the coherence table. WAR/WARN/COH are absent (not zero)
// for singleton portfolios.
struct CoherenceRow {
    std::string firm_id;
    int diversification = 0;
    double gamma_total = 0;  // Gamma numerator, kept for reporting
    double Gamma = 0;
    std::optional<double> coh;
    std::vector<double> war;   // per owned technology, empty when singleton
    std::vector<double> warn;  // likewise
    bool singleton = false;
};

struct CoherenceTable {
    std::vector<std::string> tech_ids;
    std::vector<CoherenceRow> rows;
    Aggregation b_aggregation = Aggregation::firm;
    // gamma rows are wide (T columns); filled only on demand
    std::vector<std::vector<double>> gamma_rows;
    bool has_gamma_rows = false;
};

// Full table: Gamma against B, legacy WAR/WARN/COH against tau, shares from
// the weighted matrix. Shares are restricted to the binary-owned portfolio
// and renormalized, so a binarization threshold that pruned weak cells does
// not leak sub-threshold fields into WAR. B may come from a coarser
// aggregation than M (same technology set required).
inline CoherenceTable coherence_table(const BipartiteMatrix& m_binary,
                                      const BipartiteMatrix& m_weighted,
                                      const RelatednessMatrix& b,
                                      const RelatednessMatrix& tau_m,
                                      bool keep_gamma_rows = false) {
    if (!m_binary.binary) throw NotBinary();
    detail::require_same_techs(m_binary.col_ids, b.tech_ids);
    detail::require_same_techs(m_binary.col_ids, tau_m.tech_ids);

    if (tau_m.kind != RelKind::tau)
        throw Error(ErrorClass::data, "coherence table needs a tau matrix");

    std::vector<double> Gamma = coherent_diversification_direct(m_binary, b);

    CoherenceTable table;
    table.tech_ids = m_binary.col_ids;
    table.b_aggregation = b.source_aggregation;
    table.rows.resize(m_binary.n_rows());
    if (keep_gamma_rows) {
        table.gamma_rows = gamma_matrix(m_binary, b);
        table.has_gamma_rows = true;
    }

    // shares are prepared sequentially so all validation throws happen on
    // this thread; the parallel sweep below cannot fail
    std::vector<std::vector<std::pair<int, double>>> shares(m_binary.n_rows());
    for (std::size_t f = 0; f < m_binary.n_rows(); ++f) {
        if (m_binary.rows[f].size() < 2) continue;
        int wf = m_weighted.row_index(m_binary.row_ids[f]);
        if (wf < 0) throw DimensionMismatch("firm missing from weighted matrix");
        double total = 0;
        for (const auto& [c, unused] : m_binary.rows[f]) {
            int wc = m_weighted.col_index(m_binary.col_ids[c]);
            double v = wc >= 0 ? m_weighted.at(wf, wc) : 0.0;
            if (v <= 0)
                throw DimensionMismatch("owned technology missing weight for " +
                                        m_binary.row_ids[f]);
            shares[f].emplace_back(c, v);
            total += v;
        }
        for (auto& [c, v] : shares[f]) v /= total;
    }

    parallel_for(m_binary.n_rows(), [&](std::size_t f) {
        CoherenceRow& row = table.rows[f];
        row.firm_id = m_binary.row_ids[f];
        row.diversification = static_cast<int>(m_binary.rows[f].size());
        row.Gamma = Gamma[f];
        row.gamma_total = Gamma[f] * row.diversification;
        if (row.diversification < 2) {
            row.singleton = true;
            return;
        }
        row.war = war(tau_m, shares[f], row.firm_id);
        row.warn = warn(tau_m, shares[f], row.firm_id);
        row.coh = coh(row.war, shares[f], row.firm_id);
    });
    return table;
}

}  // namespace cohkit
