#pragma once
// Projections of the binary bipartite matrix into technology-technology
// relatedness. Four formulations:
//
//   J    co-occurrence counts        J[t][t'] = sum_f M[f][t] M[f][t']
//   tau  standardized deviation of J from its hypergeometric expectation
//   phi  proximity                   J[t][t'] / max(u_t, u_t')
//   B    taxonomy                    (1 / max(u_t, u_t')) sum_f M M / d_f
//
// All kernels accumulate over firms in ascending row-id order so results
// are reproducible bit for bit; parallel variants must preserve that order
// per cell, so the projections stay sequential (they are cheap: the work is
// sum_f d_f^2).

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cohkit/bipartite.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/matrix.hpp"

namespace cohkit {

enum class RelKind { cooccurrence, tau, proximity, taxonomy };
enum class Aggregation { firm, country };

inline const char* to_string(RelKind k) {
    switch (k) {
        case RelKind::cooccurrence: return "cooccurrence";
        case RelKind::tau: return "tau";
        case RelKind::proximity: return "proximity";
        case RelKind::taxonomy: return "taxonomy";
    }
    return "?";
}

inline const char* to_string(Aggregation a) {
    return a == Aggregation::firm ? "firm" : "country";
}

template <typename Scalar>
struct RelatednessMatrixT {
    std::vector<std::string> tech_ids;
    SymMatrix<Scalar> values;
    RelKind kind = RelKind::cooccurrence;
    Aggregation source_aggregation = Aggregation::firm;
    // pairs where the tau null model has zero variance (entry forced to 0)
    std::vector<std::pair<int, int>> degenerate_pairs;
};

using RelatednessMatrix = RelatednessMatrixT<double>;

namespace detail {

inline void require_binary(const BipartiteMatrix& m) {
    if (!m.binary) throw NotBinary();
}

}  // namespace detail

// J[t][t'] = number of agents holding both; diagonal J[t][t] = u_t.
inline RelatednessMatrix cooccurrence(const BipartiteMatrix& m,
                                      Aggregation agg = Aggregation::firm) {
    detail::require_binary(m);
    RelatednessMatrix r;
    r.kind = RelKind::cooccurrence;
    r.source_aggregation = agg;
    r.tech_ids = m.col_ids;
    r.values = SymMatrix<double>(static_cast<int>(m.n_cols()));
    for (std::size_t f = 0; f < m.n_rows(); ++f) {
        const auto& row = m.rows[f];
        for (std::size_t a = 0; a < row.size(); ++a)
            for (std::size_t b = a; b < row.size(); ++b)
                r.values.add(row[a].first, row[b].first, 1.0);
    }
    return r;
}

// tau[t][t'] = (J - mu) / sigma under the hypergeometric null of random
// diversification: mu = u_t u_t' / F and
// sigma^2 = mu (1 - u_t/F) (F - u_t') / (F - 1), F = number of agents.
// Pairs with sigma = 0 (a universal code, or F = 1) are set to 0 and
// flagged. Diagonal is 0 by convention.
inline RelatednessMatrix tau(const RelatednessMatrix& j, const DegreeVectors& deg,
                             std::size_t n_agents) {
    if (j.kind != RelKind::cooccurrence)
        throw Error(ErrorClass::data, "tau needs a cooccurrence matrix");
    int t = static_cast<int>(j.tech_ids.size());
    if (static_cast<int>(deg.ubiquity.size()) != t)
        throw DimensionMismatch("ubiquity vector vs cooccurrence matrix");
    for (int i = 0; i < t; ++i)
        if (j.values(i, i) != static_cast<double>(deg.ubiquity[i]))
            throw DimensionMismatch("J diagonal does not equal ubiquity");

    RelatednessMatrix r;
    r.kind = RelKind::tau;
    r.source_aggregation = j.source_aggregation;
    r.tech_ids = j.tech_ids;
    r.values = SymMatrix<double>(t);
    const double F = static_cast<double>(n_agents);
    for (int a = 0; a < t; ++a) {
        for (int b = a + 1; b < t; ++b) {
            double u1 = deg.ubiquity[a], u2 = deg.ubiquity[b];
            double mu = u1 * u2 / F;
            double var = n_agents > 1
                             ? mu * (1.0 - u1 / F) * (F - u2) / (F - 1.0)
                             : 0.0;
            if (var <= 0.0) {
                r.degenerate_pairs.emplace_back(a, b);
                continue;  // entry stays 0
            }
            r.values.set(a, b, (j.values(a, b) - mu) / std::sqrt(var));
        }
    }
    return r;
}

inline RelatednessMatrix tau(const BipartiteMatrix& m) {
    return tau(cooccurrence(m), degrees(m), m.n_rows());
}

// phi[t][t'] = min(J/u_t, J/u_t') = J[t][t'] / max(u_t, u_t').
inline RelatednessMatrix proximity(const BipartiteMatrix& m,
                                   Aggregation agg = Aggregation::firm) {
    detail::require_binary(m);
    RelatednessMatrix j = cooccurrence(m, agg);
    DegreeVectors deg = degrees(m);
    RelatednessMatrix r;
    r.kind = RelKind::proximity;
    r.source_aggregation = agg;
    r.tech_ids = j.tech_ids;
    int t = static_cast<int>(j.tech_ids.size());
    r.values = SymMatrix<double>(t);
    j.values.for_each_nonzero([&](int a, int b, double v) {
        r.values.set(a, b, v / std::max(deg.ubiquity[a], deg.ubiquity[b]));
    });
    return r;
}

// Taxonomy relatedness, Scalar is double for production runs and an exact
// rational in tests. Diagonal included: B[t][t] = (1/u_t) sum_f M[f][t]/d_f.
template <typename Scalar = double>
RelatednessMatrixT<Scalar> taxonomy(const BipartiteMatrix& m,
                                    Aggregation agg = Aggregation::firm) {
    detail::require_binary(m);
    DegreeVectors deg = degrees(m);
    RelatednessMatrixT<Scalar> r;
    r.kind = RelKind::taxonomy;
    r.source_aggregation = agg;
    r.tech_ids = m.col_ids;
    int t = static_cast<int>(m.n_cols());
    r.values = SymMatrix<Scalar>(t);
    for (std::size_t f = 0; f < m.n_rows(); ++f) {
        const auto& row = m.rows[f];
        if (row.empty()) throw ZeroDegree(m.row_ids[f]);
        Scalar inv_d = Scalar(1) / Scalar(deg.diversification[f]);
        for (std::size_t a = 0; a < row.size(); ++a)
            for (std::size_t b = a; b < row.size(); ++b)
                r.values.add(row[a].first, row[b].first, inv_d);
    }
    // normalize by max ubiquity after the firm sweep
    SymMatrix<Scalar> out(t);
    r.values.for_each_nonzero([&](int a, int b, Scalar v) {
        out.set(a, b, v / Scalar(std::max(deg.ubiquity[a], deg.ubiquity[b])));
    });
    r.values = std::move(out);
    return r;
}

}  // namespace cohkit
