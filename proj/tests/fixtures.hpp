#pragma once
// The three-company, eleven-technology fixture: companies x (computers +
// smartphones, 8 fields), y (cars, 3 fields), z (computers + cars, 5
// fields), with the binary relatedness matrix the fixture's authors laid
// over them. Expected coherence values are exact: Gamma = 7/2, 3, 13/5.

#include <array>
#include <string>
#include <vector>

#include "cohkit/bipartite.hpp"
#include "cohkit/relatedness.hpp"

namespace fixtures {

inline const std::array<std::array<int, 11>, 3>& toy_m() {
    static const std::array<std::array<int, 11>, 3> m = {{
        {1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0},  // x
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},  // y
        {1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0},  // z
    }};
    return m;
}

inline const std::array<std::array<int, 11>, 11>& toy_b() {
    static const std::array<std::array<int, 11>, 11> b = {{
        {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0},
        {1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0},
        {0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0},
        {0, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0},
        {0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0},
        {0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
    }};
    return b;
}

inline const std::array<std::array<int, 11>, 3>& toy_gamma_expected() {
    static const std::array<std::array<int, 11>, 3> g = {{
        {3, 4, 4, 3, 3, 4, 4, 3, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 3, 3, 3},
        {3, 3, 3, 1, 1, 0, 0, 0, 2, 2, 2},
    }};
    return g;
}

// tech ids t01..t11 keep column order stable under the library's sorted-id
// convention
inline std::vector<std::string> toy_tech_ids() {
    std::vector<std::string> ids;
    for (int t = 1; t <= 11; ++t)
        ids.push_back("t" + std::string(t < 10 ? "0" : "") + std::to_string(t));
    return ids;
}

inline cohkit::BipartiteMatrix toy_matrix() {
    cohkit::BipartiteMatrix m;
    m.binary = true;
    m.row_ids = {"x", "y", "z"};
    m.col_ids = toy_tech_ids();
    m.rows.resize(3);
    const auto& data = toy_m();
    for (int f = 0; f < 3; ++f)
        for (int t = 0; t < 11; ++t)
            if (data[f][t]) m.rows[f].emplace_back(t, 1.0);
    return m;
}

template <typename Scalar>
cohkit::RelatednessMatrixT<Scalar> toy_relatedness() {
    cohkit::RelatednessMatrixT<Scalar> r;
    r.kind = cohkit::RelKind::taxonomy;
    r.tech_ids = toy_tech_ids();
    r.values = cohkit::SymMatrix<Scalar>(11);
    const auto& b = toy_b();
    for (int i = 0; i < 11; ++i)
        for (int j = i; j < 11; ++j)
            if (b[i][j]) r.values.set(i, j, Scalar(1));
    return r;
}

}  // namespace fixtures
