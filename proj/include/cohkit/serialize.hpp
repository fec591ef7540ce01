#pragma once
// File renderings of the coherence table and the analysis outputs. All
// numeric fields use shortest round-trip formatting so identical runs
// produce identical bytes.

#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cohkit/coherence.hpp"
#include "cohkit/csv.hpp"
#include "cohkit/econometrics.hpp"
#include "cohkit/synth.hpp"

namespace cohkit {

// Family records in the same shape corpus ingest consumes; multi-valued
// cells use ';'.
inline void write_family_records_csv(std::ostream& os,
                                     const std::vector<PatentFamilyRecord>& records) {
    os << "family_id,year,applicants,tech_codes,triadic\n";
    for (const PatentFamilyRecord& rec : records) {
        std::string apps, codes;
        for (const std::string& a : rec.applicants) {
            if (!apps.empty()) apps += ';';
            apps += a;
        }
        for (const std::string& t : rec.tech_codes) {
            if (!codes.empty()) codes += ';';
            codes += t;
        }
        os << csv_field(rec.family_id) << ',' << rec.year << ','
           << csv_field(apps) << ',' << csv_field(codes) << ','
           << (rec.triadic_flag ? 1 : 0) << '\n';
    }
}

inline void write_financials_csv(std::ostream& os,
                                 const std::vector<FirmFinancials>& financials) {
    os << "firm_id,value_added,employees,total_assets,country,year\n";
    for (const FirmFinancials& fin : financials)
        os << csv_field(fin.firm_id) << ',' << format_double(fin.value_added)
           << ',' << fin.employees << ',' << format_double(fin.total_assets)
           << ',' << csv_field(fin.country) << ',' << fin.year << '\n';
}

inline void write_truth_csv(std::ostream& os, const SyntheticTruth& truth) {
    os << "firm_id,n_lines,lines,block_sizes,mean_block_size,size,productivity,"
          "country\n";
    for (const TruthRow& row : truth.rows) {
        std::string lines, sizes;
        for (int l : row.product_lines) {
            if (!lines.empty()) lines += ';';
            lines += std::to_string(l);
        }
        for (int k : row.block_sizes) {
            if (!sizes.empty()) sizes += ';';
            sizes += std::to_string(k);
        }
        os << csv_field(row.firm_id) << ',' << row.product_lines.size() << ','
           << lines << ',' << sizes << ',' << format_double(row.mean_block_size)
           << ',' << format_double(row.size) << ','
           << format_double(row.productivity) << ',' << csv_field(row.country)
           << '\n';
    }
}

inline void write_coherence_csv(std::ostream& os, const CoherenceTable& table) {
    os << "firm_id,d_f,Gamma,COH,flags\n";
    for (const CoherenceRow& row : table.rows) {
        os << csv_field(row.firm_id) << ',' << row.diversification << ','
           << format_double(row.Gamma) << ',';
        if (row.coh) os << format_double(*row.coh);
        os << ',' << (row.singleton ? "singleton" : "") << '\n';
    }
}

// firm_id,d_f,Gamma,COH,flags with one Gamma column per technology when
// gamma rows were kept.
inline void write_coherence_json(std::ostream& os, const CoherenceTable& table) {
    nlohmann::json j;
    j["b_aggregation"] = to_string(table.b_aggregation);
    j["tech_ids"] = table.tech_ids;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const CoherenceRow& row = table.rows[i];
        nlohmann::json r;
        r["firm_id"] = row.firm_id;
        r["d_f"] = row.diversification;
        r["Gamma"] = row.Gamma;
        if (row.coh)
            r["COH"] = *row.coh;
        else
            r["COH"] = nullptr;
        r["singleton"] = row.singleton;
        if (!row.war.empty()) {
            r["WAR"] = row.war;
            r["WARN"] = row.warn;
        }
        if (table.has_gamma_rows) r["gamma"] = table.gamma_rows[i];
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
}

inline nlohmann::json regression_to_json(const RegressionResult& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["r_squared"] = r.r_squared;
    nlohmann::json terms = nlohmann::json::array();
    for (const RegressionTerm& t : r.terms)
        terms.push_back({{"name", t.name},
                         {"coefficient", t.coefficient},
                         {"std_error", t.std_error},
                         {"t_stat", t.t_stat},
                         {"p_value", t.p_value},
                         {"stars", t.stars}});
    j["terms"] = std::move(terms);
    return j;
}

inline void write_binned_curve_csv(std::ostream& os, const BinnedCurve& curve) {
    os << "bin,x_low,x_high,x_mean,count";
    for (double q : curve.quantile_levels) os << ",q" << format_double(q);
    os << '\n';
    for (std::size_t b = 0; b < curve.counts.size(); ++b) {
        os << b << ',' << format_double(curve.bin_edges[b]) << ','
           << format_double(curve.bin_edges[b + 1]) << ','
           << format_double(curve.x_mean[b]) << ',' << curve.counts[b];
        for (double q : curve.y_quantiles[b]) os << ',' << format_double(q);
        os << '\n';
    }
}

inline void write_heat_grid_csv(std::ostream& os, const HeatGrid& grid) {
    os << "x_cell,y_cell,x_low,x_high,y_low,y_high,count,mean_rank,empty\n";
    double xw = (grid.x_hi - grid.x_lo) / static_cast<double>(grid.n_cells);
    double yw = (grid.y_hi - grid.y_lo) / static_cast<double>(grid.n_cells);
    for (std::size_t cy = 0; cy < grid.n_cells; ++cy) {
        for (std::size_t cx = 0; cx < grid.n_cells; ++cx) {
            std::size_t c = cy * grid.n_cells + cx;
            os << cx << ',' << cy << ','
               << format_double(grid.x_lo + xw * static_cast<double>(cx)) << ','
               << format_double(grid.x_lo + xw * static_cast<double>(cx + 1)) << ','
               << format_double(grid.y_lo + yw * static_cast<double>(cy)) << ','
               << format_double(grid.y_lo + yw * static_cast<double>(cy + 1)) << ','
               << grid.counts[c] << ',';
            if (!grid.empty[c]) os << format_double(grid.mean_rank[c]);
            os << ',' << (grid.empty[c] ? 1 : 0) << '\n';
        }
    }
}

}  // namespace cohkit
