// cohkit: batch front-end for the coherent-diversification pipeline.
//
// Subcommands: synth, ingest, relatedness, coherence, analyze. Every
// command echoes its effective config and input hashes into
// <out>/manifest.json; data outputs are byte-identical across runs with
// the same config and seed. Exit codes: 0 ok, 2 usage, 3 data error,
// 4 numeric error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohkit/cohkit.hpp"

namespace fs = std::filesystem;
using cohkit::RunConfig;

namespace {

struct PipelineInputs {
    cohkit::BipartiteMatrix weighted;
    cohkit::BipartiteMatrix binary;
    std::size_t n_families = 0;
    std::size_t n_rejected = 0;
};

void require_input(const std::string& path, const std::string& what) {
    if (path.empty())
        throw cohkit::InvalidConfig("no " + what + " path given");
    if (!fs::exists(path))
        throw cohkit::InvalidConfig(what + " path does not exist: " + path);
}

PipelineInputs load_matrices(const RunConfig& cfg) {
    require_input(cfg.records_path, "records");
    cohkit::CsvTable table = cohkit::read_csv(cfg.records_path);
    auto parsed = cohkit::parse_family_records(table, cfg.family_schema);
    for (const cohkit::RowIssue& issue : parsed.rejected)
        std::cerr << "warning: line " << issue.line_number << ": " << issue.reason
                  << "\n";
    auto records = cohkit::truncate_codes(std::move(parsed.records), cfg.level);

    PipelineInputs out;
    out.n_families = records.size();
    out.n_rejected = parsed.rejected.size();
    out.weighted = cohkit::build_matrix(records, cfg.year, cfg.triadic_only,
                                        /*binarize=*/false);
    out.binary = cohkit::build_matrix(records, cfg.year, cfg.triadic_only,
                                      /*binarize=*/true, cfg.binarize_threshold);
    return out;
}

std::map<std::string, std::string> load_grouping(const RunConfig& cfg) {
    std::map<std::string, std::string> grouping;
    if (!cfg.grouping_path.empty()) {
        cohkit::CsvTable t = cohkit::read_csv(cfg.grouping_path);
        int c_firm = t.require_column("firm_id");
        int c_group = t.require_column("group_id");
        for (const cohkit::CsvRow& row : t.rows)
            grouping[row.fields[c_firm]] = row.fields[c_group];
        return grouping;
    }
    // fall back to the country column of the financials
    require_input(cfg.financials_path, "financials (for country grouping)");
    auto fins = cohkit::load_financials(cohkit::read_csv(cfg.financials_path),
                                        cfg.financials_schema);
    for (const cohkit::FirmFinancials& fin : fins.records)
        grouping[fin.firm_id] = fin.country;
    return grouping;
}

// B and tau at the configured aggregation scale. Country aggregation
// reshapes only the relatedness estimate; firm portfolios stay firm-level.
struct RelatednessPair {
    cohkit::RelatednessMatrix b;
    cohkit::RelatednessMatrix tau;
};

RelatednessPair relatedness_for_coherence(const PipelineInputs& in,
                                          const RunConfig& cfg) {
    RelatednessPair out;
    if (!cfg.b_matrix_path.empty()) {
        // externally supplied B (adjacency CSV); tau still comes from the
        // firm-level matrix so WAR/WARN stay defined
        require_input(cfg.b_matrix_path, "b-matrix");
        out.b = cohkit::read_adjacency(cohkit::read_csv(cfg.b_matrix_path),
                                       cohkit::RelKind::taxonomy,
                                       cfg.aggregation == "country"
                                           ? cohkit::Aggregation::country
                                           : cohkit::Aggregation::firm);
        out.tau = cohkit::tau(in.binary);
        return out;
    }
    if (cfg.aggregation == "country") {
        auto grouping = load_grouping(cfg);
        cohkit::BipartiteMatrix aggregated = cohkit::aggregate_rows(
            in.weighted, grouping, /*binarize=*/true, cfg.binarize_threshold);
        if (aggregated.col_ids != in.binary.col_ids)
            throw cohkit::DimensionMismatch(
                "aggregation changed the technology universe");
        out.b = cohkit::taxonomy(aggregated, cohkit::Aggregation::country);
        out.tau = cohkit::tau(aggregated);
        out.tau.source_aggregation = cohkit::Aggregation::country;
    } else {
        out.b = cohkit::taxonomy(in.binary);
        out.tau = cohkit::tau(in.binary);
    }
    return out;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cohkit::Error(cohkit::ErrorClass::data,
                                  "cannot write " + path.string());
    out << text;
}

template <typename WriteFn>
void write_with(const fs::path& path, WriteFn&& fn) {
    std::ostringstream os;
    fn(os);
    write_text_file(path, os.str());
}

int cmd_synth(const RunConfig& cfg) {
    cohkit::SynthOutput out = cohkit::generate(cfg.synth);
    fs::create_directories(cfg.out_dir);
    fs::path dir(cfg.out_dir);
    write_with(dir / "records.csv", [&](std::ostream& os) {
        cohkit::write_family_records_csv(os, out.records);
    });
    write_with(dir / "financials.csv", [&](std::ostream& os) {
        cohkit::write_financials_csv(os, out.financials);
    });
    write_with(dir / "truth.csv", [&](std::ostream& os) {
        cohkit::write_truth_csv(os, out.truth);
    });
    cohkit::write_manifest(cfg, "synth", {});
    cohkit::Json summary;
    summary["firms"] = out.financials.size();
    summary["families"] = out.records.size();
    summary["lines"] = out.line_techs.size();
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_ingest(const RunConfig& cfg) {
    PipelineInputs in = load_matrices(cfg);
    fs::create_directories(cfg.out_dir);
    fs::path dir(cfg.out_dir);
    write_with(dir / "matrix_weighted.csv", [&](std::ostream& os) {
        cohkit::write_triplets(os, in.weighted);
    });
    write_with(dir / "matrix_binary.csv", [&](std::ostream& os) {
        cohkit::write_triplets(os, in.binary);
    });
    cohkit::Json meta;
    meta["year"] = cfg.year;
    meta["level"] = cfg.level;
    meta["triadic_only"] = cfg.triadic_only;
    meta["files"] = {
        {"matrix_weighted.csv", {{"binarize", false}}},
        {"matrix_binary.csv",
         {{"binarize", true}, {"threshold", cfg.binarize_threshold}}}};
    write_text_file(dir / "matrix_meta.json", meta.dump(2) + "\n");
    cohkit::write_manifest(cfg, "ingest", {cfg.records_path});

    cohkit::Json summary;
    summary["firms"] = in.binary.n_rows();
    summary["codes"] = in.binary.n_cols();
    summary["families"] = in.n_families;
    summary["rejected_rows"] = in.n_rejected;
    summary["nnz"] = in.binary.nnz();
    summary["density"] = in.binary.density();
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_relatedness(const RunConfig& cfg) {
    PipelineInputs in = load_matrices(cfg);
    cohkit::BipartiteMatrix m = in.binary;
    cohkit::Aggregation agg = cohkit::Aggregation::firm;
    if (cfg.aggregation == "country") {
        m = cohkit::aggregate_rows(in.weighted, load_grouping(cfg),
                                   /*binarize=*/true, cfg.binarize_threshold);
        agg = cohkit::Aggregation::country;
    }

    std::vector<std::string> kinds;
    if (cfg.kind == "all")
        kinds = {"cooccurrence", "tau", "proximity", "taxonomy"};
    else
        kinds = {cfg.kind};

    fs::create_directories(cfg.out_dir);
    fs::path dir(cfg.out_dir);
    cohkit::NetworkFormat fmt = cohkit::parse_network_format(cfg.network_format);
    const char* ext = fmt == cohkit::NetworkFormat::graphml ? ".graphml" : ".csv";

    for (const std::string& kind : kinds) {
        cohkit::RelatednessMatrix r;
        if (kind == "cooccurrence") {
            r = cohkit::cooccurrence(m, agg);
        } else if (kind == "tau") {
            r = cohkit::tau(m);
            r.source_aggregation = agg;
        } else if (kind == "proximity") {
            r = cohkit::proximity(m, agg);
        } else {
            r = cohkit::taxonomy(m, agg);
        }
        write_text_file(dir / (kind + ext), cohkit::export_network(r, fmt));
        if (!cfg.tree_mode.empty()) {
            cohkit::SpanningTree tree = cohkit::spanning_tree(
                r, cfg.tree_mode == "max" ? cohkit::TreeMode::max
                                          : cohkit::TreeMode::min);
            write_text_file(dir / (kind + "_tree.csv"),
                            cohkit::export_network(tree,
                                                   cohkit::NetworkFormat::edge_list));
        }
    }
    cohkit::write_manifest(cfg, "relatedness", {cfg.records_path});
    cohkit::Json summary;
    summary["codes"] = m.n_cols();
    summary["agents"] = m.n_rows();
    summary["kinds"] = kinds;
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_coherence(const RunConfig& cfg) {
    PipelineInputs in = load_matrices(cfg);
    RelatednessPair rel = relatedness_for_coherence(in, cfg);
    cohkit::CoherenceTable table = cohkit::coherence_table(
        in.binary, in.weighted, rel.b, rel.tau, cfg.gamma_rows);

    fs::create_directories(cfg.out_dir);
    fs::path dir(cfg.out_dir);
    write_with(dir / "coherence.csv", [&](std::ostream& os) {
        cohkit::write_coherence_csv(os, table);
    });
    if (cfg.gamma_rows)
        write_with(dir / "coherence.json", [&](std::ostream& os) {
            cohkit::write_coherence_json(os, table);
        });
    cohkit::write_manifest(cfg, "coherence",
                           {cfg.records_path, cfg.financials_path,
                            cfg.grouping_path});
    cohkit::Json summary;
    summary["firms"] = table.rows.size();
    summary["source_aggregation"] = to_string(table.b_aggregation);
    std::size_t singletons = 0;
    for (const auto& row : table.rows) singletons += row.singleton ? 1 : 0;
    summary["singletons"] = singletons;
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg) {
    require_input(cfg.financials_path, "financials");
    PipelineInputs in = load_matrices(cfg);
    RelatednessPair rel = relatedness_for_coherence(in, cfg);
    cohkit::CoherenceTable table =
        cohkit::coherence_table(in.binary, in.weighted, rel.b, rel.tau);

    auto fins = cohkit::load_financials(cohkit::read_csv(cfg.financials_path),
                                        cfg.financials_schema);
    for (const cohkit::RowIssue& issue : fins.rejected)
        std::cerr << "warning: line " << issue.line_number << ": " << issue.reason
                  << "\n";
    cohkit::AnalysisFrame frame = cohkit::make_frame(fins.records, table);

    // the four specifications of the productivity table
    std::vector<std::vector<std::string>> specs = {
        {"size", "diversification", "Gamma"},
        {"size", "Gamma"},
        {"Gamma"},
        {"size", "diversification"}};
    std::vector<cohkit::RegressionResult> results;
    for (const auto& regs : specs)
        results.push_back(
            cohkit::ols(frame, "productivity", regs, cfg.robust_errors));

    fs::create_directories(cfg.out_dir);
    fs::path dir(cfg.out_dir);
    std::string text_table = cohkit::format_regression_table(
        {"size", "diversification", "Gamma"},
        {"Size", "Diversification", "Coherent Div."}, results);
    write_text_file(dir / "regressions.txt", text_table);

    cohkit::Json jreg = cohkit::Json::array();
    for (const auto& r : results) jreg.push_back(cohkit::regression_to_json(r));
    write_text_file(dir / "regressions.json", jreg.dump(2) + "\n");

    cohkit::BinnedCurve curve = cohkit::binned_quantiles(
        frame, "Gamma", "productivity", cfg.bins, {0.25, 0.5, 0.75});
    write_with(dir / "binned_curve.csv", [&](std::ostream& os) {
        cohkit::write_binned_curve_csv(os, curve);
    });

    cohkit::HeatGrid div_grid =
        cohkit::heat_grid(frame, "Gamma", "diversification", "productivity",
                          cfg.cells, cfg.grid_min_count);
    write_with(dir / "heat_div_coediv.csv", [&](std::ostream& os) {
        cohkit::write_heat_grid_csv(os, div_grid);
    });
    cohkit::HeatGrid size_grid =
        cohkit::heat_grid(frame, "Gamma", "size", "productivity", cfg.cells,
                          cfg.grid_min_count);
    write_with(dir / "heat_size_coediv.csv", [&](std::ostream& os) {
        cohkit::write_heat_grid_csv(os, size_grid);
    });

    cohkit::write_manifest(cfg, "analyze",
                           {cfg.records_path, cfg.financials_path,
                            cfg.grouping_path});
    std::cout << text_table;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent technological diversification pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    RunConfig overrides;
    // bitmask of which flags were set, so config-file values survive
    struct Seen {
        bool records = false, financials = false, year = false, level = false,
             triadic = false, threshold = false, aggregate = false, kind = false,
             tree = false, format = false, bins = false, cells = false,
             seed = false, out = false, gamma_rows = false, grouping = false,
             b_matrix = false, robust = false, synth_firms = false;
    } seen;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--records", overrides.records_path, "family records CSV")
            ->each([&](const std::string&) { seen.records = true; });
        cmd->add_option("--financials", overrides.financials_path,
                        "firm financials CSV")
            ->each([&](const std::string&) { seen.financials = true; });
        cmd->add_option("--year", overrides.year, "application year")
            ->each([&](const std::string&) { seen.year = true; });
        cmd->add_option("--level", overrides.level, "IPC level 1..4")
            ->each([&](const std::string&) { seen.level = true; });
        cmd->add_flag("--triadic", overrides.triadic_only,
                      "keep triadic families only")
            ->each([&](const std::string&) { seen.triadic = true; });
        cmd->add_option("--threshold", overrides.binarize_threshold,
                        "binarization threshold")
            ->each([&](const std::string&) { seen.threshold = true; });
        cmd->add_option("--aggregate", overrides.aggregation,
                        "relatedness aggregation: firm|country")
            ->each([&](const std::string&) { seen.aggregate = true; });
        cmd->add_option("--kind", overrides.kind,
                        "cooccurrence|tau|proximity|taxonomy|all")
            ->each([&](const std::string&) { seen.kind = true; });
        cmd->add_option("--tree", overrides.tree_mode, "spanning tree: max|min")
            ->each([&](const std::string&) { seen.tree = true; });
        cmd->add_option("--format", overrides.network_format,
                        "edge-list|adjacency|graphml")
            ->each([&](const std::string&) { seen.format = true; });
        cmd->add_option("--bins", overrides.bins, "bins for the quantile curve")
            ->each([&](const std::string&) { seen.bins = true; });
        cmd->add_option("--cells", overrides.cells, "heat grid cells per axis")
            ->each([&](const std::string&) { seen.cells = true; });
        cmd->add_option("--seed", overrides.seed, "random seed")
            ->each([&](const std::string&) { seen.seed = true; });
        cmd->add_option("--out", overrides.out_dir, "output directory")
            ->each([&](const std::string&) { seen.out = true; });
        cmd->add_flag("--gamma-rows", overrides.gamma_rows,
                      "emit full gamma rows as JSON")
            ->each([&](const std::string&) { seen.gamma_rows = true; });
        cmd->add_option("--grouping", overrides.grouping_path,
                        "firm_id,group_id CSV for country aggregation")
            ->each([&](const std::string&) { seen.grouping = true; });
        cmd->add_option("--b-matrix", overrides.b_matrix_path,
                        "adjacency CSV used as the relatedness matrix")
            ->each([&](const std::string&) { seen.b_matrix = true; });
        cmd->add_flag("--robust", overrides.robust_errors,
                      "heteroskedasticity-robust standard errors")
            ->each([&](const std::string&) { seen.robust = true; });
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    CLI::App* ingest =
        app.add_subcommand("ingest", "build bipartite matrices from records");
    CLI::App* relatedness =
        app.add_subcommand("relatedness", "project relatedness networks");
    CLI::App* coherence =
        app.add_subcommand("coherence", "per-firm coherence table");
    CLI::App* analyze =
        app.add_subcommand("analyze", "regressions, curves and heat grids");
    for (CLI::App* cmd : {synth, ingest, relatedness, coherence, analyze})
        add_common(cmd);
    synth->add_option("--firms", overrides.synth.n_firms, "synthetic firm count")
        ->each([&](const std::string&) { seen.synth_firms = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = cohkit::load_config(config_path);
        // flags win over the config file
        if (seen.records) cfg.records_path = overrides.records_path;
        if (seen.financials) cfg.financials_path = overrides.financials_path;
        if (seen.year) cfg.year = overrides.year;
        if (seen.level) cfg.level = overrides.level;
        if (seen.triadic) cfg.triadic_only = overrides.triadic_only;
        if (seen.threshold) cfg.binarize_threshold = overrides.binarize_threshold;
        if (seen.aggregate) cfg.aggregation = overrides.aggregation;
        if (seen.kind) cfg.kind = overrides.kind;
        if (seen.tree) cfg.tree_mode = overrides.tree_mode;
        if (seen.format) cfg.network_format = overrides.network_format;
        if (seen.bins) cfg.bins = overrides.bins;
        if (seen.cells) cfg.cells = overrides.cells;
        if (seen.seed) {
            cfg.seed = overrides.seed;
            cfg.synth.seed = overrides.seed;
        }
        if (seen.out) cfg.out_dir = overrides.out_dir;
        if (seen.gamma_rows) cfg.gamma_rows = overrides.gamma_rows;
        if (seen.grouping) cfg.grouping_path = overrides.grouping_path;
        if (seen.b_matrix) cfg.b_matrix_path = overrides.b_matrix_path;
        if (seen.robust) cfg.robust_errors = overrides.robust_errors;
        if (seen.synth_firms) cfg.synth.n_firms = overrides.synth.n_firms;
        cfg.validate();

        if (*synth) return cmd_synth(cfg);
        if (*ingest) return cmd_ingest(cfg);
        if (*relatedness) return cmd_relatedness(cfg);
        if (*coherence) return cmd_coherence(cfg);
        if (*analyze) return cmd_analyze(cfg);
        return 2;
    } catch (const cohkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
