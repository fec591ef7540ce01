#pragma once
// Run configuration (JSON file, overridable by CLI flags) and the run
// manifest. The manifest is the only output that carries a timestamp, so
// data files stay byte-identical across reruns of the same config.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include <nlohmann/json.hpp>

#include "cohkit/csv.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/records.hpp"
#include "cohkit/synth.hpp"
#include "cohkit/version.hpp"

namespace cohkit {

using Json = nlohmann::json;

struct RunConfig {
    std::string records_path;
    std::string financials_path;
    std::string out_dir = "out";
    int year = 2011;
    int level = 3;  // IPC subclass by default
    bool triadic_only = false;
    double binarize_threshold = 0.0;
    std::string aggregation = "firm";  // firm | country
    std::string kind = "taxonomy";     // cooccurrence|tau|proximity|taxonomy|all
    std::string tree_mode;             // "", "max", "min"
    std::string network_format = "edge-list";
    int bins = 10;
    int cells = 20;
    std::size_t grid_min_count = 1;
    std::uint64_t seed = 1;
    bool gamma_rows = false;
    bool robust_errors = false;
    // firm -> country map for row aggregation (CSV with columns
    // firm_id,group_id); synthetic runs derive it from financials
    std::string grouping_path;
    // externally supplied relatedness matrix (adjacency CSV) used instead
    // of estimating B from the input records
    std::string b_matrix_path;
    FamilySchema family_schema;
    FinancialsSchema financials_schema;
    GeneratorConfig synth;

    void validate() const {
        if (level < 1 || level > 4) throw InvalidLevel(level);
        if (aggregation != "firm" && aggregation != "country")
            throw InvalidConfig("aggregation must be firm or country");
        if (kind != "cooccurrence" && kind != "tau" && kind != "proximity" &&
            kind != "taxonomy" && kind != "all")
            throw InvalidConfig("unknown relatedness kind '" + kind + "'");
        if (!tree_mode.empty() && tree_mode != "max" && tree_mode != "min")
            throw InvalidConfig("tree mode must be max or min");
        if (bins < 2) throw InvalidConfig("bins must be at least 2");
        if (cells < 1) throw InvalidConfig("cells must be at least 1");
    }
};

namespace detail {

template <typename T>
void maybe_get(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline RunConfig load_config(const std::string& path) {
    std::string text = read_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidConfig(std::string("cannot parse ") + path + ": " + e.what());
    }
    RunConfig cfg;
    detail::maybe_get(j, "records", cfg.records_path);
    detail::maybe_get(j, "financials", cfg.financials_path);
    detail::maybe_get(j, "out", cfg.out_dir);
    detail::maybe_get(j, "year", cfg.year);
    detail::maybe_get(j, "level", cfg.level);
    detail::maybe_get(j, "triadic", cfg.triadic_only);
    detail::maybe_get(j, "binarize_threshold", cfg.binarize_threshold);
    detail::maybe_get(j, "aggregate", cfg.aggregation);
    detail::maybe_get(j, "kind", cfg.kind);
    detail::maybe_get(j, "tree", cfg.tree_mode);
    detail::maybe_get(j, "format", cfg.network_format);
    detail::maybe_get(j, "bins", cfg.bins);
    detail::maybe_get(j, "cells", cfg.cells);
    detail::maybe_get(j, "grid_min_count", cfg.grid_min_count);
    detail::maybe_get(j, "seed", cfg.seed);
    detail::maybe_get(j, "gamma_rows", cfg.gamma_rows);
    detail::maybe_get(j, "robust_errors", cfg.robust_errors);
    detail::maybe_get(j, "grouping", cfg.grouping_path);
    detail::maybe_get(j, "b_matrix", cfg.b_matrix_path);
    if (j.contains("columns")) {
        const Json& c = j.at("columns");
        detail::maybe_get(c, "family_id", cfg.family_schema.family_id);
        detail::maybe_get(c, "year", cfg.family_schema.year);
        detail::maybe_get(c, "applicants", cfg.family_schema.applicants);
        detail::maybe_get(c, "tech_codes", cfg.family_schema.tech_codes);
        detail::maybe_get(c, "triadic", cfg.family_schema.triadic);
        std::string sep;
        detail::maybe_get(c, "list_separator", sep);
        if (!sep.empty()) cfg.family_schema.list_separator = sep[0];
        detail::maybe_get(c, "firm_id", cfg.financials_schema.firm_id);
        detail::maybe_get(c, "value_added", cfg.financials_schema.value_added);
        detail::maybe_get(c, "employees", cfg.financials_schema.employees);
        detail::maybe_get(c, "total_assets", cfg.financials_schema.total_assets);
        detail::maybe_get(c, "country", cfg.financials_schema.country);
        detail::maybe_get(c, "fin_year", cfg.financials_schema.year);
    }
    if (j.contains("synth")) {
        const Json& s = j.at("synth");
        detail::maybe_get(s, "seed", cfg.synth.seed);
        detail::maybe_get(s, "n_firms", cfg.synth.n_firms);
        detail::maybe_get(s, "n_products", cfg.synth.n_products);
        detail::maybe_get(s, "techs_per_product", cfg.synth.techs_per_product);
        detail::maybe_get(s, "overlap", cfg.synth.overlap);
        detail::maybe_get(s, "min_lines_per_firm", cfg.synth.min_lines_per_firm);
        detail::maybe_get(s, "max_lines_per_firm", cfg.synth.max_lines_per_firm);
        detail::maybe_get(s, "beta0", cfg.synth.beta0);
        detail::maybe_get(s, "beta_size", cfg.synth.beta_size);
        detail::maybe_get(s, "beta_gamma", cfg.synth.beta_gamma);
        detail::maybe_get(s, "noise_sigma", cfg.synth.noise_sigma);
        detail::maybe_get(s, "n_countries", cfg.synth.n_countries);
        detail::maybe_get(s, "year", cfg.synth.year);
        detail::maybe_get(s, "log_size_mu", cfg.synth.log_size_mu);
        detail::maybe_get(s, "log_size_sigma", cfg.synth.log_size_sigma);
        detail::maybe_get(s, "log_employees_mu", cfg.synth.log_employees_mu);
        detail::maybe_get(s, "log_employees_sigma", cfg.synth.log_employees_sigma);
    }
    return cfg;
}

inline Json config_to_json(const RunConfig& cfg) {
    Json j;
    j["records"] = cfg.records_path;
    j["financials"] = cfg.financials_path;
    j["out"] = cfg.out_dir;
    j["year"] = cfg.year;
    j["level"] = cfg.level;
    j["triadic"] = cfg.triadic_only;
    j["binarize_threshold"] = cfg.binarize_threshold;
    j["aggregate"] = cfg.aggregation;
    j["kind"] = cfg.kind;
    j["tree"] = cfg.tree_mode;
    j["format"] = cfg.network_format;
    j["bins"] = cfg.bins;
    j["cells"] = cfg.cells;
    j["grid_min_count"] = cfg.grid_min_count;
    j["seed"] = cfg.seed;
    j["gamma_rows"] = cfg.gamma_rows;
    j["robust_errors"] = cfg.robust_errors;
    j["grouping"] = cfg.grouping_path;
    j["b_matrix"] = cfg.b_matrix_path;
    j["columns"] = {{"family_id", cfg.family_schema.family_id},
                    {"year", cfg.family_schema.year},
                    {"applicants", cfg.family_schema.applicants},
                    {"tech_codes", cfg.family_schema.tech_codes},
                    {"triadic", cfg.family_schema.triadic},
                    {"list_separator", std::string(1, cfg.family_schema.list_separator)},
                    {"firm_id", cfg.financials_schema.firm_id},
                    {"value_added", cfg.financials_schema.value_added},
                    {"employees", cfg.financials_schema.employees},
                    {"total_assets", cfg.financials_schema.total_assets},
                    {"country", cfg.financials_schema.country},
                    {"fin_year", cfg.financials_schema.year}};
    j["synth"] = {{"seed", cfg.synth.seed},
                  {"n_firms", cfg.synth.n_firms},
                  {"n_products", cfg.synth.n_products},
                  {"techs_per_product", cfg.synth.techs_per_product},
                  {"overlap", cfg.synth.overlap},
                  {"min_lines_per_firm", cfg.synth.min_lines_per_firm},
                  {"max_lines_per_firm", cfg.synth.max_lines_per_firm},
                  {"beta0", cfg.synth.beta0},
                  {"beta_size", cfg.synth.beta_size},
                  {"beta_gamma", cfg.synth.beta_gamma},
                  {"noise_sigma", cfg.synth.noise_sigma},
                  {"n_countries", cfg.synth.n_countries},
                  {"year", cfg.synth.year},
                  {"log_size_mu", cfg.synth.log_size_mu},
                  {"log_size_sigma", cfg.synth.log_size_sigma},
                  {"log_employees_mu", cfg.synth.log_employees_mu},
                  {"log_employees_sigma", cfg.synth.log_employees_sigma}};
    return j;
}

inline std::uint32_t file_crc32(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorClass::data, "cannot hash missing file: " + path);
    uLong crc = crc32(0L, Z_NULL, 0);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buf),
                    static_cast<uInt>(in.gcount()));
    return static_cast<std::uint32_t>(crc);
}

// Written next to every command's outputs. Timestamps live here and only
// here.
inline void write_manifest(const RunConfig& cfg, const std::string& command,
                           const std::vector<std::string>& inputs) {
    Json j;
    j["tool"] = "coherence-kit";
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = config_to_json(cfg);
    Json hashes = Json::object();
    for (const std::string& path : inputs)
        if (!path.empty() && std::filesystem::exists(path)) {
            char hex[16];
            std::snprintf(hex, sizeof hex, "%08x", file_crc32(path));
            hashes[path] = std::string("crc32:") + hex;
        }
    j["input_hashes"] = hashes;
    auto now = std::chrono::system_clock::now();
    j["generated_at_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
            .count();
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "manifest.json");
    out << j.dump(2) << "\n";
}

}  // namespace cohkit
