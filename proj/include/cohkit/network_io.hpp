#pragma once
// Serialization of relatedness matrices and spanning trees: edge-list CSV,
// adjacency CSV (round-trippable bit for bit via shortest round-trip
// doubles), and GraphML with the IPC section as a node attribute for
// coloring.

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "cohkit/csv.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/ipc.hpp"
#include "cohkit/relatedness.hpp"
#include "cohkit/spanning_tree.hpp"

namespace cohkit {

enum class NetworkFormat { edge_list, adjacency, graphml };

inline NetworkFormat parse_network_format(const std::string& s) {
    if (s == "edge-list" || s == "edgelist") return NetworkFormat::edge_list;
    if (s == "adjacency") return NetworkFormat::adjacency;
    if (s == "graphml") return NetworkFormat::graphml;
    throw UnsupportedFormat(s);
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Off-diagonal nonzeros, one undirected edge per line.
inline void write_edge_list(std::ostream& os, const RelatednessMatrix& r) {
    os << "source,target,weight\n";
    r.values.for_each_nonzero([&](int a, int b, double v) {
        if (a == b) return;
        os << csv_field(r.tech_ids[a]) << ',' << csv_field(r.tech_ids[b]) << ','
           << format_double(v) << '\n';
    });
}

inline void write_edge_list(std::ostream& os, const SpanningTree& tree) {
    os << "source,target,weight\n";
    for (const TreeEdge& e : tree.edges)
        os << csv_field(tree.node_ids[e.a]) << ',' << csv_field(tree.node_ids[e.b])
           << ',' << format_double(e.weight) << '\n';
}

inline void write_adjacency(std::ostream& os, const RelatednessMatrix& r) {
    os << "code";
    for (const std::string& id : r.tech_ids) os << ',' << csv_field(id);
    os << '\n';
    int n = static_cast<int>(r.tech_ids.size());
    for (int i = 0; i < n; ++i) {
        os << csv_field(r.tech_ids[i]);
        for (int j = 0; j < n; ++j) os << ',' << format_double(r.values(i, j));
        os << '\n';
    }
}

inline RelatednessMatrix read_adjacency(const CsvTable& table, RelKind kind,
                                        Aggregation agg = Aggregation::firm) {
    RelatednessMatrix r;
    r.kind = kind;
    r.source_aggregation = agg;
    if (table.header.size() < 2)
        throw Error(ErrorClass::data, "adjacency CSV has no codes");
    r.tech_ids.assign(table.header.begin() + 1, table.header.end());
    int n = static_cast<int>(r.tech_ids.size());
    if (static_cast<int>(table.rows.size()) != n)
        throw DimensionMismatch("adjacency CSV is not square");
    r.values = SymMatrix<double>(n);
    for (int i = 0; i < n; ++i) {
        const CsvRow& row = table.rows[i];
        if (static_cast<int>(row.fields.size()) != n + 1)
            throw MalformedRow(row.line_number, "wrong field count");
        if (row.fields[0] != r.tech_ids[i])
            throw MalformedRow(row.line_number, "row code does not match header");
        for (int j = i; j < n; ++j)
            r.values.set(i, j, parse_double_field(row.fields[j + 1],
                                                  row.line_number, "weight"));
    }
    return r;
}

inline void write_graphml(std::ostream& os, const RelatednessMatrix& r) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
       << "  <key id=\"section\" for=\"node\" attr.name=\"section\" "
          "attr.type=\"string\"/>\n"
       << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" "
          "attr.type=\"double\"/>\n"
       << "  <graph edgedefault=\"undirected\">\n";
    for (const std::string& id : r.tech_ids)
        os << "    <node id=\"" << detail::xml_escape(id) << "\">"
           << "<data key=\"section\">" << ipc_section(id) << "</data></node>\n";
    r.values.for_each_nonzero([&](int a, int b, double v) {
        if (a == b) return;
        os << "    <edge source=\"" << detail::xml_escape(r.tech_ids[a])
           << "\" target=\"" << detail::xml_escape(r.tech_ids[b]) << "\">"
           << "<data key=\"weight\">" << format_double(v) << "</data></edge>\n";
    });
    os << "  </graph>\n</graphml>\n";
}

inline std::string export_network(const RelatednessMatrix& r, NetworkFormat fmt) {
    std::ostringstream os;
    switch (fmt) {
        case NetworkFormat::edge_list: write_edge_list(os, r); break;
        case NetworkFormat::adjacency: write_adjacency(os, r); break;
        case NetworkFormat::graphml: write_graphml(os, r); break;
    }
    return os.str();
}

inline std::string export_network(const SpanningTree& tree, NetworkFormat fmt) {
    if (fmt != NetworkFormat::edge_list)
        throw UnsupportedFormat("spanning trees serialize as edge lists only");
    std::ostringstream os;
    write_edge_list(os, tree);
    return os.str();
}

// Sparse triplet serialization of a bipartite matrix.
inline void write_triplets(std::ostream& os, const BipartiteMatrix& m) {
    os << "row_id,col_id,value\n";
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (const auto& [c, v] : m.rows[r])
            os << csv_field(m.row_ids[r]) << ',' << csv_field(m.col_ids[c]) << ','
               << format_double(v) << '\n';
}

inline BipartiteMatrix read_triplets(const CsvTable& table, bool binary) {
    std::set<std::string> row_set, col_set;
    int c_row = table.require_column("row_id");
    int c_col = table.require_column("col_id");
    int c_val = table.require_column("value");
    for (const CsvRow& row : table.rows) {
        if (row.fields.size() < 3)
            throw MalformedRow(row.line_number, "need row_id,col_id,value");
        row_set.insert(row.fields[c_row]);
        col_set.insert(row.fields[c_col]);
    }
    BipartiteMatrix m;
    m.binary = binary;
    m.row_ids.assign(row_set.begin(), row_set.end());
    m.col_ids.assign(col_set.begin(), col_set.end());
    m.rows.resize(m.row_ids.size());
    for (const CsvRow& row : table.rows) {
        int r = m.row_index(row.fields[c_row]);
        int c = m.col_index(row.fields[c_col]);
        double v = parse_double_field(row.fields[c_val], row.line_number, "value");
        m.rows[r].emplace_back(c, v);
    }
    for (auto& r : m.rows)
        std::sort(r.begin(), r.end());
    return m;
}

}  // namespace cohkit
