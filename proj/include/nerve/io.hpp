#pragma once

/* File formats: points CSV (header "x,y" / "x,y,z"), data CSV (one row per
 * observation, named columns), JSON serialization of complexes, graphs, and
 * junction trees (all 1-based on disk), and JSON-lines trace records. */

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nerve/graphs.hpp"

namespace nerve {

using Json = nlohmann::json;

struct DataMatrix {
    std::vector<std::string> names;         // column names
    std::vector<std::vector<double>> rows;  // N rows of n reals

    int cols() const { return static_cast<int>(names.size()); }
    int n_rows() const { return static_cast<int>(rows.size()); }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        out.push_back(field.substr(start));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline double parse_double(const std::string& s, const std::string& context) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric field '" + s + "' in " + context);
    }
}

}  // namespace detail

inline std::vector<Point> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open points file: " + path);
    std::string line;
    do {  // leading '#' lines carry an embedded spec; skip them
        if (!std::getline(in, line)) throw ConfigError("empty points file: " + path);
    } while (!line.empty() && line.front() == '#');
    const auto header = detail::split_csv_line(line);
    int dim = 0;
    if (header.size() == 2 && header[0] == "x" && header[1] == "y") dim = 2;
    else if (header.size() == 3 && header[0] == "x" && header[1] == "y" && header[2] == "z") dim = 3;
    else throw ConfigError("points file must start with header 'x,y' or 'x,y,z': " + path);
    std::vector<Point> V;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (static_cast<int>(f.size()) != dim)
            throw ConfigError("row with " + std::to_string(f.size()) + " fields in " + path);
        if (dim == 2)
            V.emplace_back(detail::parse_double(f[0], path), detail::parse_double(f[1], path));
        else
            V.emplace_back(detail::parse_double(f[0], path), detail::parse_double(f[1], path),
                           detail::parse_double(f[2], path));
    }
    return V;
}

inline void write_points_csv(const std::string& path, const std::vector<Point>& V) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write points file: " + path);
    const int dim = V.empty() ? 2 : V[0].dim;
    out << (dim == 2 ? "x,y\n" : "x,y,z\n");
    for (const auto& p : V) {
        out << format_double(p[0]) << ',' << format_double(p[1]);
        if (dim == 3) out << ',' << format_double(p[2]);
        out << '\n';
    }
}

inline DataMatrix read_data_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open data file: " + path);
    std::string line;
    do {  // leading '#' lines carry an embedded spec; skip them
        if (!std::getline(in, line)) throw ConfigError("empty data file: " + path);
    } while (!line.empty() && line.front() == '#');
    DataMatrix m;
    m.names = detail::split_csv_line(line);
    if (m.names.empty()) throw ConfigError("data file has no columns: " + path);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != m.names.size())
            throw ConfigError("ragged data row in " + path);
        std::vector<double> row;
        row.reserve(f.size());
        for (const auto& s : f) row.push_back(detail::parse_double(s, path));
        m.rows.push_back(std::move(row));
    }
    return m;
}

inline void write_data_csv(const std::string& path, const DataMatrix& m,
                           const std::string& spec_comment = "") {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write data file: " + path);
    if (!spec_comment.empty()) out << "# spec " << spec_comment << '\n';
    for (size_t j = 0; j < m.names.size(); ++j) out << (j ? "," : "") << m.names[j];
    out << '\n';
    for (const auto& row : m.rows) {
        for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

/* ---- JSON forms (1-based vertex indices on disk) ---- */

namespace detail {

inline Json simplex_list_json(const std::vector<std::vector<int>>& blocks) {
    Json arr = Json::array();
    for (const auto& b : blocks) {
        Json s = Json::array();
        for (int v : b) s.push_back(v + 1);
        arr.push_back(std::move(s));
    }
    return arr;
}

inline std::vector<std::vector<int>> simplex_list_from_json(const Json& arr, const std::string& what) {
    if (!arr.is_array()) throw ConfigError(what + " must be an array");
    std::vector<std::vector<int>> out;
    for (const auto& s : arr) {
        if (!s.is_array()) throw ConfigError(what + " entries must be arrays");
        std::vector<int> b;
        for (const auto& v : s) {
            if (!v.is_number_integer() || v.get<long>() < 1)
                throw ConfigError(what + " entries must hold 1-based vertex indices");
            b.push_back(v.get<int>() - 1);
        }
        std::sort(b.begin(), b.end());
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace detail

inline Json complex_to_json(const SimplicialComplex& K) {
    std::vector<std::vector<int>> maximal;
    for (const auto& s : maximal_simplices(K)) maximal.push_back(s);
    return Json{{"n_vertices", K.n_vertices},
                {"maximal_simplices", detail::simplex_list_json(maximal)}};
}

inline SimplicialComplex complex_from_json(const Json& j) {
    if (!j.contains("n_vertices") || !j.contains("maximal_simplices"))
        throw ConfigError("complex JSON needs n_vertices and maximal_simplices");
    SimplicialComplex K;
    K.n_vertices = j.at("n_vertices").get<int>();
    for (const auto& s : detail::simplex_list_from_json(j.at("maximal_simplices"), "maximal_simplices")) {
        for (int v : s)
            if (v < 0 || v >= K.n_vertices) throw ConfigError("vertex index out of range in complex JSON");
        detail::add_with_faces(K, s);
    }
    return K;
}

inline Json graph_to_json(const LabeledGraph& G) {
    Json edges = Json::array();
    for (const auto& [a, b] : G.edges) edges.push_back(Json::array({a + 1, b + 1}));
    return Json{{"n_vertices", G.n_vertices}, {"edges", edges}};
}

inline LabeledGraph graph_from_json(const Json& j) {
    if (!j.contains("n_vertices") || !j.contains("edges"))
        throw ConfigError("graph JSON needs n_vertices and edges");
    LabeledGraph G(j.at("n_vertices").get<int>());
    for (const auto& e : detail::simplex_list_from_json(j.at("edges"), "edges")) {
        if (e.size() != 2) throw ConfigError("graph edges must be pairs");
        if (e[1] >= G.n_vertices) throw ConfigError("vertex index out of range in graph JSON");
        G.add_edge(e[0], e[1]);
    }
    return G;
}

inline Json junction_tree_to_json(const JunctionTree& jt) {
    return Json{{"cliques", detail::simplex_list_json(jt.cliques)},
                {"separators", detail::simplex_list_json(jt.separators())}};
}

}  // namespace nerve
