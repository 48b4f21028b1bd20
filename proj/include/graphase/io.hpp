#ifndef GRAPHASE_IO_HPP
#define GRAPHASE_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphase/evolution.hpp"
#include "graphase/graph.hpp"

namespace graphase {

// Graph JSON: {"n": int, "edges": [[x,y],...], "potential": [w1,...,wn]}
// with 1-based edge vertices; "potential" optional, defaulting to zeros.
inline std::pair<Graph, Potential> parse_graph_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::runtime_error("graph JSON: top level must be an object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::runtime_error("graph JSON: missing integer field \"n\"");
    const int n = j["n"].get<int>();
    if (n < 1) throw std::runtime_error("graph JSON: \"n\" must be >= 1");
    Graph g(n);
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw std::runtime_error("graph JSON: \"edges\" must be an array");
        size_t idx = 0;
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_number_integer())
                throw std::runtime_error("graph JSON: edge #" + std::to_string(idx) +
                                         " must be a pair of integers");
            try {
                g.add_edge(e[0].get<int>(), e[1].get<int>());
            } catch (const std::exception& ex) {
                throw std::runtime_error("graph JSON: edge #" + std::to_string(idx) + ": " +
                                         ex.what());
            }
            ++idx;
        }
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (j.contains("potential")) {
        if (!j["potential"].is_array() || static_cast<int>(j["potential"].size()) != n)
            throw std::runtime_error("graph JSON: \"potential\" must be an array of length n");
        for (int x = 0; x < n; ++x) {
            if (!j["potential"][static_cast<size_t>(x)].is_number())
                throw std::runtime_error("graph JSON: potential entry " + std::to_string(x + 1) +
                                         " is not a number");
            w(x) = j["potential"][static_cast<size_t>(x)].get<double>();
        }
    }
    return {std::move(g), Potential(std::move(w))};
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline std::pair<Graph, Potential> load_graph_file(const std::string& path) {
    return parse_graph_json(load_json_file(path));
}

inline nlohmann::json graph_to_json(const Graph& g, const Potential& w) {
    nlohmann::json j;
    j["n"] = g.vertex_count();
    j["edges"] = nlohmann::json::array();
    for (auto [x, y] : g.edges()) j["edges"].push_back({x, y});
    j["potential"] = std::vector<double>(w.values().data(), w.values().data() + w.size());
    return j;
}

// Complex values serialize as [re, im] pairs.
inline nlohmann::json complex_vector_to_json(const ComplexVector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int m = 0; m < v.size(); ++m) arr.push_back({v(m).real(), v(m).imag()});
    return arr;
}

inline ComplexVector complex_vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::runtime_error("state JSON: expected an array of [re, im] pairs");
    ComplexVector v(static_cast<int>(j.size()));
    for (size_t m = 0; m < j.size(); ++m) {
        const auto& e = j[m];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::runtime_error("state JSON: entry " + std::to_string(m + 1) +
                                     " must be a [re, im] pair of numbers");
        v(static_cast<int>(m)) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// CSV with header t,x1,...,xn; 17 significant digits.
inline void write_trace_csv(std::ostream& out, const IntensityTrace& trace) {
    out << "t";
    for (int m = 1; m <= trace.vertex_count(); ++m) out << ",x" << m;
    out << "\n";
    for (int s = 0; s < trace.sample_count(); ++s) {
        out << format_double(trace.times(s));
        for (int m = 0; m < trace.vertex_count(); ++m)
            out << "," << format_double(trace.values(s, m));
        out << "\n";
    }
}

inline IntensityTrace read_trace_csv(std::istream& in, const std::string& origin = "trace CSV") {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(origin + ": empty input");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) header.push_back(field);
    }
    if (header.empty() || header[0] != "t")
        throw std::runtime_error(origin + ": header must start with \"t\"");
    const int n = static_cast<int>(header.size()) - 1;
    if (n < 1) throw std::runtime_error(origin + ": header has no vertex columns");

    std::vector<std::vector<double>> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<double> row;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw std::runtime_error(origin + ": line " + std::to_string(lineno) +
                                         ": bad number \"" + field + "\"");
            }
        }
        if (static_cast<int>(row.size()) != n + 1)
            throw std::runtime_error(origin + ": line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(n + 1) + " fields, got " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(origin + ": no data rows");

    IntensityTrace trace;
    trace.times.resize(static_cast<int>(rows.size()));
    trace.values.resize(static_cast<int>(rows.size()), n);
    for (size_t s = 0; s < rows.size(); ++s) {
        trace.times(static_cast<int>(s)) = rows[s][0];
        for (int m = 0; m < n; ++m) trace.values(static_cast<int>(s), m) = rows[s][static_cast<size_t>(m) + 1];
    }
    return trace;
}

}  // namespace graphase

#endif
