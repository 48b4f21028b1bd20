#ifndef GRAPHASE_GRAPH_HPP
#define GRAPHASE_GRAPH_HPP

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace graphase {

// Vertices are 1-based in all public interfaces (files, CLI, error
// messages) and 0-based internally.
class Graph {
public:
    explicit Graph(int n) : n_(n), adjacency_(static_cast<size_t>(n)) {
        if (n < 1) throw std::invalid_argument("Graph: vertex count must be >= 1");
    }

    Graph(int n, const std::vector<std::pair<int, int>>& edges_1based) : Graph(n) {
        for (auto [x, y] : edges_1based) add_edge(x, y);
    }

    int vertex_count() const { return n_; }

    // x, y are 1-based. Self-loops and duplicate edges are rejected.
    void add_edge(int x, int y) {
        check_vertex(x);
        check_vertex(y);
        if (x == y) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(x));
        auto key = ordered(x - 1, y - 1);
        if (!edge_set_.insert(key).second)
            throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(x) + "," +
                                        std::to_string(y) + ")");
        adjacency_[static_cast<size_t>(key.first)].push_back(key.second);
        adjacency_[static_cast<size_t>(key.second)].push_back(key.first);
    }

    bool has_edge(int x, int y) const {
        check_vertex(x);
        check_vertex(y);
        if (x == y) return false;
        return edge_set_.count(ordered(x - 1, y - 1)) > 0;
    }

    int degree(int x) const {
        check_vertex(x);
        return static_cast<int>(adjacency_[static_cast<size_t>(x - 1)].size());
    }

    // 0-based adjacency list, for internal consumers.
    const std::vector<int>& neighbors0(int v0) const { return adjacency_[static_cast<size_t>(v0)]; }

    // Edges as 1-based pairs with x < y, sorted.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(edge_set_.size());
        for (auto [a, b] : edge_set_) out.emplace_back(a + 1, b + 1);
        return out;
    }

    size_t edge_count() const { return edge_set_.size(); }

private:
    void check_vertex(int x) const {
        if (x < 1 || x > n_)
            throw std::out_of_range("Graph: vertex " + std::to_string(x) + " outside 1.." +
                                    std::to_string(n_));
    }
    static std::pair<int, int> ordered(int a0, int b0) {
        return {std::min(a0, b0), std::max(a0, b0)};
    }

    int n_;
    std::vector<std::vector<int>> adjacency_;
    std::set<std::pair<int, int>> edge_set_;  // 0-based, first < second
};

class Potential {
public:
    explicit Potential(Eigen::VectorXd w) : w_(std::move(w)) {
        if (!w_.allFinite()) throw std::invalid_argument("Potential: entries must be finite");
    }

    static Potential zeros(int n) { return Potential(Eigen::VectorXd::Zero(n)); }

    int size() const { return static_cast<int>(w_.size()); }
    const Eigen::VectorXd& values() const { return w_; }
    double operator()(int x) const { return w_(x - 1); }
    bool nonnegative() const { return w_.minCoeff() >= 0.0; }

private:
    Eigen::VectorXd w_;
};

// H = -Delta + W with Delta u(x) = (sum_{y~x} u(y)) - d(x) u(x), so
// H[x,x] = d(x) + w(x) and H[x,y] = -1 on edges.
class Hamiltonian {
public:
    Hamiltonian(Graph graph, Potential potential)
        : graph_(std::move(graph)), potential_(std::move(potential)) {
        const int n = graph_.vertex_count();
        if (potential_.size() != n)
            throw std::invalid_argument("Hamiltonian: potential length " +
                                        std::to_string(potential_.size()) +
                                        " does not match vertex count " + std::to_string(n));
        matrix_ = Eigen::MatrixXd::Zero(n, n);
        for (int x = 1; x <= n; ++x) matrix_(x - 1, x - 1) = graph_.degree(x) + potential_(x);
        for (auto [x, y] : graph_.edges()) {
            matrix_(x - 1, y - 1) = -1.0;
            matrix_(y - 1, x - 1) = -1.0;
        }
    }

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Graph& graph() const { return graph_; }
    const Potential& potential() const { return potential_; }
    int size() const { return graph_.vertex_count(); }

private:
    Graph graph_;
    Potential potential_;
    Eigen::MatrixXd matrix_;
};

inline Hamiltonian build_hamiltonian(Graph g, Potential w) {
    return Hamiltonian(std::move(g), std::move(w));
}

// Components as 1-based vertex sets, each sorted, ordered by smallest member.
inline std::vector<std::vector<int>> connected_components(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> label(static_cast<size_t>(n), -1);
    std::vector<std::vector<int>> components;
    for (int start = 0; start < n; ++start) {
        if (label[static_cast<size_t>(start)] >= 0) continue;
        const int id = static_cast<int>(components.size());
        components.emplace_back();
        std::vector<int> stack{start};
        label[static_cast<size_t>(start)] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            components.back().push_back(v + 1);
            for (int u : g.neighbors0(v)) {
                if (label[static_cast<size_t>(u)] < 0) {
                    label[static_cast<size_t>(u)] = id;
                    stack.push_back(u);
                }
            }
        }
        std::sort(components.back().begin(), components.back().end());
    }
    return components;
}

inline bool is_connected(const Graph& g) { return connected_components(g).size() == 1; }

}  // namespace graphase

#endif
