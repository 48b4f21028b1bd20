#ifndef GRAPHASE_SPECTRAL_HPP
#define GRAPHASE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "graphase/graph.hpp"

namespace graphase {

// Orthonormal real eigenbasis of a Hamiltonian, eigenvalues ascending.
// Sign convention: the first entry of each eigenvector exceeding 1e-12 in
// magnitude is positive, so repeated runs agree bit-for-bit.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;   // lambda_1 <= ... <= lambda_n
    Eigen::MatrixXd eigenvectors;  // column j = phi_{j+1}

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

inline EigenSystem eigendecompose(const Hamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: eigensolver failed to converge");
    EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
    for (int j = 0; j < es.size(); ++j) {
        for (int m = 0; m < es.size(); ++m) {
            double v = es.eigenvectors(m, j);
            if (std::abs(v) > 1e-12) {
                if (v < 0) es.eigenvectors.col(j) = -es.eigenvectors.col(j);
                break;
            }
        }
    }
    return es;
}

inline double default_dissociation_tol(const EigenSystem& es) {
    return 1e-9 * std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff());
}

inline double default_support_tol(const EigenSystem& es) {
    return 1e-10 * es.eigenvectors.cwiseAbs2().maxCoeff();
}

struct DissociationResult {
    bool dissociated = false;
    double min_eigenvalue_gap = 0.0;
    double min_difference_gap = 0.0;  // smallest gap in the sorted difference multiset
};

// Totally dissociated: all eigenvalues distinct and (j,k) -> lambda_j - lambda_k
// injective over ordered pairs with j != k.
inline DissociationResult check_dissociated(const EigenSystem& es, double tol) {
    if (tol <= 0) throw std::invalid_argument("check_dissociated: tol must be positive");
    const int n = es.size();
    DissociationResult r;
    r.min_eigenvalue_gap = std::numeric_limits<double>::infinity();
    r.min_difference_gap = std::numeric_limits<double>::infinity();
    if (n == 1) {
        r.dissociated = true;
        return r;
    }
    for (int j = 1; j < n; ++j)
        r.min_eigenvalue_gap =
            std::min(r.min_eigenvalue_gap, es.eigenvalues(j) - es.eigenvalues(j - 1));
    std::vector<double> diffs;
    diffs.reserve(static_cast<size_t>(n) * (n - 1));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (j != k) diffs.push_back(es.eigenvalues(j) - es.eigenvalues(k));
    std::sort(diffs.begin(), diffs.end());
    for (size_t i = 1; i < diffs.size(); ++i)
        r.min_difference_gap = std::min(r.min_difference_gap, diffs[i] - diffs[i - 1]);
    r.dissociated = r.min_eigenvalue_gap > tol && r.min_difference_gap > tol;
    return r;
}

// Gamma_V on eigenbasis indices: edge (j,k) when some vertex m has
// |phi_{j,m} phi_{k,m}| > threshold. Indices are 1-based like vertices.
struct SupportGraph {
    int n = 0;
    // witness(j-1, k-1) = maximizing vertex m (1-based), or 0 when no edge.
    Eigen::MatrixXi witness;

    bool has_edge(int j, int k) const { return j != k && witness(j - 1, k - 1) > 0; }

    int witness_vertex(int j, int k) const { return witness(j - 1, k - 1); }

    bool is_universal(int j) const {
        for (int k = 1; k <= n; ++k)
            if (k != j && !has_edge(j, k)) return false;
        return true;
    }

    bool is_complete() const {
        for (int j = 1; j <= n; ++j)
            if (!is_universal(j)) return false;
        return true;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int j = 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k)
                if (has_edge(j, k)) out.emplace_back(j, k);
        return out;
    }
};

inline SupportGraph support_graph(const EigenSystem& es, double threshold) {
    if (threshold <= 0) throw std::invalid_argument("support_graph: threshold must be positive");
    const int n = es.size();
    SupportGraph sg;
    sg.n = n;
    sg.witness = Eigen::MatrixXi::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            double best = 0.0;
            int best_m = 0;
            for (int m = 0; m < n; ++m) {
                double p = std::abs(es.eigenvectors(m, j) * es.eigenvectors(m, k));
                if (p > best) {
                    best = p;
                    best_m = m + 1;
                }
            }
            if (best > threshold) {
                sg.witness(j, k) = best_m;
                sg.witness(k, j) = best_m;
            }
        }
    }
    return sg;
}

inline bool check_property_s(const SupportGraph& sg) { return sg.is_complete(); }

struct SpectrumReport {
    bool simple = false;
    bool totally_dissociated = false;
    double min_eigenvalue_gap = 0.0;
    double min_difference_gap = 0.0;
    bool property_s = false;
    std::vector<int> universal_vertices;  // eigenbasis indices, 1-based
};

inline SpectrumReport spectrum_report(const EigenSystem& es, double tol_dissoc,
                                      double tol_support) {
    auto dr = check_dissociated(es, tol_dissoc);
    auto sg = support_graph(es, tol_support);
    SpectrumReport rep;
    rep.simple = dr.min_eigenvalue_gap > tol_dissoc || es.size() == 1;
    rep.totally_dissociated = dr.dissociated;
    rep.min_eigenvalue_gap = dr.min_eigenvalue_gap;
    rep.min_difference_gap = dr.min_difference_gap;
    rep.property_s = check_property_s(sg);
    for (int j = 1; j <= es.size(); ++j)
        if (sg.is_universal(j)) rep.universal_vertices.push_back(j);
    return rep;
}

inline SpectrumReport spectrum_report(const Hamiltonian& h,
                                      std::optional<double> tol_dissoc = std::nullopt,
                                      std::optional<double> tol_support = std::nullopt) {
    auto es = eigendecompose(h);
    return spectrum_report(es, tol_dissoc.value_or(default_dissociation_tol(es)),
                           tol_support.value_or(default_support_tol(es)));
}

}  // namespace graphase

#endif
