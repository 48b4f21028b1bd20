#ifndef GRAPHASE_RETRIEVAL_HPP
#define GRAPHASE_RETRIEVAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "graphase/evolution.hpp"
#include "graphase/spectral.hpp"

namespace graphase {

// C(j,k,m) ~ a_j conj(a_k) phi_{j,m} phi_{k,m}: the Fourier coefficient of
// the intensity at vertex m at frequency lambda_j - lambda_k.
class CrossTermTensor {
public:
    CrossTermTensor(int n)
        : n_(n), data_(static_cast<size_t>(n) * n * n, Complex(0, 0)),
          residual_(Eigen::VectorXd::Zero(n)) {}

    // All indices 1-based.
    Complex& at(int j, int k, int m) {
        return data_[static_cast<size_t>(((j - 1) * n_ + (k - 1))) * n_ + (m - 1)];
    }
    Complex at(int j, int k, int m) const {
        return data_[static_cast<size_t>(((j - 1) * n_ + (k - 1))) * n_ + (m - 1)];
    }

    int size() const { return n_; }

    Eigen::VectorXd& residual() { return residual_; }
    const Eigen::VectorXd& residual() const { return residual_; }

    double& condition() { return condition_; }
    double condition() const { return condition_; }

private:
    int n_;
    std::vector<Complex> data_;
    Eigen::VectorXd residual_;  // least-squares residual per vertex
    double condition_ = 0.0;    // condition number of the frequency design matrix
};

namespace detail {

// Splits the per-vertex DC coefficient of the intensity into the individual
// diagonal masses s_j = |a_j|^2. The diagonal terms all sit at frequency
// zero, so only their sum per vertex is observable directly; the split uses
// the off-diagonal terms, which pin |a_j| |a_k| = |C(j,k,m)| / |phi phi|
// wherever two modes co-occur on a vertex.
//
// Modes are grouped into components of the co-activity graph (edge when the
// recovered Gram entry a_j conj(a_k) is significant). Inside a component,
// relative amplitudes follow from chaining pair products; any odd cycle
// (always present for >= 3 mutually co-active modes) fixes the component's
// absolute scale. Remaining scales (two-mode components, isolated modes)
// come from a least-squares fit of the DC profile.
inline Eigen::VectorXd separate_diagonal(const CrossTermTensor& ct, const EigenSystem& es,
                                         const Eigen::VectorXd& dc) {
    const int n = es.size();
    const Eigen::MatrixXd& phi = es.eigenvectors;
    const Eigen::MatrixXd phi_sq = phi.cwiseAbs2();
    const double total_mass = dc.sum();

    // Gram moduli g(j,k) = |a_j a_k| by least squares over vertices, and the
    // maximal eigenvector overlap per pair (whether the pair shares a vertex
    // at all; if not, the gram entry carries no information).
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            Complex num = 0;
            double den = 0;
            double max_prod = 0;
            for (int m = 0; m < n; ++m) {
                const double p = phi(m, j) * phi(m, k);
                num += p * ct.at(j + 1, k + 1, m + 1);
                den += p * p;
                max_prod = std::max(max_prod, std::abs(p));
            }
            overlap(j, k) = overlap(k, j) = max_prod;
            // a vanishing overlap means den is noise; dividing by it would
            // turn fit residue into arbitrarily large gram values
            if (max_prod > 1e-10 * phi_sq.maxCoeff() && den > 0)
                gram(j, k) = gram(k, j) = std::abs(num) / den;
        }
    }
    // |a_j a_k| <= total_mass / 2, so total_mass is the natural scale
    const double g_threshold = 1e-8 * std::max(total_mass, 1e-300);
    const double overlap_tol = 1e-10 * phi_sq.maxCoeff();

    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    std::vector<int> resolved(static_cast<size_t>(n), 0);
    struct PendingComponent {
        std::vector<int> modes;      // 0-based
        Eigen::VectorXd alpha;       // |a_j| = alpha_j * x^{parity_j}
        std::vector<int> parity;     // +1 / -1
    };
    std::vector<PendingComponent> pending;
    std::vector<int> singletons;

    std::vector<int> comp(static_cast<size_t>(n), -1);
    for (int start = 0; start < n; ++start) {
        if (comp[static_cast<size_t>(start)] >= 0) continue;
        // BFS with alpha/parity bookkeeping relative to the component anchor
        std::vector<int> nodes{start};
        std::vector<double> alpha(static_cast<size_t>(n), 0.0);
        std::vector<int> parity(static_cast<size_t>(n), 0);
        alpha[static_cast<size_t>(start)] = 1.0;
        parity[static_cast<size_t>(start)] = +1;
        comp[static_cast<size_t>(start)] = start;
        std::vector<double> x_sq_samples;
        for (size_t head = 0; head < nodes.size(); ++head) {
            const int k = nodes[head];
            for (int j = 0; j < n; ++j) {
                if (j == k || !(gram(j, k) > g_threshold)) continue;
                if (comp[static_cast<size_t>(j)] < 0) {
                    comp[static_cast<size_t>(j)] = start;
                    parity[static_cast<size_t>(j)] = -parity[static_cast<size_t>(k)];
                    alpha[static_cast<size_t>(j)] = gram(j, k) / alpha[static_cast<size_t>(k)];
                    nodes.push_back(j);
                } else if (parity[static_cast<size_t>(j)] == parity[static_cast<size_t>(k)]) {
                    // same-parity edge: an odd cycle, fixing x^2
                    const double ratio =
                        gram(j, k) / (alpha[static_cast<size_t>(j)] * alpha[static_cast<size_t>(k)]);
                    x_sq_samples.push_back(parity[static_cast<size_t>(j)] > 0 ? ratio : 1.0 / ratio);
                }
            }
        }
        if (nodes.size() == 1) {
            singletons.push_back(start);
        } else if (!x_sq_samples.empty()) {
            std::nth_element(x_sq_samples.begin(), x_sq_samples.begin() + x_sq_samples.size() / 2,
                             x_sq_samples.end());
            const double x_sq = x_sq_samples[x_sq_samples.size() / 2];
            for (int j : nodes) {
                const double a = alpha[static_cast<size_t>(j)];
                s(j) = a * a * (parity[static_cast<size_t>(j)] > 0 ? x_sq : 1.0 / x_sq);
                resolved[static_cast<size_t>(j)] = 1;
            }
        } else {
            PendingComponent pc;
            pc.modes = nodes;
            pc.alpha.resize(static_cast<int>(nodes.size()));
            for (size_t i = 0; i < nodes.size(); ++i) {
                pc.alpha(static_cast<int>(i)) = alpha[static_cast<size_t>(nodes[i])];
                pc.parity.push_back(parity[static_cast<size_t>(nodes[i])]);
            }
            pending.push_back(std::move(pc));
        }
    }

    if (singletons.size() < static_cast<size_t>(n)) {
        // A singleton that shares a vertex with a co-active mode would have
        // produced a gram edge if it carried mass, so it is inactive. Only
        // singletons hidden from every co-active mode keep a free scale.
        std::vector<char> is_singleton(static_cast<size_t>(n), 0);
        for (int j : singletons) is_singleton[static_cast<size_t>(j)] = 1;
        std::vector<int> hidden;
        for (int j : singletons) {
            bool seen = false;
            for (int k = 0; k < n && !seen; ++k)
                if (!is_singleton[static_cast<size_t>(k)] && overlap(j, k) > overlap_tol)
                    seen = true;
            if (!seen) hidden.push_back(j);
        }
        singletons = std::move(hidden);
    }

    if (pending.empty() && singletons.size() == static_cast<size_t>(n)) {
        // No co-activity at all: at most one mode carries the mass. Match
        // the DC profile against each candidate phi_j^2.
        int best = 0;
        double best_residual = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            const double r = (dc - total_mass * phi_sq.col(j)).norm();
            if (r < best_residual) {
                best_residual = r;
                best = j;
            }
        }
        if (best_residual <= 1e-6 * std::max(total_mass, 1e-300)) {
            s(best) = total_mass;
            return s;
        }
        // fall through: genuinely split mass (e.g. mutually isolated modes)
    }

    // Least-squares fit of the leftover DC profile for the unresolved scales.
    Eigen::VectorXd leftover = dc;
    for (int j = 0; j < n; ++j)
        if (resolved[static_cast<size_t>(j)]) leftover -= s(j) * phi_sq.col(j);
    const int cols = static_cast<int>(2 * pending.size() + singletons.size());
    if (cols > 0) {
        Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, cols);
        for (size_t c = 0; c < pending.size(); ++c) {
            const auto& pc = pending[c];
            for (size_t i = 0; i < pc.modes.size(); ++i) {
                const double a2 = pc.alpha(static_cast<int>(i)) * pc.alpha(static_cast<int>(i));
                design.col(static_cast<int>(2 * c) + (pc.parity[i] > 0 ? 0 : 1)) +=
                    a2 * phi_sq.col(pc.modes[i]);
            }
        }
        for (size_t i = 0; i < singletons.size(); ++i)
            design.col(static_cast<int>(2 * pending.size() + i)) = phi_sq.col(singletons[i]);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-10);
        Eigen::VectorXd sol = svd.solve(leftover).cwiseMax(0.0);
        for (size_t c = 0; c < pending.size(); ++c) {
            const auto& pc = pending[c];
            const double u = sol(static_cast<int>(2 * c));      // x^2
            const double v = sol(static_cast<int>(2 * c) + 1);  // x^{-2}
            // u v = 1 in exact arithmetic; reconcile geometrically
            const double x_sq = (u > 0 && v > 0) ? std::sqrt(u / v) : std::max(u, 1e-300);
            for (size_t i = 0; i < pc.modes.size(); ++i) {
                const double a2 = pc.alpha(static_cast<int>(i)) * pc.alpha(static_cast<int>(i));
                s(pc.modes[i]) = a2 * (pc.parity[i] > 0 ? x_sq : 1.0 / x_sq);
            }
        }
        for (size_t i = 0; i < singletons.size(); ++i)
            s(singletons[i]) = sol(static_cast<int>(2 * pending.size() + i));
    }
    return s;
}

}  // namespace detail

// Fits values(.,m) = sum_{j,k} C(j,k,m) e^{-i(lambda_j - lambda_k) t} per
// vertex by real linear least squares over {1, cos(w t), sin(w t)} for the
// positive frequencies w = lambda_j - lambda_k, j > k. The diagonal terms
// share frequency zero, so only their sum is observable per vertex; the
// individual C(j,j,m) = |a_j|^2 phi_{j,m}^2 are separated by solving
// sum_j s_j phi_{j,m}^2 = DC_m across vertices (minimum-norm least squares).
inline CrossTermTensor recover_cross_terms(const IntensityTrace& trace, const EigenSystem& es,
                                           double tol_dissoc) {
    const int n = es.size();
    const int T = trace.sample_count();
    if (trace.vertex_count() != n)
        throw std::invalid_argument("recover_cross_terms: trace width does not match basis size");
    auto dr = check_dissociated(es, tol_dissoc);
    if (!dr.dissociated)
        throw std::runtime_error(
            "recover_cross_terms: spectrum is not totally dissociated; "
            "cross terms are not identifiable from intensity data");
    const int pairs = n * (n - 1) / 2;
    const int cols = 1 + 2 * pairs;
    if (T < cols)
        throw std::runtime_error("recover_cross_terms: need at least " + std::to_string(cols) +
                                 " time samples, got " + std::to_string(T));

    std::vector<std::pair<int, int>> pair_index;  // (j,k) 0-based, j > k
    pair_index.reserve(static_cast<size_t>(pairs));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < j; ++k) pair_index.emplace_back(j, k);

    Eigen::MatrixXd design(T, cols);
    design.col(0).setOnes();
    for (int p = 0; p < pairs; ++p) {
        const double w = es.eigenvalues(pair_index[static_cast<size_t>(p)].first) -
                         es.eigenvalues(pair_index[static_cast<size_t>(p)].second);
        for (int s = 0; s < T; ++s) {
            design(s, 1 + 2 * p) = std::cos(w * trace.times(s));
            design(s, 2 + 2 * p) = std::sin(w * trace.times(s));
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(cols - 1);
    if (!(cond < 1e8))
        throw std::runtime_error(
            "recover_cross_terms: frequency design matrix is ill-conditioned (condition " +
            std::to_string(cond) + "); sample over a denser or longer time grid");

    CrossTermTensor ct(n);
    ct.condition() = cond;
    Eigen::VectorXd dc(n);
    for (int m = 0; m < n; ++m) {
        Eigen::VectorXd coeffs = svd.solve(trace.values.col(m));
        ct.residual()(m) = (design * coeffs - trace.values.col(m)).norm();
        dc(m) = coeffs(0);
        for (int p = 0; p < pairs; ++p) {
            const auto [j, k] = pair_index[static_cast<size_t>(p)];
            // 2 Re C cos(wt) + 2 Im C sin(wt), with C at the e^{-iwt} frequency
            Complex c(coeffs(1 + 2 * p) / 2.0, coeffs(2 + 2 * p) / 2.0);
            ct.at(j + 1, k + 1, m + 1) = c;
            ct.at(k + 1, j + 1, m + 1) = std::conj(c);
        }
    }

    Eigen::VectorXd s = detail::separate_diagonal(ct, es, dc);
    const Eigen::MatrixXd phi_sq = es.eigenvectors.cwiseAbs2();
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) ct.at(j + 1, j + 1, m + 1) = s(j) * phi_sq(m, j);
    return ct;
}

struct RetrievalResult {
    ComplexVector u0;             // reconstructed, a_pivot real positive
    int pivot = 0;                // eigenbasis index (1-based), 0 if no active mode
    bool certified = false;       // dissociated spectrum and universal pivot
    std::vector<int> ambiguous_modes;  // active modes with no Gamma_V edge to the pivot
    double residual = 0.0;        // max per-vertex fit residual
    double condition = 0.0;       // condition number of the frequency fit
};

// The uniqueness argument run constructively: moduli from the diagonal, phases
// chained to the first active mode through Gamma_V witnesses.
inline RetrievalResult reconstruct(const CrossTermTensor& ct, const EigenSystem& es,
                                   const SupportGraph& sg) {
    const int n = es.size();
    if (ct.size() != n || sg.n != n)
        throw std::invalid_argument("reconstruct: tensor, basis and support graph sizes differ");
    const double tol_support = default_support_tol(es);

    // Step 1: |a_j|^2 by least squares over support vertices.
    Eigen::VectorXd amp(n);
    for (int j = 1; j <= n; ++j) {
        double num = 0.0, den = 0.0;
        for (int m = 1; m <= n; ++m) {
            const double p = es.eigenvectors(m - 1, j - 1) * es.eigenvectors(m - 1, j - 1);
            if (p > tol_support) {
                num += p * ct.at(j, j, m).real();
                den += p * p;
            }
        }
        amp(j - 1) = den > 0 ? std::sqrt(std::max(0.0, num / den)) : 0.0;
    }

    RetrievalResult result;
    result.residual = ct.residual().size() > 0 ? ct.residual().maxCoeff() : 0.0;
    result.condition = ct.condition();

    const double amp_threshold = 1e-8 * amp.maxCoeff();
    std::vector<int> active;
    for (int j = 1; j <= n; ++j)
        if (amp(j - 1) > amp_threshold) active.push_back(j);

    ComplexVector a = ComplexVector::Zero(n);
    if (active.empty()) {
        result.u0 = ComplexVector::Zero(n);
        return result;
    }

    // Step 2: pivot = first active mode, its phase fixed to zero.
    const int pivot = active.front();
    result.pivot = pivot;
    a(pivot - 1) = amp(pivot - 1);

    // Step 3: chain every other phase through the pivot's witness vertex.
    for (int j : active) {
        if (j == pivot) continue;
        if (!sg.has_edge(j, pivot)) {
            result.ambiguous_modes.push_back(j);
            a(j - 1) = amp(j - 1);  // modulus known, phase not recoverable
            continue;
        }
        const int m = sg.witness_vertex(j, pivot);
        const double phi_prod =
            es.eigenvectors(m - 1, j - 1) * es.eigenvectors(m - 1, pivot - 1);
        a(j - 1) = ct.at(j, pivot, m) / (std::conj(a(pivot - 1)) * phi_prod);
    }

    result.u0 = es.eigenvectors.cast<Complex>() * a;
    result.certified = check_dissociated(es, default_dissociation_tol(es)).dissociated &&
                       sg.is_universal(pivot) && result.ambiguous_modes.empty();
    return result;
}

// min over |c|=1 of ||u - c v||; the minimizing c is the phase of <u,v>.
inline double phase_aligned_distance(const ComplexVector& u, const ComplexVector& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("phase_aligned_distance: length mismatch");
    const double sq = u.squaredNorm() + v.squaredNorm() - 2.0 * std::abs(u.dot(v));
    return std::sqrt(std::max(0.0, sq));
}

}  // namespace graphase

#endif
