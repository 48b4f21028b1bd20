#ifndef GRAPHASE_COUNTEREXAMPLES_HPP
#define GRAPHASE_COUNTEREXAMPLES_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphase/evolution.hpp"
#include "graphase/retrieval.hpp"

namespace graphase {

// Two vectors with equal entrywise moduli that are not unimodular multiples
// of each other.
struct EqualModulusPair {
    ComplexVector f;
    ComplexVector g;
    std::optional<Eigen::MatrixXcd> subspace_basis;  // columns span the ambient subspace
};

struct OrthogonalizationResult {
    EqualModulusPair pair;
    double lambda = 0.0;  // root in (0,1), or 0 when the input was already orthogonal
};

// Transfers a non-orthogonal equal-modulus pair to an orthogonal one inside
// span{f,g}: rotate g so <f,g> is real positive, then slide both along
// (f+g)/2 until the inner product's sign flips. q(0) > 0 and
// q(1) = -||(f-g)/2||^2 < 0 bracket exactly one root in (0,1).
inline OrthogonalizationResult orthogonalize_pair_with_root(const EqualModulusPair& p) {
    const ComplexVector& f = p.f;
    ComplexVector g = p.g;
    if (f.size() != g.size())
        throw std::invalid_argument("orthogonalize_pair: length mismatch");
    const double fn = f.norm(), gn = g.norm();
    const Complex ip0 = f.dot(g);  // conj(f).g
    if (std::abs(ip0) <= 1e-12 * fn * gn) return {p, 0.0};  // already orthogonal

    // <f,g> real positive after absorbing the phase into g.
    g *= std::polar(1.0, -std::arg(ip0));
    const double fg = f.dot(g).real();
    if (phase_aligned_distance(f, g) <= 1e-10 * fn)
        throw std::invalid_argument("orthogonalize_pair: degenerate pair (f is a unimodular multiple of g)");

    // q(lambda) = <f_l, g_l> with f_l = f - l(f+g)/2, g_l = g - l(f+g)/2:
    //   q(l) = fg - (l/2)(||f||^2 + ||g||^2 + 2 fg) + (l^2/4)||f+g||^2
    const double A = (f + g).squaredNorm() / 4.0;
    const double B = -(fn * fn + gn * gn + 2.0 * fg) / 2.0;
    const double C = fg;
    // stable quadratic formula; the (0,1) root exists since q(0)>0, q(1)<0
    const double disc = std::sqrt(std::max(0.0, B * B - 4.0 * A * C));
    const double q = -(B + std::copysign(disc, B)) / 2.0;
    double root = q / A;
    if (!(root > 0.0 && root < 1.0)) root = C / q;
    if (!(root > 0.0 && root < 1.0))
        throw std::runtime_error("orthogonalize_pair: no root in (0,1)");

    ComplexVector mid = (f + g) / 2.0;
    EqualModulusPair out;
    out.f = f - root * mid;
    out.g = g - root * mid;
    out.subspace_basis = p.subspace_basis;
    return {std::move(out), root};
}

inline EqualModulusPair orthogonalize_pair(const EqualModulusPair& p) {
    return orthogonalize_pair_with_root(p).pair;
}

// Two orthogonal, entrywise-unimodular eigenvectors of H = -Delta on K_n in
// the eigenvalue-n eigenspace: the DFT characters j -> w^j and j -> w^{2j}.
inline EqualModulusPair complete_graph_pair(int n) {
    if (n < 3)
        throw std::invalid_argument(
            "complete_graph_pair: need n >= 3 (the eigenspace is 1-dimensional for n = 2)");
    EqualModulusPair p;
    p.f.resize(n);
    p.g.resize(n);
    for (int j = 0; j < n; ++j) {
        p.f(j) = std::polar(1.0, 2.0 * M_PI * j / n);
        p.g(j) = std::polar(1.0, 2.0 * M_PI * 2 * j / n);
    }
    return p;
}

// When some eigenbasis index l has a nonempty
// set S with no Gamma_V edge to l, u0 = phi_l + sum_S phi_j and
// v0 = phi_l - sum_S phi_j have intensity traces equal at all times.
inline std::pair<ComplexVector, ComplexVector> incomplete_support_counterexample(
    const EigenSystem& es, const SupportGraph& sg) {
    const int n = es.size();
    if (sg.n != n)
        throw std::invalid_argument("incomplete_support_counterexample: size mismatch");
    for (int l = 1; l <= n; ++l) {
        std::vector<int> gap;
        for (int j = 1; j <= n; ++j)
            if (j != l && !sg.has_edge(l, j)) gap.push_back(j);
        if (gap.empty()) continue;
        Eigen::VectorXd u0 = es.eigenvectors.col(l - 1);
        Eigen::VectorXd flip = Eigen::VectorXd::Zero(n);
        for (int j : gap) flip += es.eigenvectors.col(j - 1);
        return {(u0 + flip).cast<Complex>(), (u0 - flip).cast<Complex>()};
    }
    throw std::runtime_error(
        "incomplete_support_counterexample: support graph is complete, no counterexample exists");
}

// Per-component phases on a disconnected graph: |u_c(t,x)| = |u(t,x)| though
// u_c need not be a global multiple of u0.
inline ComplexVector disconnected_phase_family(const Graph& g, const Potential& w,
                                               const ComplexVector& u0,
                                               const std::vector<Complex>& phases) {
    if (u0.size() != g.vertex_count())
        throw std::invalid_argument("disconnected_phase_family: state length mismatch");
    (void)w;
    auto components = connected_components(g);
    if (components.size() < 2)
        throw std::invalid_argument("disconnected_phase_family: graph is connected");
    if (phases.size() != components.size())
        throw std::invalid_argument("disconnected_phase_family: need one phase per component (" +
                                    std::to_string(components.size()) + ")");
    for (const Complex& c : phases)
        if (std::abs(std::abs(c) - 1.0) > 1e-12)
            throw std::invalid_argument("disconnected_phase_family: phases must be unimodular");
    ComplexVector out = u0;
    for (size_t comp = 0; comp < components.size(); ++comp)
        for (int x : components[comp]) out(x - 1) *= phases[comp];
    return out;
}

}  // namespace graphase

#endif
