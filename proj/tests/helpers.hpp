#ifndef GRAPHASE_TESTS_HELPERS_HPP
#define GRAPHASE_TESTS_HELPERS_HPP

#include <random>

#include "graphase/graphase.hpp"

namespace graphase::testing {

inline Graph path3() { return Graph(3, {{1, 2}, {2, 3}}); }

inline Graph complete(int n) {
    Graph g(n);
    for (int x = 1; x <= n; ++x)
        for (int y = x + 1; y <= n; ++y) g.add_edge(x, y);
    return g;
}

inline Hamiltonian path3_hamiltonian() { return Hamiltonian(path3(), Potential::zeros(3)); }

// Frozen P3 eigenbasis (w = 0): direct solve of the 3x3 system.
//   eigenvalues 0, 1, 3
//   phi_1 = (1,1,1)/sqrt3, phi_2 = (1,0,-1)/sqrt2, phi_3 = (1,-2,1)/sqrt6
inline Eigen::MatrixXd path3_eigenvectors() {
    Eigen::MatrixXd phi(3, 3);
    const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
    phi << 1 / s3, 1 / s2, 1 / s6,
           1 / s3, 0.0,   -2 / s6,
           1 / s3, -1 / s2, 1 / s6;
    return phi;
}

// Disconnected instance with a dissociated spectrum but incomplete Gamma_V:
// isolated vertex 1 plus the edge {2,3} with detuned potentials.
inline Hamiltonian support_gap_hamiltonian() {
    Graph g(3, {{2, 3}});
    Eigen::VectorXd w(3);
    w << 0.1, 0.5, 1.1;
    return Hamiltonian(g, Potential(w));
}

inline ComplexVector random_unit_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector u(n);
    for (int m = 0; m < n; ++m) u(m) = Complex(gauss(rng), gauss(rng));
    u /= u.norm();
    return u;
}

// Equal-modulus pair with random moduli and phases (non-orthogonal in general).
inline EqualModulusPair random_equal_modulus_pair(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> modulus(0.2, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    EqualModulusPair p;
    p.f.resize(n);
    p.g.resize(n);
    for (int j = 0; j < n; ++j) {
        const double r = modulus(rng);
        p.f(j) = std::polar(r, angle(rng));
        p.g(j) = std::polar(r, angle(rng));
    }
    return p;
}

}  // namespace graphase::testing

#endif
