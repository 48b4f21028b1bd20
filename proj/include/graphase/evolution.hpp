#ifndef GRAPHASE_EVOLUTION_HPP
#define GRAPHASE_EVOLUTION_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "graphase/spectral.hpp"

namespace graphase {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

// Coefficients a_j = <u0, phi_j> of a state in the eigenbasis. The
// EigenSystem is copied in; instances are self-contained values.
struct CoefficientVector {
    ComplexVector a;
    EigenSystem basis;

    int size() const { return static_cast<int>(a.size()); }
};

inline CoefficientVector to_coefficients(const ComplexVector& u0, const EigenSystem& es) {
    if (u0.size() != es.size())
        throw std::invalid_argument("to_coefficients: state length " + std::to_string(u0.size()) +
                                    " does not match basis size " + std::to_string(es.size()));
    // Real basis, so a = Phi^T u0 with no conjugation.
    return CoefficientVector{es.eigenvectors.transpose().cast<Complex>() * u0, es};
}

inline ComplexVector from_coefficients(const CoefficientVector& c) {
    return c.basis.eigenvectors.cast<Complex>() * c.a;
}

// u(t) = exp(-iHt) u0 = sum_j a_j e^{-i lambda_j t} phi_j, solving
// i du/dt = H u.
inline ComplexVector evolve(const CoefficientVector& c, double t) {
    const Complex i(0.0, 1.0);
    ComplexVector phased(c.size());
    for (int j = 0; j < c.size(); ++j)
        phased(j) = c.a(j) * std::exp(-i * c.basis.eigenvalues(j) * t);
    return c.basis.eigenvectors.cast<Complex>() * phased;
}

// Dense matrix exponential route, independent of the eigendecomposition.
// Test oracle for evolve.
inline ComplexVector evolve_direct(const Hamiltonian& h, const ComplexVector& u0, double t) {
    if (u0.size() != h.size())
        throw std::invalid_argument("evolve_direct: state length does not match Hamiltonian size");
    const Complex i(0.0, 1.0);
    Eigen::MatrixXcd generator = -i * t * h.matrix().cast<Complex>();
    return generator.exp() * u0;
}

// Sampled |u(t,x)|^2 trace: values(s, m) = |u(times(s), m+1)|^2.
struct IntensityTrace {
    Eigen::VectorXd times;
    Eigen::MatrixXd values;

    int sample_count() const { return static_cast<int>(times.size()); }
    int vertex_count() const { return static_cast<int>(values.cols()); }
};

inline IntensityTrace sample_intensity(const CoefficientVector& c, const Eigen::VectorXd& times) {
    if (!times.allFinite())
        throw std::invalid_argument("sample_intensity: times must be finite");
    IntensityTrace trace;
    trace.times = times;
    trace.values.resize(times.size(), c.size());
    for (int s = 0; s < times.size(); ++s)
        trace.values.row(s) = evolve(c, times(s)).cwiseAbs2().transpose();
    return trace;
}

// Uniform grid keeping every frequency lambda_j - lambda_k unaliased, with
// 4x oversampling of the n(n-1)+1 distinct frequencies.
inline Eigen::VectorXd default_time_grid(const EigenSystem& es) {
    const int n = es.size();
    const double scale = std::max({std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(n - 1)), 1.0});
    const double tau = M_PI / (2.0 * scale);
    const int samples = 4 * (n * (n - 1) + 1);
    Eigen::VectorXd times(samples);
    for (int s = 0; s < samples; ++s) times(s) = s * tau;
    return times;
}

}  // namespace graphase

#endif
