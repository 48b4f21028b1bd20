#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace graphase;
using Catch::Approx;

namespace {

double max_modulus_deviation(const ComplexVector& f, const ComplexVector& g) {
    double dev = 0;
    for (int j = 0; j < f.size(); ++j)
        dev = std::max(dev, std::abs(std::abs(f(j)) - std::abs(g(j))));
    return dev;
}

double span_projection_residual(const ComplexVector& v, const ComplexVector& f,
                                const ComplexVector& g) {
    Eigen::MatrixXcd basis(f.size(), 2);
    basis.col(0) = f;
    basis.col(1) = g;
    Eigen::VectorXcd coeffs = basis.colPivHouseholderQr().solve(v);
    return (basis * coeffs - v).norm();
}

}  // namespace

TEST_CASE("orthogonalize the hand-computed pair") {
    // f=(1,1,1), g=(1,1,-1): q(l) = 2l^2 - 4l + 1, root in (0,1) is 1 - 1/sqrt2
    EqualModulusPair p;
    p.f.resize(3);
    p.f << 1.0, 1.0, 1.0;
    p.g.resize(3);
    p.g << 1.0, 1.0, -1.0;
    auto res = orthogonalize_pair_with_root(p);
    REQUIRE(res.lambda == Approx(1.0 - 1.0 / std::sqrt(2.0)).margin(1e-12));
    ComplexVector ef(3), eg(3);
    ef << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1.0;
    eg << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1.0;
    REQUIRE((res.pair.f - ef).norm() < 1e-12);
    REQUIRE((res.pair.g - eg).norm() < 1e-12);
    REQUIRE(std::abs(res.pair.f.dot(res.pair.g)) < 1e-12);
}

TEST_CASE("already orthogonal pairs are returned unchanged") {
    EqualModulusPair p;
    p.f.resize(2);
    p.f << 1.0, 0.0;
    p.g.resize(2);
    p.g << 0.0, 1.0;
    auto out = orthogonalize_pair(p);
    REQUIRE(out.f == p.f);
    REQUIRE(out.g == p.g);
}

TEST_CASE("degenerate pairs are rejected") {
    EqualModulusPair p;
    p.f.resize(2);
    p.f << 1.0, Complex(0, 1);
    p.g = Complex(0, 1) * p.f;
    REQUIRE_THROWS_AS(orthogonalize_pair(p), std::invalid_argument);
}

TEST_CASE("orthogonalization properties on random pairs") {
    std::mt19937_64 rng(77);
    int done = 0;
    while (done < 50) {
        const int n = 2 + int(rng() % 49);
        auto p = testing::random_equal_modulus_pair(n, rng);
        if (std::abs(p.f.dot(p.g)) <= 1e-12 * p.f.norm() * p.g.norm()) continue;
        if (phase_aligned_distance(p.f, p.g) <= 1e-6 * p.f.norm()) continue;
        auto res = orthogonalize_pair_with_root(p);
        REQUIRE(res.lambda > 0.0);
        REQUIRE(res.lambda < 1.0);
        REQUIRE(std::abs(res.pair.f.dot(res.pair.g)) <=
                1e-10 * res.pair.f.norm() * res.pair.g.norm());
        REQUIRE(max_modulus_deviation(res.pair.f, res.pair.g) <= 1e-10);
        REQUIRE(span_projection_residual(res.pair.f, p.f, p.g) <= 1e-10);
        REQUIRE(span_projection_residual(res.pair.g, p.f, p.g) <= 1e-10);
        ++done;
    }
}

TEST_CASE("complete graph pair for n = 3") {
    auto p = complete_graph_pair(3);
    const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
    REQUIRE(std::abs(p.f(0) - Complex(1, 0)) < 1e-15);
    REQUIRE(std::abs(p.f(1) - w) < 1e-15);
    REQUIRE(std::abs(p.f(2) - w * w) < 1e-15);
    REQUIRE(std::abs(p.g(1) - w * w) < 1e-15);
    REQUIRE(std::abs(p.g(2) - w * w * w * w) < 1e-12);
    REQUIRE(std::abs(p.f.dot(p.g)) < 1e-12);

    Hamiltonian h(testing::complete(3), Potential::zeros(3));
    REQUIRE((h.matrix().cast<Complex>() * p.f - 3.0 * p.f).norm() < 1e-12);
    REQUIRE((h.matrix().cast<Complex>() * p.g - 3.0 * p.g).norm() < 1e-12);
}

TEST_CASE("complete graph pair invariants for n in 3..12") {
    for (int n = 3; n <= 12; ++n) {
        auto p = complete_graph_pair(n);
        Hamiltonian h(testing::complete(n), Potential::zeros(n));
        REQUIRE((h.matrix().cast<Complex>() * p.f - double(n) * p.f).norm() <= 1e-10 * n);
        REQUIRE((h.matrix().cast<Complex>() * p.g - double(n) * p.g).norm() <= 1e-10 * n);
        REQUIRE(std::abs(p.f.dot(p.g)) <= 1e-10 * n);
        for (int j = 0; j < n; ++j) {
            REQUIRE(std::abs(std::abs(p.f(j)) - 1.0) <= 1e-12);
            REQUIRE(std::abs(std::abs(p.g(j)) - 1.0) <= 1e-12);
        }
        REQUIRE(phase_aligned_distance(p.f, p.g) > 0.5 * p.f.norm());
    }
}

TEST_CASE("complete graph pair requires n >= 3") {
    REQUIRE_THROWS_AS(complete_graph_pair(2), std::invalid_argument);
}

TEST_CASE("incomplete support graph counterexample") {
    Hamiltonian h = testing::support_gap_hamiltonian();
    EigenSystem es = eigendecompose(h);
    SupportGraph sg = support_graph(es, default_support_tol(es));
    auto [u0, v0] = incomplete_support_counterexample(es, sg);
    REQUIRE(phase_aligned_distance(u0, v0) > 0.5 * u0.norm());

    auto cu = to_coefficients(u0, es);
    auto cv = to_coefficients(v0, es);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> time(0.0, 20.0);
    for (int s = 0; s < 100; ++s) {
        const double t = time(rng);
        REQUIRE((evolve(cu, t).cwiseAbs() - evolve(cv, t).cwiseAbs()).cwiseAbs().maxCoeff() <=
                1e-10);
    }
}

TEST_CASE("complete support graphs admit no counterexample") {
    EigenSystem es = eigendecompose(testing::path3_hamiltonian());
    SupportGraph sg = support_graph(es, default_support_tol(es));
    REQUIRE_THROWS_AS(incomplete_support_counterexample(es, sg), std::runtime_error);
}

TEST_CASE("disconnected phase family") {
    Graph g(4, {{1, 2}, {3, 4}});
    Potential w = Potential::zeros(4);
    ComplexVector u0 = ComplexVector::Constant(4, Complex(0.5, 0.0));

    SECTION("distinct phases give equal traces but distinct states") {
        ComplexVector uc = disconnected_phase_family(g, w, u0, {Complex(1, 0), Complex(0, 1)});
        REQUIRE(phase_aligned_distance(u0, uc) > 0.0);
        EigenSystem es = eigendecompose(Hamiltonian(g, w));
        auto c0 = to_coefficients(u0, es);
        auto cc = to_coefficients(uc, es);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> time(0.0, 10.0);
        for (int s = 0; s < 50; ++s) {
            const double t = time(rng);
            REQUIRE((evolve(c0, t).cwiseAbs() - evolve(cc, t).cwiseAbs()).cwiseAbs().maxCoeff() <=
                    1e-10);
        }
    }

    SECTION("equal phases act globally") {
        const Complex c = std::polar(1.0, 0.4);
        ComplexVector uc = disconnected_phase_family(g, w, u0, {c, c});
        REQUIRE((uc - c * u0).norm() < 1e-15);
    }

    SECTION("single-component support stays a global multiple") {
        ComplexVector one_comp = ComplexVector::Zero(4);
        one_comp(0) = one_comp(1) = 1.0 / std::sqrt(2.0);
        ComplexVector uc =
            disconnected_phase_family(g, w, one_comp, {Complex(0, 1), Complex(-1, 0)});
        REQUIRE(phase_aligned_distance(one_comp, uc) < 1e-15);
    }

    SECTION("argument validation") {
        REQUIRE_THROWS_AS(disconnected_phase_family(testing::path3(), Potential::zeros(3),
                                                    ComplexVector::Zero(3), {Complex(1, 0)}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(disconnected_phase_family(g, w, u0, {Complex(1, 0)}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(disconnected_phase_family(g, w, u0, {Complex(1, 0), Complex(2, 0)}),
                          std::invalid_argument);
    }
}

TEST_CASE("counterexample pairs are observationally indistinguishable") {
    Hamiltonian h = testing::support_gap_hamiltonian();
    EigenSystem es = eigendecompose(h);
    SupportGraph sg = support_graph(es, default_support_tol(es));
    auto [u0, v0] = incomplete_support_counterexample(es, sg);
    auto tu = sample_intensity(to_coefficients(u0, es), default_time_grid(es));
    auto tv = sample_intensity(to_coefficients(v0, es), default_time_grid(es));
    auto ctu = recover_cross_terms(tu, es, default_dissociation_tol(es));
    auto ctv = recover_cross_terms(tv, es, default_dissociation_tol(es));
    const int n = es.size();
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
            for (int m = 1; m <= n; ++m)
                REQUIRE(std::abs(ctu.at(j, k, m) - ctv.at(j, k, m)) <= 1e-8);
}
