#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace graphase;
using Catch::Approx;

namespace {

EigenSystem synthetic_spectrum(std::initializer_list<double> eigenvalues) {
    EigenSystem es;
    es.eigenvalues.resize(static_cast<int>(eigenvalues.size()));
    int j = 0;
    for (double v : eigenvalues) es.eigenvalues(j++) = v;
    es.eigenvectors = Eigen::MatrixXd::Identity(j, j);
    return es;
}

}  // namespace

TEST_CASE("K3 eigenvalues are 0, 3, 3") {
    Hamiltonian h(testing::complete(3), Potential::zeros(3));
    EigenSystem es = eigendecompose(h);
    REQUIRE(es.eigenvalues(0) == Approx(0.0).margin(1e-12));
    REQUIRE(es.eigenvalues(1) == Approx(3.0).margin(1e-12));
    REQUIRE(es.eigenvalues(2) == Approx(3.0).margin(1e-12));
}

TEST_CASE("P3 eigensystem matches the direct solve") {
    EigenSystem es = eigendecompose(testing::path3_hamiltonian());
    REQUIRE(es.eigenvalues(0) == Approx(0.0).margin(1e-12));
    REQUIRE(es.eigenvalues(1) == Approx(1.0).margin(1e-12));
    REQUIRE(es.eigenvalues(2) == Approx(3.0).margin(1e-12));
    Eigen::MatrixXd expected = testing::path3_eigenvectors();
    REQUIRE((es.eigenvectors - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single vertex eigensystem") {
    Eigen::VectorXd w(1);
    w << 5.0;
    EigenSystem es = eigendecompose(Hamiltonian(Graph(1), Potential(w)));
    REQUIRE(es.eigenvalues(0) == 5.0);
    REQUIRE(es.eigenvectors(0, 0) == 1.0);
}

TEST_CASE("eigensystem invariants on random instances") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + int(rng() % 15);
        Graph g = sample_gnp(n, 0.5, rng());
        Eigen::VectorXd w(n);
        for (int x = 0; x < n; ++x) w(x) = unif(rng);
        Hamiltonian h(g, Potential(w));
        EigenSystem es = eigendecompose(h);

        const double hnorm = h.matrix().norm();
        for (int j = 0; j < n; ++j) {
            REQUIRE((h.matrix() * es.eigenvectors.col(j) - es.eigenvalues(j) * es.eigenvectors.col(j))
                        .norm() <= 1e-10 * (1 + std::abs(es.eigenvalues(j))) * hnorm);
            if (j > 0) REQUIRE(es.eigenvalues(j) >= es.eigenvalues(j - 1));
        }
        REQUIRE((es.eigenvectors.transpose() * es.eigenvectors - Eigen::MatrixXd::Identity(n, n))
                    .cwiseAbs().maxCoeff() <= 1e-12);

        // spectral reconstruction of H
        Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j)
            rebuilt += es.eigenvalues(j) * es.eigenvectors.col(j) * es.eigenvectors.col(j).transpose();
        REQUIRE((rebuilt - h.matrix()).norm() <= 1e-9 * hnorm);
    }
}

TEST_CASE("sign convention makes the decomposition deterministic") {
    Hamiltonian h = testing::path3_hamiltonian();
    EigenSystem a = eigendecompose(h), b = eigendecompose(h);
    REQUIRE(a.eigenvectors == b.eigenvectors);
    for (int j = 0; j < 3; ++j) {
        for (int m = 0; m < 3; ++m) {
            if (std::abs(a.eigenvectors(m, j)) > 1e-12) {
                REQUIRE(a.eigenvectors(m, j) > 0);
                break;
            }
        }
    }
}

TEST_CASE("dissociation examples") {
    // differences of (0,1,3): {+-1, +-2, +-3}, all distinct, min gap 1
    auto r = check_dissociated(synthetic_spectrum({0, 1, 3}), 1e-9);
    REQUIRE(r.dissociated);
    REQUIRE(r.min_difference_gap == Approx(1.0));

    REQUIRE_FALSE(check_dissociated(synthetic_spectrum({0, 3, 3}), 1e-9).dissociated);
    // arithmetic progression: 1-0 = 2-1
    REQUIRE_FALSE(check_dissociated(synthetic_spectrum({0, 1, 2}), 1e-9).dissociated);
    REQUIRE(check_dissociated(synthetic_spectrum({5}), 1e-9).dissociated);
    REQUIRE_THROWS_AS(check_dissociated(synthetic_spectrum({0, 1}), 0.0), std::invalid_argument);
}

TEST_CASE("dissociation is monotone in tol") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd vals(4);
        for (int j = 0; j < 4; ++j) vals(j) = unif(rng);
        std::sort(vals.data(), vals.data() + 4);
        EigenSystem es{vals, Eigen::MatrixXd::Identity(4, 4)};
        for (double tol : {1e-3, 1e-6, 1e-9}) {
            if (check_dissociated(es, tol).dissociated)
                REQUIRE(check_dissociated(es, tol / 100).dissociated);
        }
    }
}

TEST_CASE("P3 support graph is complete with witness vertex 1") {
    EigenSystem es = eigendecompose(testing::path3_hamiltonian());
    SupportGraph sg = support_graph(es, default_support_tol(es));
    REQUIRE(sg.is_complete());
    REQUIRE(check_property_s(sg));
    // phi_{j,1} != 0 for every j, so vertex 1 works for every pair
    for (auto [j, k] : sg.edges())
        REQUIRE(std::abs(es.eigenvectors(0, j - 1) * es.eigenvectors(0, k - 1)) > 0.1);
}

TEST_CASE("single-vertex support graph is vacuously complete") {
    EigenSystem es;
    es.eigenvalues.resize(1);
    es.eigenvalues << 5.0;
    es.eigenvectors = Eigen::MatrixXd::Identity(1, 1);
    SupportGraph sg = support_graph(es, 1e-10);
    REQUIRE(sg.edges().empty());
    REQUIRE(sg.is_complete());
    REQUIRE(sg.is_universal(1));
}

TEST_CASE("full-support eigenvector is a universal vertex") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + int(rng() % 10);
        Graph g = sample_gnp(n, 0.6, rng());
        if (!is_connected(g)) continue;
        EigenSystem es = eigendecompose(Hamiltonian(g, Potential::zeros(n)));
        // phi_1 = (1,...,1)/sqrt(n) on a connected graph with w = 0
        REQUIRE((es.eigenvectors.col(0) -
                 Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)))).cwiseAbs().maxCoeff() <
                1e-10);
        REQUIRE(std::abs(es.eigenvalues(0)) < 1e-10);
        SupportGraph sg = support_graph(es, default_support_tol(es));
        REQUIRE(sg.is_universal(1));
    }
}

TEST_CASE("spectrum report examples") {
    auto p3 = spectrum_report(testing::path3_hamiltonian());
    REQUIRE(p3.simple);
    REQUIRE(p3.totally_dissociated);
    REQUIRE(p3.property_s);
    REQUIRE(p3.universal_vertices == std::vector<int>{1, 2, 3});

    auto k3 = spectrum_report(Hamiltonian(testing::complete(3), Potential::zeros(3)));
    REQUIRE_FALSE(k3.simple);
    REQUIRE_FALSE(k3.totally_dissociated);

    auto edgeless2 = spectrum_report(Hamiltonian(Graph(2), Potential::zeros(2)));
    REQUIRE_FALSE(edgeless2.simple);
    REQUIRE_FALSE(edgeless2.totally_dissociated);
}

TEST_CASE("report invariants: dissociated implies simple, property S implies all universal") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + int(rng() % 10);
        Graph g = sample_gnp(n, 0.5, rng());
        Eigen::VectorXd w(n);
        for (int x = 0; x < n; ++x) w(x) = unif(rng);
        auto rep = spectrum_report(Hamiltonian(g, Potential(w)));
        if (rep.totally_dissociated) REQUIRE(rep.simple);
        if (rep.property_s) REQUIRE(rep.universal_vertices.size() == size_t(n));
    }
}
