#ifndef GRAPHASE_EXPERIMENTS_HPP
#define GRAPHASE_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "graphase/counterexamples.hpp"
#include "graphase/evolution.hpp"
#include "graphase/retrieval.hpp"
#include "graphase/spectral.hpp"

namespace graphase {

enum class PotentialLaw { Zero, Uniform };

struct TrialConfig {
    int n = 12;
    double p = 0.5;
    PotentialLaw potential_law = PotentialLaw::Uniform;
    double potential_scale = 1.0;
    int trials = 100;
    std::uint64_t seed = 0;
    bool sparse_states = false;  // randomly zero coefficients to exercise non-trivial pivots
    std::optional<double> tol_dissoc;   // defaults derived from each instance's spectrum
    std::optional<double> tol_support;
};

struct TrialRecord {
    int index = 0;
    std::uint64_t seed = 0;
    bool connected = false;
    bool simple = false;
    bool dissociated = false;
    bool property_s = false;
    bool retrieval_attempted = false;
    bool retrieval_certified = false;
    bool retrieval_success = false;
    double retrieval_error = 0.0;  // phase-aligned, relative to ||u0||
};

struct TrialStats {
    TrialConfig config;
    int trials = 0;
    int connected = 0;
    int simple = 0;
    int dissociated = 0;
    int property_s = 0;
    int retrieval_attempted = 0;
    int retrieval_certified = 0;
    int retrieval_success = 0;
    std::vector<TrialRecord> records;

    double rate(int count) const { return trials > 0 ? double(count) / trials : 0.0; }
};

inline Graph sample_gnp(int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_gnp: p must be in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Graph g(n);
    for (int x = 1; x <= n; ++x)
        for (int y = x + 1; y <= n; ++y)
            if (coin(rng) < p) g.add_edge(x, y);
    return g;
}

namespace detail {

// splitmix64: derive independent per-trial seeds from the master seed
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline ComplexVector random_state(int n, std::mt19937_64& rng, bool sparse) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    ComplexVector u0(n);
    for (int m = 0; m < n; ++m) u0(m) = Complex(gauss(rng), gauss(rng));
    if (sparse && n > 1) {
        for (int m = 0; m < n; ++m)
            if (coin(rng) < 0.3) u0(m) = 0.0;
        if (u0.norm() == 0.0) u0(n - 1) = 1.0;
    }
    u0 /= u0.norm();
    return u0;
}

}  // namespace detail

inline TrialStats run_trials(const TrialConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    if (cfg.p < 0.0 || cfg.p > 1.0) throw std::invalid_argument("run_trials: p must be in [0,1]");
    TrialStats stats;
    stats.config = cfg;
    stats.trials = cfg.trials;
    stats.records.reserve(static_cast<size_t>(cfg.trials));

    for (int trial = 0; trial < cfg.trials; ++trial) {
        TrialRecord rec;
        rec.index = trial;
        rec.seed = detail::derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
        std::mt19937_64 rng(rec.seed);

        Graph g = sample_gnp(cfg.n, cfg.p, rng());
        Eigen::VectorXd w = Eigen::VectorXd::Zero(cfg.n);
        if (cfg.potential_law == PotentialLaw::Uniform) {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (int x = 0; x < cfg.n; ++x) w(x) = cfg.potential_scale * unif(rng);
        }

        rec.connected = is_connected(g);
        Hamiltonian h(g, Potential(w));
        EigenSystem es = eigendecompose(h);
        const double tol_d = cfg.tol_dissoc.value_or(default_dissociation_tol(es));
        const double tol_s = cfg.tol_support.value_or(default_support_tol(es));
        SpectrumReport rep = spectrum_report(es, tol_d, tol_s);
        rec.simple = rep.simple;
        rec.dissociated = rep.totally_dissociated;
        rec.property_s = rep.property_s;

        if (rec.connected && rec.dissociated && rec.property_s) {
            rec.retrieval_attempted = true;
            ComplexVector u0 =
                es.eigenvectors.cast<Complex>() *
                detail::random_state(cfg.n, rng, cfg.sparse_states);
            auto c = to_coefficients(u0, es);
            auto trace = sample_intensity(c, default_time_grid(es));
            try {
                auto ct = recover_cross_terms(trace, es, tol_d);
                auto sg = support_graph(es, tol_s);
                auto result = reconstruct(ct, es, sg);
                rec.retrieval_certified = result.certified;
                rec.retrieval_error = phase_aligned_distance(result.u0, u0) / u0.norm();
                rec.retrieval_success = result.certified && rec.retrieval_error <= 1e-7;
            } catch (const std::exception&) {
                rec.retrieval_certified = false;
                rec.retrieval_success = false;
            }
        }

        stats.connected += rec.connected;
        stats.simple += rec.simple;
        stats.dissociated += rec.dissociated;
        stats.property_s += rec.property_s;
        stats.retrieval_attempted += rec.retrieval_attempted;
        stats.retrieval_certified += rec.retrieval_certified;
        stats.retrieval_success += rec.retrieval_success;
        stats.records.push_back(rec);
    }
    return stats;
}

}  // namespace graphase

#endif
