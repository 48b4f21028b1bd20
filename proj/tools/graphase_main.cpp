// graphase: simulate Schrodinger evolution on finite graphs, check the
// uniqueness hypotheses, reconstruct initial states from intensity traces,
// and generate non-uniqueness counterexamples.
//
// Exit codes: 0 success/certified, 1 input or numerical error,
// 2 hypothesis check failed, 3 uncertified retrieval.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphase/graphase.hpp"

namespace {

using nlohmann::json;
using namespace graphase;

json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

int cmd_check(const std::string& graph_path, std::optional<double> tol_dissoc,
              std::optional<double> tol_support, const std::string& out_path) {
    auto [g, w] = load_graph_file(graph_path);
    Hamiltonian h(std::move(g), std::move(w));
    EigenSystem es = eigendecompose(h);
    SpectrumReport rep = spectrum_report(es, tol_dissoc.value_or(default_dissociation_tol(es)),
                                         tol_support.value_or(default_support_tol(es)));
    json out;
    out["simple"] = rep.simple;
    out["totally_dissociated"] = rep.totally_dissociated;
    out["min_eigenvalue_gap"] = number_or_null(rep.min_eigenvalue_gap);
    out["min_difference_gap"] = number_or_null(rep.min_difference_gap);
    out["property_s"] = rep.property_s;
    out["universal_vertices"] = rep.universal_vertices;
    std::ofstream file;
    open_output(out_path, file) << out.dump(2) << "\n";
    return (rep.totally_dissociated && rep.property_s) ? 0 : 2;
}

Eigen::VectorXd build_times(const EigenSystem& es, std::optional<double> t0,
                            std::optional<double> t1, std::optional<int> steps,
                            const std::vector<double>& explicit_times) {
    if (!explicit_times.empty()) {
        Eigen::VectorXd times(static_cast<int>(explicit_times.size()));
        for (size_t s = 0; s < explicit_times.size(); ++s)
            times(static_cast<int>(s)) = explicit_times[s];
        return times;
    }
    if (steps) {
        const int T = *steps;
        if (T < 1) throw std::runtime_error("--steps must be >= 1");
        const double a = t0.value_or(0.0);
        const double b = t1.value_or(a + (T - 1) * M_PI / (2.0 * std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff())));
        Eigen::VectorXd times(T);
        for (int s = 0; s < T; ++s) times(s) = T == 1 ? a : a + (b - a) * s / (T - 1);
        return times;
    }
    return default_time_grid(es);
}

int cmd_simulate(const std::string& graph_path, const std::string& state_path,
                 std::optional<double> t0, std::optional<double> t1, std::optional<int> steps,
                 const std::vector<double>& explicit_times, const std::string& out_path) {
    auto [g, w] = load_graph_file(graph_path);
    Hamiltonian h(std::move(g), std::move(w));
    ComplexVector u0 = complex_vector_from_json(load_json_file(state_path));
    if (u0.size() != h.size())
        throw std::runtime_error("state length " + std::to_string(u0.size()) +
                                 " does not match graph vertex count " + std::to_string(h.size()));
    EigenSystem es = eigendecompose(h);
    auto c = to_coefficients(u0, es);
    auto trace = sample_intensity(c, build_times(es, t0, t1, steps, explicit_times));
    std::ofstream file;
    write_trace_csv(open_output(out_path, file), trace);
    return 0;
}

int cmd_retrieve(const std::string& graph_path, const std::string& trace_path,
                 std::optional<double> tol_dissoc, std::optional<double> tol_support,
                 const std::string& out_path) {
    auto [g, w] = load_graph_file(graph_path);
    Hamiltonian h(std::move(g), std::move(w));
    std::ifstream trace_in(trace_path);
    if (!trace_in) throw std::runtime_error("cannot open trace file: " + trace_path);
    IntensityTrace trace = read_trace_csv(trace_in, trace_path);
    if (trace.vertex_count() != h.size())
        throw std::runtime_error("trace has " + std::to_string(trace.vertex_count()) +
                                 " vertex columns, graph has " + std::to_string(h.size()));
    EigenSystem es = eigendecompose(h);
    auto ct = recover_cross_terms(trace, es, tol_dissoc.value_or(default_dissociation_tol(es)));
    auto sg = support_graph(es, tol_support.value_or(default_support_tol(es)));
    RetrievalResult result = reconstruct(ct, es, sg);

    json out;
    out["u0"] = complex_vector_to_json(result.u0);
    out["pivot"] = result.pivot;
    out["certified"] = result.certified;
    out["ambiguous_modes"] = result.ambiguous_modes;
    out["residual"] = result.residual;
    out["condition"] = result.condition;
    std::ofstream file;
    open_output(out_path, file) << out.dump(2) << "\n";
    return result.certified ? 0 : 3;
}

json pair_to_json(const ComplexVector& f, const ComplexVector& g) {
    json out;
    out["f"] = complex_vector_to_json(f);
    out["g"] = complex_vector_to_json(g);
    return out;
}

// Max deviation | |u(t,x)| - |v(t,x)| | over random times.
json verify_equal_traces(const Hamiltonian& h, const EigenSystem& es, const ComplexVector& u0,
                         const ComplexVector& v0, int samples, std::uint64_t seed) {
    (void)h;
    auto cu = to_coefficients(u0, es);
    auto cv = to_coefficients(v0, es);
    std::mt19937_64 rng(seed);
    const double tmax = 2.0 * M_PI * std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff());
    std::uniform_real_distribution<double> time(0.0, tmax);
    double max_dev = 0.0;
    for (int s = 0; s < samples; ++s) {
        double t = time(rng);
        max_dev = std::max(max_dev,
                           (evolve(cu, t).cwiseAbs() - evolve(cv, t).cwiseAbs()).cwiseAbs().maxCoeff());
    }
    json out;
    out["sampled_times"] = samples;
    out["max_modulus_deviation"] = max_dev;
    out["phase_aligned_distance"] = phase_aligned_distance(u0, v0);
    return out;
}

// Built-in instance with a dissociated spectrum but incomplete support graph:
// an isolated vertex next to a potential-detuned edge.
json default_support_gap_graph() {
    return json{{"n", 3}, {"edges", {{2, 3}}}, {"potential", {0.1, 0.5, 1.1}}};
}

int cmd_counterexample(const std::string& mode, int kn, const std::string& graph_path,
                       const std::string& state_path, std::uint64_t seed,
                       const std::string& out_path) {
    json out;
    out["mode"] = mode;
    if (mode == "lemma") {
        EqualModulusPair p;
        p.f = ComplexVector(3);
        p.f << 1.0, 1.0, 1.0;
        p.g = ComplexVector(3);
        p.g << 1.0, 1.0, -1.0;
        auto res = orthogonalize_pair_with_root(p);
        out["input"] = pair_to_json(p.f, p.g);
        out["pair"] = pair_to_json(res.pair.f, res.pair.g);
        out["lambda"] = res.lambda;
        json verify;
        verify["inner_product_modulus"] = std::abs(res.pair.f.dot(res.pair.g));
        double dev = 0.0;
        for (int j = 0; j < res.pair.f.size(); ++j)
            dev = std::max(dev, std::abs(std::abs(res.pair.f(j)) - std::abs(res.pair.g(j))));
        verify["max_modulus_deviation"] = dev;
        out["verification"] = verify;
    } else if (mode == "complete-graph") {
        auto p = complete_graph_pair(kn);
        Graph g(kn);
        for (int x = 1; x <= kn; ++x)
            for (int y = x + 1; y <= kn; ++y) g.add_edge(x, y);
        Hamiltonian h(g, Potential::zeros(kn));
        out["pair"] = pair_to_json(p.f, p.g);
        json verify;
        verify["eigenvector_residual_f"] =
            (h.matrix().cast<Complex>() * p.f - double(kn) * p.f).norm();
        verify["eigenvector_residual_g"] =
            (h.matrix().cast<Complex>() * p.g - double(kn) * p.g).norm();
        verify["inner_product_modulus"] = std::abs(p.f.dot(p.g));
        EigenSystem es = eigendecompose(h);
        verify["trace_check"] = verify_equal_traces(h, es, p.f, p.g, 100, seed);
        out["verification"] = verify;
    } else if (mode == "support-gap") {
        json gj = graph_path.empty() ? default_support_gap_graph() : load_json_file(graph_path);
        auto [g, w] = parse_graph_json(gj);
        Hamiltonian h(std::move(g), std::move(w));
        EigenSystem es = eigendecompose(h);
        auto sg = support_graph(es, default_support_tol(es));
        auto [u0, v0] = incomplete_support_counterexample(es, sg);
        out["graph"] = gj;
        out["pair"] = pair_to_json(u0, v0);
        out["verification"] = verify_equal_traces(h, es, u0, v0, 100, seed);
    } else if (mode == "disconnected") {
        json gj = graph_path.empty()
                      ? json{{"n", 4}, {"edges", {{1, 2}, {3, 4}}}}
                      : load_json_file(graph_path);
        auto [g, w] = parse_graph_json(gj);
        ComplexVector u0;
        if (state_path.empty()) {
            u0 = ComplexVector::Constant(g.vertex_count(), Complex(1.0, 0.0));
            u0 /= u0.norm();
        } else {
            u0 = complex_vector_from_json(load_json_file(state_path));
        }
        auto components = connected_components(g);
        std::vector<Complex> phases;
        for (size_t comp = 0; comp < components.size(); ++comp)
            phases.push_back(std::polar(1.0, M_PI_2 * double(comp)));
        ComplexVector v0 = disconnected_phase_family(g, w, u0, phases);
        Hamiltonian h(g, w);
        EigenSystem es = eigendecompose(h);
        out["graph"] = gj;
        out["pair"] = pair_to_json(u0, v0);
        out["verification"] = verify_equal_traces(h, es, u0, v0, 100, seed);
    } else {
        throw std::runtime_error("unknown counterexample mode: " + mode);
    }
    std::ofstream file;
    open_output(out_path, file) << out.dump(2) << "\n";
    return 0;
}

json record_to_json(const TrialRecord& rec) {
    json j;
    j["index"] = rec.index;
    j["seed"] = rec.seed;
    j["connected"] = rec.connected;
    j["simple"] = rec.simple;
    j["dissociated"] = rec.dissociated;
    j["property_s"] = rec.property_s;
    j["retrieval_attempted"] = rec.retrieval_attempted;
    j["retrieval_certified"] = rec.retrieval_certified;
    j["retrieval_success"] = rec.retrieval_success;
    j["retrieval_error"] = rec.retrieval_error;
    return j;
}

int cmd_trials(const TrialConfig& cfg, const std::string& records_path,
               const std::string& out_path) {
    TrialStats stats = run_trials(cfg);
    json out;
    out["n"] = cfg.n;
    out["p"] = cfg.p;
    out["trials"] = stats.trials;
    out["seed"] = cfg.seed;
    out["potential"] = cfg.potential_law == PotentialLaw::Zero ? "zero" : "uniform";
    out["scale"] = cfg.potential_scale;
    out["counts"] = {{"connected", stats.connected},
                     {"simple", stats.simple},
                     {"dissociated", stats.dissociated},
                     {"property_s", stats.property_s},
                     {"retrieval_attempted", stats.retrieval_attempted},
                     {"retrieval_certified", stats.retrieval_certified},
                     {"retrieval_success", stats.retrieval_success}};
    out["rates"] = {{"connected", stats.rate(stats.connected)},
                    {"simple", stats.rate(stats.simple)},
                    {"dissociated", stats.rate(stats.dissociated)},
                    {"property_s", stats.rate(stats.property_s)},
                    {"retrieval_success", stats.rate(stats.retrieval_success)}};
    if (!records_path.empty()) {
        std::ofstream rec_out(records_path);
        if (!rec_out) throw std::runtime_error("cannot open records file: " + records_path);
        for (const auto& rec : stats.records) rec_out << record_to_json(rec).dump() << "\n";
    }
    std::ofstream file;
    open_output(out_path, file) << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("GRAPHASE_THREADS")) {
        int t = std::atoi(threads);
        if (t > 0) Eigen::setNbThreads(t);
    }

    CLI::App app{"Schrodinger evolution and phase retrieval on finite graphs"};
    app.require_subcommand(1);

    std::string graph_path, trace_path, state_path, out_path, records_path;
    std::optional<double> tol_dissoc, tol_support, t0, t1;
    std::optional<int> steps;
    std::vector<double> explicit_times;

    auto* check = app.add_subcommand("check", "Eigendecompose and test the uniqueness hypotheses");
    check->add_option("graph", graph_path, "graph JSON file")->required();
    check->add_option("--tol-dissoc", tol_dissoc, "dissociation tolerance");
    check->add_option("--tol-support", tol_support, "support-graph threshold");
    check->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Evolve a state and emit its intensity trace as CSV");
    simulate->add_option("graph", graph_path, "graph JSON file")->required();
    simulate->add_option("--state", state_path, "initial state JSON ([[re,im],...])")->required();
    simulate->add_option("--t0", t0, "first sample time");
    simulate->add_option("--t1", t1, "last sample time");
    simulate->add_option("--steps", steps, "number of uniform samples");
    simulate->add_option("--times", explicit_times, "explicit sample times")->delimiter(',');
    simulate->add_option("-o,--output", out_path, "output CSV path (default stdout)");

    auto* retrieve = app.add_subcommand("retrieve", "Reconstruct the initial state from an intensity trace");
    retrieve->add_option("graph", graph_path, "graph JSON file")->required();
    retrieve->add_option("trace", trace_path, "intensity CSV (simulate format)")->required();
    retrieve->add_option("--tol-dissoc", tol_dissoc, "dissociation tolerance");
    retrieve->add_option("--tol-support", tol_support, "support-graph threshold");
    retrieve->add_option("-o,--output", out_path, "output path (default stdout)");

    std::string ce_mode;
    int kn = 3;
    std::uint64_t seed = 0;
    auto* counterexample = app.add_subcommand("counterexample", "Generate a non-uniqueness instance");
    counterexample
        ->add_option("mode", ce_mode, "lemma | complete-graph | support-gap | disconnected")
        ->required()
        ->check(CLI::IsMember({"lemma", "complete-graph", "support-gap", "disconnected"}));
    counterexample->add_option("--n", kn, "complete-graph size (n >= 3)");
    counterexample->add_option("--graph", graph_path, "graph JSON (support-gap, disconnected)");
    counterexample->add_option("--state", state_path, "initial state JSON (disconnected)");
    counterexample->add_option("--seed", seed, "verification sampling seed");
    counterexample->add_option("-o,--output", out_path, "output path (default stdout)");

    TrialConfig cfg;
    std::string potential_law = "uniform";
    auto* trials = app.add_subcommand("trials", "Random-graph genericity statistics");
    trials->add_option("--n", cfg.n, "vertex count")->required();
    trials->add_option("--p", cfg.p, "edge probability")->required();
    trials->add_option("--trials", cfg.trials, "number of trials")->required();
    trials->add_option("--seed", cfg.seed, "reproducibility seed");
    trials->add_option("--potential", potential_law, "zero | uniform")
        ->check(CLI::IsMember({"zero", "uniform"}));
    trials->add_option("--scale", cfg.potential_scale, "potential scale multiplier");
    trials->add_flag("--sparse", cfg.sparse_states, "randomly zero coefficients of the test states");
    trials->add_option("--records", records_path, "per-trial JSONL output path");
    trials->add_option("-o,--output", out_path, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return cmd_check(graph_path, tol_dissoc, tol_support, out_path);
        if (*simulate)
            return cmd_simulate(graph_path, state_path, t0, t1, steps, explicit_times, out_path);
        if (*retrieve) return cmd_retrieve(graph_path, trace_path, tol_dissoc, tol_support, out_path);
        if (*counterexample)
            return cmd_counterexample(ce_mode, kn, graph_path, state_path, seed, out_path);
        if (*trials) {
            cfg.potential_law =
                potential_law == "zero" ? PotentialLaw::Zero : PotentialLaw::Uniform;
            return cmd_trials(cfg, records_path, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
