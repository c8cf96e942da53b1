#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliffcut/adapt.hpp"
#include "cliffcut/baselines.hpp"
#include "cliffcut/experiments.hpp"
#include "cliffcut/graph.hpp"
#include "cliffcut/parallel.hpp"
#include "cliffcut/solution.hpp"
#include "cliffcut/tableau.hpp"
#include "cliffcut/version.hpp"

namespace {

using nlohmann::json;
using namespace cliffcut;

uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

// Resolves --seed: when absent, draw one from entropy and announce it so the
// run stays replayable.
uint64_t resolve_seed(const CLI::App* cmd, uint64_t seed) {
    if (cmd->count("--seed") == 0) {
        seed = entropy_seed();
        std::cerr << "seed: " << seed << "\n";
    }
    return seed;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            throw std::runtime_error(out_path + ": cannot open for writing");
        }
        f << j.dump(2) << "\n";
    }
}

json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for reading");
    }
    return json::parse(f);
}

struct GenArgs {
    std::string family;
    int n = 0;
    std::string dist = "u01";
    int k = 3;
    double p = 0.5;
    uint64_t seed = 0;
    std::string out;
};

WeightSpec dist_spec(const std::string& dist) {
    if (dist == "u01") return WeightSpec::u01();
    if (dist == "unit") return WeightSpec::unit();
    if (dist == "exp") return WeightSpec::exponential(1.0);
    if (dist == "normal") return WeightSpec::normal(0.0, 1.0);
    throw CLI::ValidationError("--dist", "unknown distribution \"" + dist + "\"");
}

void run_gen(const CLI::App* cmd, const GenArgs& a) {
    uint64_t seed = resolve_seed(cmd, a.seed);
    Graph g(1);
    if (a.family == "complete") {
        g = gen_complete(a.n, dist_spec(a.dist), seed);
    } else if (a.family == "sk") {
        g = gen_sk(a.n, seed);
    } else if (a.family == "regular") {
        // Unit weights unless a distribution was asked for explicitly.
        std::string dist = cmd->count("--dist") > 0 ? a.dist : "unit";
        g = gen_regular(a.n, a.k, dist_spec(dist), seed);
    } else if (a.family == "er") {
        g = gen_erdos_renyi(a.n, a.p, seed);
    } else {
        throw CLI::ValidationError("family", "unknown family \"" + a.family + "\"");
    }
    if (a.out.empty()) {
        std::cout << format_edge_list(g);
    } else {
        write_edge_list(g, a.out);
        std::cerr << "wrote " << g.num_edges() << " edges to " << a.out << "\n";
    }
}

struct SolveArgs {
    std::string in;
    std::string solver = "adapt-det";
    int rounds = 1;
    bool per_start = false;
    uint64_t seed = 0;
    int threads = 0;
    std::string out;
    bool pretty = false;
};

void run_solve(const CLI::App* cmd, const SolveArgs& a) {
    if (a.per_start && a.solver != "adapt-det") {
        throw CLI::ValidationError("--per-start", "only the adapt-det solver records all starts");
    }
    Graph g = read_edge_list(a.in);
    Solution sol;
    std::vector<PerStartRecord> per_start;
    if (a.solver == "adapt-det") {
        // Deterministic solver, no randomness to seed.
        DeterministicResult det = deterministic(g, TieBreakPolicy::lowest_index(), a.threads);
        sol = std::move(det.best);
        per_start = std::move(det.per_start);
    } else if (a.solver == "adapt-rand") {
        uint64_t seed = resolve_seed(cmd, a.seed);
        sol = randomized(g, seed);
    } else if (a.solver == "gw") {
        GWParams p;
        p.rounds = a.rounds;
        p.seed = resolve_seed(cmd, a.seed);
        bool converged = false;
        sol = gw_solve(g, p, &converged);
        if (!converged) {
            std::cerr << "warning: relaxation did not reach the gradient tolerance\n";
        }
    } else if (a.solver == "local") {
        uint64_t seed = resolve_seed(cmd, a.seed);
        sol = local_search(g, random_assignment(g.num_nodes(), seed), seed);
    } else if (a.solver == "sg") {
        sol = sahni_gonzalez(g, resolve_seed(cmd, a.seed));
    } else {
        throw CLI::ValidationError("--solver", "unknown solver \"" + a.solver + "\"");
    }
    if (a.pretty) {
        std::cout << a.solver << ": cut " << sol.cut_value << ", energy " << sol.ising_energy
                  << ", assignment " << sol.assignment.to_string() << ", " << sol.wall_time_s
                  << " s\n";
        return;
    }
    json j = solution_to_json(sol);
    if (a.per_start) {
        json arr = json::array();
        for (const PerStartRecord& r : per_start) {
            arr.push_back({{"k", r.k}, {"cut_value", r.cut_value},
                           {"ising_energy", r.ising_energy}});
        }
        j["per_start"] = std::move(arr);
    }
    emit(j, a.out);
}

struct ExactArgs {
    std::string in;
    int limit = 26;
    int threads = 0;
    std::string out;
    bool pretty = false;
};

void run_exact(const ExactArgs& a) {
    if (a.limit > 26) {
        std::cerr << "warning: enumerating 2^" << (a.limit - 1)
                  << " assignments can take a long time\n";
    }
    Graph g = read_edge_list(a.in);
    ExactResult r = exact_maxcut(g, a.limit, a.threads);
    if (a.pretty) {
        std::cout << "optimum cut " << r.optimum_cut << ", energy " << r.optimum_energy
                  << ", witness " << r.witness.to_string() << " (" << r.evaluated
                  << " assignments)\n";
        return;
    }
    emit(json{{"optimum_cut", r.optimum_cut},
              {"optimum_energy", r.optimum_energy},
              {"witness", r.witness.to_string()},
              {"evaluated", r.evaluated}},
         a.out);
}

struct VerifyArgs {
    std::string graph_in;
    std::string solution_in;
    int max_n = 256;
    bool pretty = false;
};

void run_verify(const VerifyArgs& a) {
    Graph g = read_edge_list(a.graph_in);
    if (g.num_nodes() > a.max_n) {
        throw std::runtime_error("verify: " + std::to_string(g.num_nodes()) +
                                 " nodes exceeds the size cap " + std::to_string(a.max_n) +
                                 " (raise with --max-n)");
    }
    Solution sol = solution_from_json(read_json_file(a.solution_in));
    std::string diagnostic;
    if (!verify_solution(g, sol, &diagnostic)) {
        throw std::runtime_error("verification failed: " + diagnostic);
    }
    if (a.pretty) {
        std::cout << "verified: cut " << sol.cut_value << " reproduced by tableau replay\n";
    } else {
        std::cout << json{{"verified", true}, {"cut_value", sol.cut_value}}.dump(2) << "\n";
    }
}

struct BatchArgs {
    std::string config_path;
    std::string out;
    std::string per_start_out;
    int threads = 0;
};

BatchConfig parse_batch_config(const json& j) {
    BatchConfig cfg;
    cfg.family = j.value("family", cfg.family);
    cfg.sizes = j.at("sizes").get<std::vector<int>>();
    cfg.instances = j.value("instances", cfg.instances);
    for (const json& s : j.at("solvers")) {
        SolverSpec spec;
        if (s.is_string()) {
            spec.name = s.get<std::string>();
        } else {
            spec.name = s.at("name").get<std::string>();
            spec.rounds = s.value("rounds", 1);
        }
        cfg.solvers.push_back(std::move(spec));
    }
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.with_exact = j.value("with_exact", cfg.with_exact);
    cfg.exact_limit = j.value("exact_limit", cfg.exact_limit);
    cfg.per_start = j.value("per_start", cfg.per_start);
    cfg.K = j.value("K", cfg.K);
    cfg.p = j.value("p", cfg.p);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.out_csv = j.value("out_csv", cfg.out_csv);
    return cfg;
}

void run_batch_cmd(const CLI::App* cmd, const BatchArgs& a) {
    json j = read_json_file(a.config_path);
    BatchConfig cfg = parse_batch_config(j);
    if (!a.out.empty()) {
        cfg.out_csv = a.out;
        j["out_csv"] = a.out;
    }
    if (cmd->count("--threads") > 0) {
        cfg.threads = a.threads;
    }
    std::vector<InstanceResult> results = run_batch(cfg);
    if (!cfg.out_csv.empty()) {
        write_sidecar(cfg.out_csv, j.dump());
    }
    if (!a.per_start_out.empty()) {
        write_per_start_csv(results, a.per_start_out);
    }
    std::cerr << results.size() << " rows"
              << (cfg.out_csv.empty() ? "" : " -> " + cfg.out_csv) << "\n";
    if (cfg.out_csv.empty()) {
        write_results_csv(results, "/dev/stdout");
    }
}

struct FitArgs {
    std::string in;
    std::string model = "parisi";
    std::string solver;
    int n_lo = 0;
    int n_hi = 1 << 30;
    std::string out;
};

void run_fit(const FitArgs& a) {
    if (a.model != "parisi") {
        throw CLI::ValidationError("--model", "only the n^{-2/3} density model is available");
    }
    std::vector<InstanceResult> rows = read_results_csv(a.in);
    if (!a.solver.empty()) {
        std::erase_if(rows, [&](const InstanceResult& r) { return r.solver != a.solver; });
    }
    FitResult fit = fit_density(rows, a.n_lo, a.n_hi);
    emit(json{{"q", fit.q},
              {"limit_value", fit.limit_value},
              {"residual", fit.residual},
              {"n_lo", fit.n_lo},
              {"n_hi", fit.n_hi},
              {"sizes", fit.sizes}},
         a.out);
}

struct AlphaArgs {
    std::string in;
    double grid_lo = 0.88;
    double grid_hi = 1.0;
    double grid_step = 0.0005;
    std::string sweep_out;
    std::string out;
};

void run_alpha(const AlphaArgs& a) {
    std::vector<PerStartDataset> data = read_per_start_csv(a.in);
    ThresholdSweepResult r = estimate_alpha_bar(data, a.grid_lo, a.grid_hi, a.grid_step);
    if (!a.sweep_out.empty()) {
        std::ofstream f(a.sweep_out, std::ios::binary);
        if (!f) {
            throw std::runtime_error(a.sweep_out + ": cannot open for writing");
        }
        f << "alpha_tr,slope\n";
        for (const ThresholdSweepEntry& e : r.sweep) {
            f << e.alpha_tr << "," << e.slope << "\n";
        }
    }
    emit(json{{"alpha_bar", r.alpha_bar},
              {"alpha_bar_r", r.alpha_bar_r},
              {"alpha_bar_at_boundary", r.alpha_bar_at_boundary},
              {"alpha_bar_r_at_boundary", r.alpha_bar_r_at_boundary}},
         a.out);
}

struct TtsArgs {
    std::string family = "complete-u01";
    std::vector<int> sizes;
    int instances = 10;
    std::string solver = "adapt-rand";
    int rounds = 1;
    int K = 3;
    double p = 0.5;
    uint64_t master_seed = 1;
    double min_sample_s = 0.005;
    std::string out;
};

void run_tts(const TtsArgs& a) {
    TtsConfig cfg;
    cfg.family = a.family;
    cfg.sizes = a.sizes;
    cfg.instances = a.instances;
    cfg.master_seed = a.master_seed;
    cfg.K = a.K;
    cfg.p = a.p;
    cfg.min_sample_s = a.min_sample_s;

    std::function<void(const Graph&, uint64_t)> fn;
    if (a.solver == "adapt-rand") {
        fn = [](const Graph& g, uint64_t seed) { randomized(g, seed); };
    } else if (a.solver == "adapt-det") {
        fn = [](const Graph& g, uint64_t) { deterministic(g, TieBreakPolicy::lowest_index(), 1); };
    } else if (a.solver == "gw") {
        int rounds = a.rounds;
        fn = [rounds](const Graph& g, uint64_t seed) {
            GWParams p;
            p.rounds = rounds;
            p.seed = seed;
            gw_solve(g, p);
        };
    } else if (a.solver == "local") {
        fn = [](const Graph& g, uint64_t seed) {
            local_search(g, random_assignment(g.num_nodes(), seed), seed);
        };
    } else if (a.solver == "sg") {
        fn = [](const Graph& g, uint64_t seed) { sahni_gonzalez(g, seed); };
    } else {
        throw CLI::ValidationError("--solver", "unknown solver \"" + a.solver + "\"");
    }

    TtsResult r = tts_benchmark(cfg, fn);
    if (r.timer_warning) {
        std::cerr << "warning: single runs were below " << cfg.min_sample_s * 1e3
                  << " ms, timings use repetition batches\n";
    }
    json rows = json::array();
    for (const TtsRow& row : r.rows) {
        rows.push_back({{"n", row.n},
                        {"mean_s", row.mean_s},
                        {"std_s", row.std_s},
                        {"repetitions", row.repetitions}});
    }
    emit(json{{"rows", std::move(rows)},
              {"exponent", r.exponent},
              {"prefactor_log", r.prefactor_log},
              {"timer_warning", r.timer_warning}},
         a.out);
}

struct CnotArgs {
    int n = 0;
    std::string topology = "all-to-all";
};

void run_cnot(const CnotArgs& a) {
    Topology t;
    if (a.topology == "all-to-all") {
        t = Topology::all_to_all;
    } else if (a.topology == "linear") {
        t = Topology::linear;
    } else {
        throw CLI::ValidationError("--topology", "expected all-to-all or linear");
    }
    std::cout << cnot_count(a.n, t) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MaxCut approximation toolkit: Clifford-circuit greedy solver, exact oracle, "
                 "classical baselines and benchmark harness"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a graph instance as an edge-list file");
    gen->add_option("family", gen_args.family, "complete | sk | regular | er")->required();
    gen->add_option("--n", gen_args.n, "number of nodes")->required();
    gen->add_option("--dist", gen_args.dist,
                    "weight distribution for complete/regular: u01 | unit | exp | normal");
    gen->add_option("--k", gen_args.k, "degree for the regular family");
    gen->add_option("--p", gen_args.p, "edge probability for the er family");
    gen->add_option("--seed", gen_args.seed, "RNG seed (entropy if omitted, printed to stderr)");
    gen->add_option("--out,-o", gen_args.out, "output path (stdout if omitted)");
    gen->callback([&] { run_gen(gen, gen_args); });

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Solve a graph file, print the solution JSON");
    solve->add_option("graph", solve_args.in, "edge-list file")->required();
    solve->add_option("--solver", solve_args.solver, "adapt-det | adapt-rand | gw | local | sg");
    solve->add_option("--rounds", solve_args.rounds, "hyperplane rounding repetitions (gw)");
    solve->add_flag("--per-start", solve_args.per_start,
                    "include every start node's result (adapt-det)");
    solve->add_option("--seed", solve_args.seed, "RNG seed (entropy if omitted)");
    solve->add_option("--threads", solve_args.threads,
                      "worker threads for adapt-det (0 = CLIFFCUT_THREADS or all cores)");
    solve->add_option("--out,-o", solve_args.out, "write JSON here instead of stdout");
    solve->add_flag("--pretty", solve_args.pretty, "one-line summary instead of JSON");
    solve->callback([&] { run_solve(solve, solve_args); });

    ExactArgs exact_args;
    CLI::App* exact = app.add_subcommand("exact", "Exhaustive maximum cut of a graph file");
    exact->add_option("graph", exact_args.in, "edge-list file")->required();
    exact->add_option("--limit", exact_args.limit, "maximum node count to enumerate");
    exact->add_option("--threads", exact_args.threads, "worker threads (0 = default)");
    exact->add_option("--out,-o", exact_args.out, "write JSON here instead of stdout");
    exact->add_flag("--pretty", exact_args.pretty, "one-line summary instead of JSON");
    exact->callback([&] { run_exact(exact_args); });

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Replay a solution's gate trace on a stabilizer tableau and check the cut");
    verify->add_option("graph", verify_args.graph_in, "edge-list file")->required();
    verify->add_option("solution", verify_args.solution_in, "solution JSON file")->required();
    verify->add_option("--max-n", verify_args.max_n, "size cap for the tableau replay");
    verify->add_flag("--pretty", verify_args.pretty, "one-line summary instead of JSON");
    verify->callback([&] { run_verify(verify_args); });

    BatchArgs batch_args;
    CLI::App* batch = app.add_subcommand("batch", "Run a batch described by a JSON config");
    batch->add_option("--config", batch_args.config_path, "batch config JSON file")->required();
    batch->add_option("--out,-o", batch_args.out, "results CSV path (overrides config out_csv)");
    batch->add_option("--per-start-out", batch_args.per_start_out,
                      "also write per-start ratios CSV (needs per_start in the config)");
    batch->add_option("--threads", batch_args.threads, "worker threads (overrides config)");
    batch->callback([&] { run_batch_cmd(batch, batch_args); });

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit mean energy density against n^{-2/3} from a results CSV");
    fit->add_option("--in", fit_args.in, "results CSV")->required();
    fit->add_option("--model", fit_args.model, "fit model (parisi: density vs n^{-2/3})");
    fit->add_option("--solver", fit_args.solver, "restrict to one solver's rows");
    fit->add_option("--n-lo", fit_args.n_lo, "smallest size included");
    fit->add_option("--n-hi", fit_args.n_hi, "largest size included");
    fit->add_option("--out,-o", fit_args.out, "write JSON here instead of stdout");
    fit->callback([&] { run_fit(fit_args); });

    AlphaArgs alpha_args;
    CLI::App* alpha = app.add_subcommand(
        "alpha-bar", "Estimate the sustained approximation-ratio thresholds from per-start data");
    alpha->add_option("--in", alpha_args.in, "per-start CSV")->required();
    alpha->add_option("--grid-lo", alpha_args.grid_lo, "threshold grid start");
    alpha->add_option("--grid-hi", alpha_args.grid_hi, "threshold grid end");
    alpha->add_option("--grid-step", alpha_args.grid_step, "threshold grid step");
    alpha->add_option("--sweep-out", alpha_args.sweep_out, "write the (alpha_tr, slope) sweep CSV");
    alpha->add_option("--out,-o", alpha_args.out, "write JSON here instead of stdout");
    alpha->callback([&] { run_alpha(alpha_args); });

    TtsArgs tts_args;
    CLI::App* tts = app.add_subcommand("tts", "Time-to-solution scaling benchmark");
    tts->add_option("--family", tts_args.family, "instance family");
    tts->add_option("--sizes", tts_args.sizes, "comma-separated sizes")
        ->required()
        ->delimiter(',');
    tts->add_option("--instances", tts_args.instances, "instances per size");
    tts->add_option("--solver", tts_args.solver, "adapt-rand | adapt-det | gw | local | sg");
    tts->add_option("--rounds", tts_args.rounds, "hyperplane rounding repetitions (gw)");
    tts->add_option("--k", tts_args.K, "degree for regular families");
    tts->add_option("--p", tts_args.p, "edge probability for the er family");
    tts->add_option("--master-seed", tts_args.master_seed, "seed for the instance stream");
    tts->add_option("--min-sample-s", tts_args.min_sample_s,
                    "batch repetitions until a sample is at least this long");
    tts->add_option("--out,-o", tts_args.out, "write JSON here instead of stdout");
    tts->callback([&] { run_tts(tts_args); });

    CnotArgs cnot_args;
    CLI::App* cnot = app.add_subcommand(
        "cnot", "Two-qubit gate count of one full run's circuit");
    cnot->add_option("--n", cnot_args.n, "number of nodes")->required();
    cnot->add_option("--topology", cnot_args.topology, "all-to-all | linear");
    cnot->callback([&] { run_cnot(cnot_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
