#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cliffcut/adapt.hpp"
#include "cliffcut/baselines.hpp"
#include "cliffcut/graph.hpp"
#include "cliffcut/solution.hpp"

namespace cliffcut {

// One (instance, solver) outcome. exact_* are present when the exact oracle
// ran; ratio is cut_value / exact cut optimum (empty when the optimum is 0).
struct InstanceResult {
    std::string family;
    int n = 0;
    std::string k_or_p;  // degree K or edge probability p, empty when n/a
    uint64_t instance_seed = 0;
    std::string solver;
    std::string params;
    double cut_value = 0.0;
    double ising_energy = 0.0;
    std::optional<double> exact_optimum;  // cut form
    std::optional<double> exact_energy;   // energy form, not serialized
    std::optional<double> ratio;
    double wall_time_s = 0.0;
    std::vector<PerStartRecord> per_start;  // deterministic solver only
    std::string error;                      // nonempty if the solver failed
};

struct SolverSpec {
    std::string name;  // adapt-det | adapt-rand | gw | local | sg
    int rounds = 1;    // gw only
};

struct BatchConfig {
    std::string family = "complete-u01";  // complete-u01|complete-unit|complete-exp|
                                          // complete-normal|sk|regular|regular-u01|er
    std::vector<int> sizes;
    int instances = 100;
    std::vector<SolverSpec> solvers;
    uint64_t master_seed = 1;
    bool with_exact = false;
    int exact_limit = 26;
    bool per_start = false;  // keep per-start records for adapt-det
    int K = 3;               // regular families
    double p = 0.5;          // er family
    int threads = 0;
    std::string out_csv;  // when set, rows are appended as they complete
};

// Deterministic instance stream: seed = derive_seed(master, family, n, index).
uint64_t instance_seed_for(uint64_t master, const std::string& family, int n, int index);
Graph make_instance(const BatchConfig& cfg, int n, int index);

// Runs every (size, instance, solver) cell; rows come back (and are written)
// in canonical order: size, instance, then solver order of the config.
std::vector<InstanceResult> run_batch(const BatchConfig& cfg);

// Fraction of results whose solver energy matches the exact optimum energy
// within tol. Every result must carry the exact oracle's values.
double success_rate(const std::vector<InstanceResult>& results, double tol = 1e-10);

struct FitResult {
    double q = 0.0;            // slope of the n^{-2/3} term
    double limit_value = 0.0;  // extrapolated density at n -> infinity
    double residual = 0.0;     // sum of squared residuals of the fit
    int n_lo = 0;
    int n_hi = 0;
    std::vector<int> sizes;
};

// Ordinary least squares of mean energy density (per-instance ising_energy/n
// averaged within each size) against n^{-2/3}.
FitResult fit_density(const std::vector<InstanceResult>& results, int n_lo, int n_hi);

// Per-instance approximation ratios of every start node, grouped by size.
struct PerStartDataset {
    int n = 0;
    std::vector<std::vector<double>> ratios_per_instance;
};

struct ThresholdSweepEntry {
    double alpha_tr = 0.0;
    double slope = 0.0;  // fitted slope of E[Num] - sigma[Num] vs n
};

struct ThresholdSweepResult {
    std::vector<ThresholdSweepEntry> sweep;
    double alpha_bar = 0.0;    // last threshold before the slope turns negative
    double alpha_bar_r = 0.0;  // last threshold with slope >= 0.5
    bool alpha_bar_at_boundary = false;
    bool alpha_bar_r_at_boundary = false;
};

// Threshold sweep over alpha_tr: Num(n; alpha_tr) counts the start nodes
// whose ratio reaches the threshold; the slope of E[Num] - sigma[Num]
// against n decides how many starts keep up as n grows.
ThresholdSweepResult estimate_alpha_bar(const std::vector<PerStartDataset>& data,
                                        double grid_lo = 0.88, double grid_hi = 1.0,
                                        double grid_step = 0.0005);

// Builds the per-start datasets from deterministic batch results (requires
// per_start records and exact optima).
std::vector<PerStartDataset> per_start_datasets(const std::vector<InstanceResult>& results);

struct TtsRow {
    int n = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
    int repetitions = 1;  // > 1 when individual runs were below timer resolution
};

struct TtsResult {
    std::vector<TtsRow> rows;
    double exponent = 0.0;
    double prefactor_log = 0.0;
    bool timer_warning = false;  // repetition batching kicked in
};

struct TtsConfig {
    std::string family = "complete-u01";
    std::vector<int> sizes;
    int instances = 10;
    uint64_t master_seed = 1;
    int K = 3;
    double p = 0.5;
    double min_sample_s = 0.005;  // batch repetitions until a sample is this long
};

// Times solver_fn per instance (generation excluded, one warm-up discarded)
// and fits log(mean time) against log(n). Runs sequentially: timing results
// would be polluted by concurrent load.
TtsResult tts_benchmark(const TtsConfig& cfg,
                        const std::function<void(const Graph&, uint64_t seed)>& solver_fn);

enum class Topology { all_to_all, linear };

// Two-qubit gate budget of one full run's circuit on the given connectivity.
long long cnot_count(int n, Topology topology);

// CSV persistence (schema in the README); doubles round-trip exactly.
void write_results_csv(const std::vector<InstanceResult>& results, const std::string& path);
std::vector<InstanceResult> read_results_csv(const std::string& path);
void write_per_start_csv(const std::vector<InstanceResult>& results, const std::string& path);
std::vector<PerStartDataset> read_per_start_csv(const std::string& path);
// JSON sidecar (config + version) written next to a results CSV.
void write_sidecar(const std::string& csv_path, const std::string& config_json);

}  // namespace cliffcut
