#include "cliffcut/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cliffcut/parallel.hpp"
#include "cliffcut/rng.hpp"
#include "cliffcut/version.hpp"

namespace cliffcut {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

double parse_double(const std::string& s, const std::string& context) {
    double v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error(context + ": malformed number \"" + s + "\"");
    }
    return v;
}

struct LineFit {
    double slope;
    double intercept;
    double ss_residual;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    size_t m = x.size();
    if (m < 2) {
        throw std::invalid_argument("least_squares: rank-deficient design, need at least 2 points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = m * sxx - sx * sx;
    if (denom == 0.0) {
        throw std::invalid_argument("least_squares: rank-deficient design, x values coincide");
    }
    LineFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    fit.ss_residual = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double r = y[i] - (fit.slope * x[i] + fit.intercept);
        fit.ss_residual += r * r;
    }
    return fit;
}

double sample_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) {
        return 0.0;
    }
    double m = sample_mean(v);
    double s = 0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

uint64_t instance_seed_for(uint64_t master, const std::string& family, int n, int index) {
    return derive_seed(master, {fnv1a(family), static_cast<uint64_t>(n),
                                static_cast<uint64_t>(index)});
}

namespace {

uint64_t solver_seed_for(uint64_t master, const std::string& family, int n, int index,
                         const std::string& solver) {
    return derive_seed(master, {fnv1a(family), static_cast<uint64_t>(n),
                                static_cast<uint64_t>(index), fnv1a(solver)});
}

}  // namespace

Graph make_instance(const BatchConfig& cfg, int n, int index) {
    uint64_t seed = instance_seed_for(cfg.master_seed, cfg.family, n, index);
    const std::string& f = cfg.family;
    if (f == "complete" || f == "complete-u01") {
        return gen_complete(n, WeightSpec::u01(), seed);
    }
    if (f == "complete-unit") {
        return gen_complete(n, WeightSpec::unit(), seed);
    }
    if (f == "complete-exp") {
        return gen_complete(n, WeightSpec::exponential(1.0), seed);
    }
    if (f == "complete-normal") {
        return gen_complete(n, WeightSpec::normal(0.0, 1.0), seed);
    }
    if (f == "sk") {
        return gen_sk(n, seed);
    }
    if (f == "regular") {
        return gen_regular(n, cfg.K, WeightSpec::unit(), seed);
    }
    if (f == "regular-u01") {
        return gen_regular(n, cfg.K, WeightSpec::u01(), seed);
    }
    if (f == "er") {
        return gen_erdos_renyi(n, cfg.p, seed);
    }
    throw std::invalid_argument("make_instance: unknown family \"" + f + "\"");
}

namespace {

std::string family_param(const BatchConfig& cfg) {
    if (cfg.family.rfind("regular", 0) == 0) {
        return std::to_string(cfg.K);
    }
    if (cfg.family == "er") {
        return format_double(cfg.p);
    }
    return "";
}

std::string result_row_csv(const InstanceResult& r) {
    std::string row = r.family + "," + std::to_string(r.n) + "," + r.k_or_p + "," +
                      std::to_string(r.instance_seed) + "," + r.solver + "," + r.params + "," +
                      format_double(r.cut_value) + "," + format_double(r.ising_energy) + ",";
    if (r.exact_optimum) {
        row += format_double(*r.exact_optimum);
    }
    row += ",";
    if (r.ratio) {
        row += format_double(*r.ratio);
    }
    row += "," + format_double(r.wall_time_s);
    return row;
}

constexpr const char* kResultsHeader =
    "family,n,K_or_p,instance_seed,solver,params,cut_value,ising_energy,exact_optimum,ratio,"
    "wall_time_s";

}  // namespace

std::vector<InstanceResult> run_batch(const BatchConfig& cfg) {
    if (cfg.sizes.empty() || cfg.instances < 1 || cfg.solvers.empty()) {
        throw std::invalid_argument("run_batch: config needs sizes, instances and solvers");
    }
    for (const SolverSpec& s : cfg.solvers) {
        if (s.name != "adapt-det" && s.name != "adapt-rand" && s.name != "gw" &&
            s.name != "local" && s.name != "sg") {
            throw std::invalid_argument("run_batch: unknown solver \"" + s.name + "\"");
        }
    }

    size_t n_tasks = cfg.sizes.size() * static_cast<size_t>(cfg.instances);
    struct TaskSlot {
        std::vector<InstanceResult> rows;
        bool done = false;
    };
    std::vector<TaskSlot> slots(n_tasks);

    std::ofstream csv;
    if (!cfg.out_csv.empty()) {
        csv.open(cfg.out_csv, std::ios::binary);
        if (!csv) {
            throw std::runtime_error(cfg.out_csv + ": cannot open for writing");
        }
        csv << kResultsHeader << "\n";
        csv.flush();
    }
    std::mutex io_mutex;
    size_t cursor = 0;

    parallel_for(static_cast<int>(n_tasks), cfg.threads, [&](int task) {
        int size_idx = task / cfg.instances;
        int index = task % cfg.instances;
        int n = cfg.sizes[static_cast<size_t>(size_idx)];

        std::vector<InstanceResult> rows;
        uint64_t gseed = instance_seed_for(cfg.master_seed, cfg.family, n, index);
        Graph g = make_instance(cfg, n, index);

        std::optional<ExactResult> exact;
        if (cfg.with_exact && n <= cfg.exact_limit) {
            exact = exact_maxcut(g, cfg.exact_limit, 1);
        }

        for (const SolverSpec& spec : cfg.solvers) {
            InstanceResult row;
            row.family = cfg.family;
            row.n = n;
            row.k_or_p = family_param(cfg);
            row.instance_seed = gseed;
            row.solver = spec.name;
            uint64_t sseed = solver_seed_for(cfg.master_seed, cfg.family, n, index, spec.name);
            try {
                Solution sol;
                if (spec.name == "adapt-det") {
                    DeterministicResult det = deterministic(g, TieBreakPolicy::lowest_index(), 1);
                    if (cfg.per_start) {
                        row.per_start = std::move(det.per_start);
                    }
                    sol = std::move(det.best);
                } else if (spec.name == "adapt-rand") {
                    sol = randomized(g, sseed);
                } else if (spec.name == "gw") {
                    GWParams p;
                    p.rounds = spec.rounds;
                    p.seed = sseed;
                    sol = gw_solve(g, p);
                    row.params = "rounds=" + std::to_string(spec.rounds);
                } else if (spec.name == "local") {
                    sol = local_search(g, random_assignment(n, sseed), sseed);
                } else {
                    sol = sahni_gonzalez(g, sseed);
                }
                row.cut_value = sol.cut_value;
                row.ising_energy = sol.ising_energy;
                row.wall_time_s = sol.wall_time_s;
            } catch (const std::exception& e) {
                row.error = e.what();
                row.params += (row.params.empty() ? "" : ";") + std::string("error=") + e.what();
                row.cut_value = std::numeric_limits<double>::quiet_NaN();
                row.ising_energy = std::numeric_limits<double>::quiet_NaN();
            }
            if (exact) {
                row.exact_optimum = exact->optimum_cut;
                row.exact_energy = exact->optimum_energy;
                if (exact->optimum_cut != 0.0) {
                    row.ratio = row.cut_value / exact->optimum_cut;
                }
            }
            rows.push_back(std::move(row));
        }

        std::lock_guard<std::mutex> lock(io_mutex);
        slots[static_cast<size_t>(task)].rows = std::move(rows);
        slots[static_cast<size_t>(task)].done = true;
        while (cursor < n_tasks && slots[cursor].done) {
            if (csv.is_open()) {
                for (const InstanceResult& r : slots[cursor].rows) {
                    csv << result_row_csv(r) << "\n";
                }
                csv.flush();
            }
            ++cursor;
        }
    });

    std::vector<InstanceResult> out;
    out.reserve(n_tasks * cfg.solvers.size());
    for (TaskSlot& slot : slots) {
        for (InstanceResult& r : slot.rows) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

double success_rate(const std::vector<InstanceResult>& results, double tol) {
    if (results.empty()) {
        throw std::invalid_argument("success_rate: no results");
    }
    size_t hits = 0;
    for (const InstanceResult& r : results) {
        if (!r.exact_energy) {
            throw std::invalid_argument("success_rate: result lacks the exact optimum");
        }
        if (std::abs(r.ising_energy - *r.exact_energy) < tol) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(results.size());
}

FitResult fit_density(const std::vector<InstanceResult>& results, int n_lo, int n_hi) {
    std::map<int, std::vector<double>> densities;
    for (const InstanceResult& r : results) {
        if (r.n >= n_lo && r.n <= n_hi && r.error.empty()) {
            densities[r.n].push_back(r.ising_energy / r.n);
        }
    }
    if (densities.size() < 2) {
        throw std::invalid_argument("fit_density: rank-deficient design, need at least 2 sizes");
    }
    std::vector<double> x, y;
    FitResult out;
    for (const auto& [n, d] : densities) {
        x.push_back(std::pow(static_cast<double>(n), -2.0 / 3.0));
        y.push_back(sample_mean(d));
        out.sizes.push_back(n);
    }
    LineFit fit = least_squares(x, y);
    out.q = fit.slope;
    out.limit_value = fit.intercept;
    out.residual = fit.ss_residual;
    out.n_lo = n_lo;
    out.n_hi = n_hi;
    return out;
}

std::vector<PerStartDataset> per_start_datasets(const std::vector<InstanceResult>& results) {
    std::map<int, PerStartDataset> by_n;
    for (const InstanceResult& r : results) {
        if (r.per_start.empty()) {
            continue;
        }
        if (!r.exact_optimum || *r.exact_optimum == 0.0) {
            throw std::invalid_argument(
                "per_start_datasets: per-start ratios need a nonzero exact optimum");
        }
        PerStartDataset& d = by_n[r.n];
        d.n = r.n;
        std::vector<double> ratios;
        ratios.reserve(r.per_start.size());
        for (const PerStartRecord& p : r.per_start) {
            ratios.push_back(p.cut_value / *r.exact_optimum);
        }
        d.ratios_per_instance.push_back(std::move(ratios));
    }
    std::vector<PerStartDataset> out;
    for (auto& [n, d] : by_n) {
        out.push_back(std::move(d));
    }
    return out;
}

ThresholdSweepResult estimate_alpha_bar(const std::vector<PerStartDataset>& data, double grid_lo,
                                        double grid_hi, double grid_step) {
    if (data.size() < 2) {
        throw std::invalid_argument("estimate_alpha_bar: need at least 2 sizes");
    }
    for (const PerStartDataset& d : data) {
        if (d.ratios_per_instance.empty()) {
            throw std::invalid_argument("estimate_alpha_bar: a size has no instances");
        }
    }

    // Sorted copies make Num(n; alpha) a binary search; monotonicity of the
    // counts in alpha is then structural, asserted against the previous grid
    // point anyway.
    std::vector<std::vector<std::vector<double>>> sorted(data.size());
    for (size_t s = 0; s < data.size(); ++s) {
        sorted[s].reserve(data[s].ratios_per_instance.size());
        for (const auto& inst : data[s].ratios_per_instance) {
            std::vector<double> v = inst;
            std::sort(v.begin(), v.end());
            sorted[s].push_back(std::move(v));
        }
    }

    ThresholdSweepResult out;
    std::vector<std::vector<double>> prev_counts(data.size());
    int n_points = static_cast<int>(std::floor((grid_hi - grid_lo) / grid_step + 0.5)) + 1;
    for (int gi = 0; gi < n_points; ++gi) {
        double alpha = grid_lo + gi * grid_step;
        std::vector<double> xs, ys;
        for (size_t s = 0; s < data.size(); ++s) {
            std::vector<double> counts;
            counts.reserve(sorted[s].size());
            for (const auto& inst : sorted[s]) {
                auto it = std::lower_bound(inst.begin(), inst.end(), alpha);
                counts.push_back(static_cast<double>(inst.end() - it));
            }
            if (!prev_counts[s].empty()) {
                for (size_t i = 0; i < counts.size(); ++i) {
                    if (counts[i] > prev_counts[s][i]) {
                        throw std::logic_error(
                            "estimate_alpha_bar: Num increased with the threshold");
                    }
                }
            }
            prev_counts[s] = counts;
            xs.push_back(static_cast<double>(data[s].n));
            ys.push_back(sample_mean(counts) - sample_std(counts));
        }
        LineFit fit = least_squares(xs, ys);
        out.sweep.push_back({alpha, fit.slope});
    }

    auto last_before = [&](double bound, double& value, bool& at_boundary) {
        int found = -1;
        for (size_t i = 0; i < out.sweep.size(); ++i) {
            if (out.sweep[i].slope < bound) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found == -1) {
            value = out.sweep.back().alpha_tr;
            at_boundary = true;
        } else if (found == 0) {
            value = out.sweep.front().alpha_tr;
            at_boundary = true;
        } else {
            value = out.sweep[static_cast<size_t>(found - 1)].alpha_tr;
            at_boundary = false;
        }
    };
    last_before(0.0, out.alpha_bar, out.alpha_bar_at_boundary);
    last_before(0.5, out.alpha_bar_r, out.alpha_bar_r_at_boundary);
    return out;
}

TtsResult tts_benchmark(const TtsConfig& cfg,
                        const std::function<void(const Graph&, uint64_t seed)>& solver_fn) {
    if (cfg.sizes.size() < 3) {
        throw std::invalid_argument("tts_benchmark: need at least 3 sizes");
    }
    int lo = *std::min_element(cfg.sizes.begin(), cfg.sizes.end());
    int hi = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    if (hi < 4 * lo) {
        throw std::invalid_argument("tts_benchmark: sizes must span at least a 4x range");
    }

    BatchConfig gen_cfg;
    gen_cfg.family = cfg.family;
    gen_cfg.master_seed = cfg.master_seed;
    gen_cfg.K = cfg.K;
    gen_cfg.p = cfg.p;

    TtsResult out;
    using clock = std::chrono::steady_clock;
    for (int n : cfg.sizes) {
        std::vector<double> times;
        int max_reps = 1;
        for (int inst = 0; inst < cfg.instances; ++inst) {
            Graph g = make_instance(gen_cfg, n, inst);
            uint64_t seed = solver_seed_for(cfg.master_seed, cfg.family, n, inst, "tts");
            solver_fn(g, seed);  // warm-up, discarded
            auto t0 = clock::now();
            solver_fn(g, seed);
            double once = std::chrono::duration<double>(clock::now() - t0).count();
            int reps = 1;
            if (once < cfg.min_sample_s) {
                reps = static_cast<int>(std::ceil(cfg.min_sample_s / std::max(once, 1e-9)));
                reps = std::min(reps, 100000);
                auto t1 = clock::now();
                for (int r = 0; r < reps; ++r) {
                    solver_fn(g, seed);
                }
                once = std::chrono::duration<double>(clock::now() - t1).count() /
                       static_cast<double>(reps);
                out.timer_warning = true;
            }
            max_reps = std::max(max_reps, reps);
            times.push_back(once);
        }
        out.rows.push_back({n, sample_mean(times), sample_std(times), max_reps});
    }

    std::vector<double> xs, ys;
    for (const TtsRow& row : out.rows) {
        xs.push_back(std::log(static_cast<double>(row.n)));
        ys.push_back(std::log(std::max(row.mean_s, 1e-12)));
    }
    LineFit fit = least_squares(xs, ys);
    out.exponent = fit.slope;
    out.prefactor_log = fit.intercept;
    return out;
}

long long cnot_count(int n, Topology topology) {
    if (n < 2) {
        throw std::invalid_argument("cnot_count: need at least 2 nodes");
    }
    long long nn = n;
    if (topology == Topology::all_to_all) {
        return 2 * nn;
    }
    return 2 + (nn - 2) * (3 * (nn - 3) + 8);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void write_results_csv(const std::vector<InstanceResult>& results, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    f << kResultsHeader << "\n";
    for (const InstanceResult& r : results) {
        f << result_row_csv(r) << "\n";
    }
    if (!f) {
        throw std::runtime_error(path + ": write failed");
    }
}

std::vector<InstanceResult> read_results_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for reading");
    }
    std::string line;
    if (!std::getline(f, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    std::vector<InstanceResult> out;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 11) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 11 fields, got " + std::to_string(fields.size()));
        }
        std::string ctx = path + ":" + std::to_string(line_no);
        InstanceResult r;
        r.family = fields[0];
        r.n = static_cast<int>(parse_double(fields[1], ctx));
        r.k_or_p = fields[2];
        r.instance_seed = std::stoull(fields[3]);
        r.solver = fields[4];
        r.params = fields[5];
        r.cut_value = parse_double(fields[6], ctx);
        r.ising_energy = parse_double(fields[7], ctx);
        if (!fields[8].empty()) {
            r.exact_optimum = parse_double(fields[8], ctx);
        }
        if (!fields[9].empty()) {
            r.ratio = parse_double(fields[9], ctx);
        }
        r.wall_time_s = parse_double(fields[10], ctx);
        out.push_back(std::move(r));
    }
    return out;
}

void write_per_start_csv(const std::vector<InstanceResult>& results, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    f << "family,n,K_or_p,instance_seed,k,cut_value,ising_energy,exact_optimum,ratio\n";
    for (const InstanceResult& r : results) {
        if (r.per_start.empty()) {
            continue;
        }
        for (const PerStartRecord& p : r.per_start) {
            f << r.family << "," << r.n << "," << r.k_or_p << "," << r.instance_seed << ","
              << p.k << "," << format_double(p.cut_value) << "," << format_double(p.ising_energy)
              << ",";
            if (r.exact_optimum) {
                f << format_double(*r.exact_optimum);
            }
            f << ",";
            if (r.exact_optimum && *r.exact_optimum != 0.0) {
                f << format_double(p.cut_value / *r.exact_optimum);
            }
            f << "\n";
        }
    }
    if (!f) {
        throw std::runtime_error(path + ": write failed");
    }
}

std::vector<PerStartDataset> read_per_start_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(path + ": cannot open for reading");
    }
    std::string line;
    if (!std::getline(f, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    // n -> instance_seed -> ratios (per start, in file order)
    std::map<int, std::map<uint64_t, std::vector<double>>> grouped;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 9) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 9 fields, got " + std::to_string(fields.size()));
        }
        std::string ctx = path + ":" + std::to_string(line_no);
        if (fields[8].empty()) {
            throw std::runtime_error(ctx + ": per-start row lacks a ratio");
        }
        int n = static_cast<int>(parse_double(fields[1], ctx));
        uint64_t seed = std::stoull(fields[3]);
        grouped[n][seed].push_back(parse_double(fields[8], ctx));
    }
    std::vector<PerStartDataset> out;
    for (auto& [n, instances] : grouped) {
        PerStartDataset d;
        d.n = n;
        for (auto& [seed, ratios] : instances) {
            d.ratios_per_instance.push_back(std::move(ratios));
        }
        out.push_back(std::move(d));
    }
    return out;
}

void write_sidecar(const std::string& csv_path, const std::string& config_json) {
    nlohmann::json sidecar;
    sidecar["version"] = kVersion;
    sidecar["config"] = nlohmann::json::parse(config_json);
    std::ofstream f(csv_path + ".json", std::ios::binary);
    if (!f) {
        throw std::runtime_error(csv_path + ".json: cannot open for writing");
    }
    f << sidecar.dump(2) << "\n";
}

}  // namespace cliffcut
