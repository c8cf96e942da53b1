#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cliffcut/experiments.hpp"
#include "cliffcut/version.hpp"
#include "helpers.hpp"

using namespace cliffcut;
namespace ct = cliffcut::testing;

namespace {

BatchConfig small_batch() {
    BatchConfig cfg;
    cfg.family = "complete-u01";
    cfg.sizes = {6, 8};
    cfg.instances = 3;
    cfg.solvers = {{"adapt-det", 1}, {"adapt-rand", 1}, {"gw", 4}, {"local", 1}, {"sg", 1}};
    cfg.master_seed = 2024;
    cfg.with_exact = true;
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST_CASE("instance seeds are distinct across family, size, and index") {
    std::map<uint64_t, int> seen;
    for (const char* family : {"complete-u01", "sk", "er"}) {
        for (int n : {10, 20}) {
            for (int index = 0; index < 50; ++index) {
                ++seen[instance_seed_for(7, family, n, index)];
            }
        }
    }
    CHECK(seen.size() == 300);
    CHECK(instance_seed_for(7, "sk", 10, 0) == instance_seed_for(7, "sk", 10, 0));
    CHECK(instance_seed_for(7, "sk", 10, 0) != instance_seed_for(8, "sk", 10, 0));
}

TEST_CASE("make_instance dispatches every family") {
    BatchConfig cfg;
    cfg.K = 4;
    cfg.p = 0.3;
    auto edges_of = [&](const std::string& family, int n) {
        cfg.family = family;
        return make_instance(cfg, n, 0).edges().size();
    };
    CHECK(edges_of("complete-u01", 10) == 45);
    CHECK(edges_of("complete-unit", 10) == 45);
    CHECK(edges_of("complete-exp", 10) == 45);
    CHECK(edges_of("complete-normal", 10) == 45);
    CHECK(edges_of("sk", 10) == 45);
    CHECK(edges_of("regular", 10) == 20);      // nK/2
    CHECK(edges_of("regular-u01", 10) == 20);
    size_t er_edges = edges_of("er", 30);
    CHECK(er_edges > 60);   // E = 130.5, generous band
    CHECK(er_edges < 220);
    cfg.family = "no-such-family";
    CHECK_THROWS_AS(make_instance(cfg, 10, 0), std::invalid_argument);
}

TEST_CASE("run_batch is deterministic and fills exact fields") {
    BatchConfig cfg = small_batch();
    std::vector<InstanceResult> a = run_batch(cfg);
    std::vector<InstanceResult> b = run_batch(cfg);
    REQUIRE(a.size() == 2 * 3 * 5);
    REQUIRE(b.size() == a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].family == b[i].family);
        CHECK(a[i].n == b[i].n);
        CHECK(a[i].instance_seed == b[i].instance_seed);
        CHECK(a[i].solver == b[i].solver);
        CHECK(a[i].params == b[i].params);
        CHECK(a[i].cut_value == b[i].cut_value);  // bit-identical, not approx
        CHECK(a[i].ising_energy == b[i].ising_energy);
        CHECK(a[i].error.empty());
        REQUIRE(a[i].exact_optimum.has_value());
        REQUIRE(a[i].ratio.has_value());
        CHECK(*a[i].ratio == doctest::Approx(a[i].cut_value / *a[i].exact_optimum));
        CHECK(*a[i].ratio <= 1.0 + 1e-12);
    }
    // canonical order: size, then instance, then solver order of the config
    CHECK(a[0].n == 6);
    CHECK(a[0].solver == "adapt-det");
    CHECK(a[1].solver == "adapt-rand");
    CHECK(a[2].solver == "gw");
    CHECK(a[2].params == "rounds=4");
    CHECK(a[5].instance_seed != a[0].instance_seed);
    CHECK(a[15].n == 8);
}

TEST_CASE("run_batch streams rows to CSV in canonical order") {
    BatchConfig cfg = small_batch();
    cfg.out_csv = ct::tmp_file("batch.csv");
    std::vector<InstanceResult> rows = run_batch(cfg);
    std::vector<InstanceResult> readback = read_results_csv(cfg.out_csv);
    REQUIRE(readback.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(readback[i].family == rows[i].family);
        CHECK(readback[i].n == rows[i].n);
        CHECK(readback[i].instance_seed == rows[i].instance_seed);
        CHECK(readback[i].solver == rows[i].solver);
        // exact round-trip, including doubles
        CHECK(readback[i].cut_value == rows[i].cut_value);
        CHECK(readback[i].ising_energy == rows[i].ising_energy);
        REQUIRE(readback[i].exact_optimum.has_value());
        CHECK(*readback[i].exact_optimum == *rows[i].exact_optimum);
        CHECK(*readback[i].ratio == *rows[i].ratio);
    }
    std::remove(cfg.out_csv.c_str());
}

TEST_CASE("results CSV round-trips exactly") {
    std::vector<InstanceResult> rows(2);
    rows[0].family = "sk";
    rows[0].n = 12;
    rows[0].instance_seed = 0xdeadbeefcafef00dULL;
    rows[0].solver = "adapt-det";
    rows[0].cut_value = 1.0 / 3.0;
    rows[0].ising_energy = -0.1234567890123456789;
    rows[0].exact_optimum = 2.0 / 7.0;
    rows[0].ratio = (1.0 / 3.0) / (2.0 / 7.0);
    rows[0].wall_time_s = 0.001;
    rows[1].family = "er";
    rows[1].n = 5;
    rows[1].k_or_p = "0.5";
    rows[1].solver = "gw";
    rows[1].params = "rounds=100";
    rows[1].cut_value = 4.0;
    rows[1].ising_energy = 0.5;

    std::string path = ct::tmp_file("roundtrip.csv");
    write_results_csv(rows, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "family,n,K_or_p,instance_seed,solver,params,cut_value,ising_energy,"
          "exact_optimum,ratio,wall_time_s");

    std::vector<InstanceResult> back = read_results_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].cut_value == rows[0].cut_value);
    CHECK(back[0].ising_energy == rows[0].ising_energy);
    CHECK(back[0].instance_seed == rows[0].instance_seed);
    CHECK(*back[0].exact_optimum == *rows[0].exact_optimum);
    CHECK(*back[0].ratio == *rows[0].ratio);
    CHECK(back[0].wall_time_s == rows[0].wall_time_s);
    CHECK(back[1].k_or_p == "0.5");
    CHECK(back[1].params == "rounds=100");
    CHECK(!back[1].exact_optimum.has_value());
    CHECK(!back[1].ratio.has_value());
    std::remove(path.c_str());
}

TEST_CASE("read_results_csv reports the offending line") {
    std::string path = ct::tmp_file("bad.csv");
    {
        std::ofstream out(path);
        out << "family,n,K_or_p,instance_seed,solver,params,cut_value,ising_energy,"
               "exact_optimum,ratio,wall_time_s\n";
        out << "sk,12,,1,adapt-det,,1.0,-0.5,,,0.1\n";
        out << "sk,12,,1,adapt-det,,not-a-number,-0.5,,,0.1\n";
    }
    CHECK_THROWS_WITH_AS(read_results_csv(path), doctest::Contains(":3: malformed"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("per-start CSV round-trips into grouped datasets") {
    BatchConfig cfg;
    cfg.family = "complete-u01";
    cfg.sizes = {5, 7};
    cfg.instances = 2;
    cfg.solvers = {{"adapt-det", 1}};
    cfg.master_seed = 31;
    cfg.with_exact = true;
    cfg.per_start = true;
    std::vector<InstanceResult> rows = run_batch(cfg);
    REQUIRE(rows.size() == 4);
    for (const InstanceResult& r : rows) {
        CHECK(r.per_start.size() == static_cast<size_t>(r.n));
    }

    std::string path = ct::tmp_file("perstart.csv");
    write_per_start_csv(rows, path);
    std::vector<PerStartDataset> grouped = read_per_start_csv(path);
    REQUIRE(grouped.size() == 2);
    CHECK(grouped[0].n == 5);
    CHECK(grouped[1].n == 7);
    REQUIRE(grouped[0].ratios_per_instance.size() == 2);
    CHECK(grouped[0].ratios_per_instance[0].size() == 5);
    CHECK(grouped[1].ratios_per_instance[1].size() == 7);

    std::vector<PerStartDataset> direct = per_start_datasets(rows);
    REQUIRE(direct.size() == 2);
    for (size_t s = 0; s < 2; ++s) {
        REQUIRE(direct[s].ratios_per_instance.size() == grouped[s].ratios_per_instance.size());
        for (size_t i = 0; i < direct[s].ratios_per_instance.size(); ++i) {
            for (size_t k = 0; k < direct[s].ratios_per_instance[i].size(); ++k) {
                CHECK(direct[s].ratios_per_instance[i][k] ==
                      grouped[s].ratios_per_instance[i][k]);
            }
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("success_rate counts exact matches and validates inputs") {
    BatchConfig cfg;
    cfg.family = "complete-unit";
    cfg.sizes = {6};
    cfg.instances = 4;
    cfg.solvers = {{"adapt-det", 1}};
    cfg.with_exact = true;
    std::vector<InstanceResult> rows = run_batch(cfg);
    CHECK(success_rate(rows) == doctest::Approx(1.0));  // unit complete graphs are easy

    std::vector<InstanceResult> manual(2);
    manual[0].ising_energy = -1.0;
    manual[0].exact_energy = -1.0;
    manual[1].ising_energy = -0.9;
    manual[1].exact_energy = -1.0;
    CHECK(success_rate(manual) == doctest::Approx(0.5));

    manual[1].exact_energy.reset();
    CHECK_THROWS_AS(success_rate(manual), std::invalid_argument);
    CHECK_THROWS_AS(success_rate({}), std::invalid_argument);
}

TEST_CASE("fit_density recovers a planted n^{-2/3} law") {
    // rows with mean density exactly pi + q * n^{-2/3}
    const double planted_limit = -0.74;
    const double planted_q = 1.3;
    std::vector<InstanceResult> rows;
    for (int n : {40, 60, 100, 140, 200}) {
        for (int i = 0; i < 3; ++i) {
            InstanceResult r;
            r.family = "sk";
            r.n = n;
            r.solver = "adapt-det";
            r.ising_energy = n * (planted_limit + planted_q * std::pow(n, -2.0 / 3.0));
            rows.push_back(r);
        }
    }
    FitResult fit = fit_density(rows, 40, 200);
    CHECK(fit.limit_value == doctest::Approx(planted_limit).epsilon(1e-9));
    CHECK(fit.q == doctest::Approx(planted_q).epsilon(1e-9));
    CHECK(fit.residual == doctest::Approx(0.0));
    CHECK(fit.n_lo == 40);
    CHECK(fit.n_hi == 200);
    CHECK(fit.sizes == std::vector<int>{40, 60, 100, 140, 200});

    // range filter drops sizes outside [n_lo, n_hi]
    FitResult partial = fit_density(rows, 60, 140);
    CHECK(partial.sizes == std::vector<int>{60, 100, 140});

    // single size: the design matrix is rank-deficient
    CHECK_THROWS_AS(fit_density(rows, 100, 100), std::invalid_argument);
}

TEST_CASE("estimate_alpha_bar on an all-optimal dataset sits at the grid top") {
    std::vector<PerStartDataset> data;
    for (int n : {8, 12, 16}) {
        PerStartDataset d;
        d.n = n;
        for (int i = 0; i < 5; ++i) {
            d.ratios_per_instance.push_back(std::vector<double>(n, 1.0));
        }
        data.push_back(d);
    }
    ThresholdSweepResult res = estimate_alpha_bar(data);
    CHECK(res.alpha_bar == doctest::Approx(1.0));
    CHECK(res.alpha_bar_r == doctest::Approx(1.0));
    CHECK(res.alpha_bar_at_boundary);
    CHECK(res.alpha_bar_r_at_boundary);
    CHECK(!res.sweep.empty());
    // every start reaches every threshold, so Num == n and slope == 1
    for (const ThresholdSweepEntry& e : res.sweep) {
        CHECK(e.slope == doctest::Approx(1.0));
    }
}

TEST_CASE("estimate_alpha_bar separates thresholds on a synthetic spectrum") {
    // Each instance has a fraction of starts at ratio 1.0 and the rest at
    // 0.9; the fraction of good starts shrinks with n so high thresholds get
    // a negative slope and low thresholds keep slope ~ proportional to n.
    std::vector<PerStartDataset> data;
    for (int n : {10, 20, 40}) {
        PerStartDataset d;
        d.n = n;
        int good = 40 / n * 2;  // 8, 4, 2: shrinking absolute count
        for (int i = 0; i < 6; ++i) {
            std::vector<double> ratios(n, 0.9);
            for (int g = 0; g < good; ++g) {
                ratios[g] = 1.0;
            }
            d.ratios_per_instance.push_back(ratios);
        }
        data.push_back(d);
    }
    ThresholdSweepResult res = estimate_alpha_bar(data, 0.88, 1.0, 0.005);
    // thresholds at or below 0.9 are reached by every start: slope 1
    // thresholds above 0.9 only by the shrinking good set: negative slope
    CHECK(res.alpha_bar == doctest::Approx(0.9));
    CHECK(res.alpha_bar_r == doctest::Approx(0.9));
    CHECK(!res.alpha_bar_at_boundary);
    CHECK(!res.alpha_bar_r_at_boundary);
}

TEST_CASE("tts_benchmark recovers a planted scaling exponent") {
    TtsConfig cfg;
    cfg.sizes = {8, 16, 32};
    cfg.instances = 2;
    cfg.min_sample_s = 0.0;  // no batching: the sleep is well above resolution
    const double unit_s = 40e-6;
    TtsResult res = tts_benchmark(cfg, [&](const Graph& g, uint64_t) {
        auto until = std::chrono::steady_clock::now() +
                     std::chrono::duration<double>(unit_s * g.num_nodes() * g.num_nodes());
        while (std::chrono::steady_clock::now() < until) {
        }
    });
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[0].n == 8);
    CHECK(res.rows[2].n == 32);
    CHECK(res.exponent == doctest::Approx(2.0).epsilon(0.1));
    CHECK(!res.timer_warning);
    for (const TtsRow& row : res.rows) {
        CHECK(row.mean_s > 0.0);
        CHECK(row.repetitions == 1);
    }
}

TEST_CASE("tts_benchmark batches repetitions under the timer floor") {
    TtsConfig cfg;
    cfg.sizes = {4, 8, 16};
    cfg.instances = 2;
    cfg.min_sample_s = 0.002;
    TtsResult res = tts_benchmark(cfg, [](const Graph&, uint64_t) {});
    CHECK(res.timer_warning);
    bool batched = false;
    for (const TtsRow& row : res.rows) {
        batched = batched || row.repetitions > 1;
    }
    CHECK(batched);
}

TEST_CASE("tts_benchmark validates its configuration") {
    TtsConfig cfg;
    cfg.sizes = {8};
    CHECK_THROWS_AS(tts_benchmark(cfg, [](const Graph&, uint64_t) {}), std::invalid_argument);
}

TEST_CASE("cnot_count matches the worked circuit budgets") {
    CHECK(cnot_count(5, Topology::all_to_all) == 10);
    CHECK(cnot_count(5, Topology::linear) == 44);
    CHECK(cnot_count(2, Topology::all_to_all) == 4);
    CHECK(cnot_count(2, Topology::linear) == 2);
    CHECK(cnot_count(100, Topology::all_to_all) == 200);
    CHECK_THROWS_AS(cnot_count(1, Topology::all_to_all), std::invalid_argument);
}

TEST_CASE("write_sidecar stores version and config next to the CSV") {
    std::string csv = ct::tmp_file("side.csv");
    write_sidecar(csv, R"({"sizes":[4,6],"family":"sk"})");
    std::ifstream in(csv + ".json");
    REQUIRE(in.good());
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("version").get<std::string>() == std::string(kVersion));
    CHECK(j.at("config").at("family") == "sk");
    CHECK(j.at("config").at("sizes")[1] == 6);
    std::remove((csv + ".json").c_str());
}
