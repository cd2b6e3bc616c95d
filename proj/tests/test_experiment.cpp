#include "doctest.h"

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "mg/experiment.hpp"

using namespace mg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mg_experiment_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig smoke_config() {
    ExperimentConfig cfg;
    cfg.data.length = 720; // one month keeps the tests quick
    cfg.episode_length = 720;
    cfg.agent.total_steps = 900;
    cfg.agent.warmup = 100;
    cfg.agent.replay_capacity = 500;
    cfg.agent.target_sync = 100;
    cfg.seeds = {1};
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config defaults round-trip through json") {
    ExperimentConfig cfg;
    ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.battery_capacity_kwh == 30.0);
    CHECK(back.weights.alpha == 0.3);
    CHECK(back.weights.beta == 0.3);
    CHECK(back.data.customer_count == 10);
    CHECK(back.data.prosumer_fraction == 0.5);
    CHECK(back.agent.total_steps == 100000);
    CHECK(back.grid.retail == std::vector<double>{0.2, 0.4, 0.6, 0.8, 1.0});
}

TEST_CASE("config loading") {
    TempDir tmp;

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_config((tmp.path / "none.json").string(), {}),
                        std::invalid_argument);
    }
    SUBCASE("unknown keys are named") {
        fs::path p = tmp.path / "bad.json";
        std::ofstream(p) << R"({"weights": {"alpa": 0.2}})";
        CHECK_THROWS_WITH_AS(load_config(p.string(), {}),
                             doctest::Contains("alpa"), std::invalid_argument);
    }
    SUBCASE("partial file merges over defaults") {
        fs::path p = tmp.path / "partial.json";
        std::ofstream(p) << R"({"weights": {"alpha": 0.1}, "agent": {"total_steps": 5000}})";
        ExperimentConfig cfg = load_config(p.string(), {});
        CHECK(cfg.weights.alpha == 0.1);
        CHECK(cfg.weights.beta == 0.3);
        CHECK(cfg.agent.total_steps == 5000);
        CHECK(cfg.battery_capacity_kwh == 30.0);
    }
    SUBCASE("set overrides") {
        ExperimentConfig cfg = load_config(
            "", {"agent.total_steps=1234", "battery.capacity_kwh=20",
                 "data.source=synthetic", "agent.epsilon.end=0.1"});
        CHECK(cfg.agent.total_steps == 1234);
        CHECK(cfg.battery_capacity_kwh == 20.0);
        CHECK(cfg.agent.epsilon.end == 0.1);
        CHECK(cfg.make_battery_config().charge_cap_kwh == doctest::Approx(1.0));
    }
    SUBCASE("set with an unknown key is rejected") {
        CHECK_THROWS_WITH_AS(load_config("", {"agent.total_stepz=5"}),
                             doctest::Contains("total_stepz"),
                             std::invalid_argument);
    }
    SUBCASE("invalid combinations are rejected after merge") {
        CHECK_THROWS_AS(load_config("", {"weights.alpha=0.8", "weights.beta=0.8"}),
                        std::invalid_argument);
        CHECK_THROWS_AS(load_config("", {"provider.sigma=0.5"}),
                        std::invalid_argument);
    }
}

TEST_CASE("a short training run writes consistent artifacts") {
    TempDir tmp;
    ExperimentConfig cfg = smoke_config();
    std::string dir = (tmp.path / "run").string();

    RunSummary s = run_train(cfg, 1, dir);

    CHECK(fs::exists(fs::path(dir) / "steps.csv"));
    CHECK(fs::exists(fs::path(dir) / "reward_curve.csv"));
    CHECK(fs::exists(fs::path(dir) / "loss_curve.csv"));
    CHECK(fs::exists(fs::path(dir) / "episodes.csv"));
    CHECK(fs::exists(fs::path(dir) / "trajectory.csv"));
    CHECK(fs::exists(fs::path(dir) / "qnet.bin"));
    CHECK(fs::exists(fs::path(dir) / "summary.json"));

    // Reporting-layer consistency: the weighted profits
    // reassemble the mean operation cost.
    double lhs = (1.0 - cfg.weights.alpha - cfg.weights.beta) * (-s.avg_sp_profit) +
                 cfg.weights.alpha * s.consumer_count * (-s.avg_consumer_profit) +
                 cfg.weights.beta * s.prosumer_count * (-s.avg_prosumer_profit);
    CHECK(lhs == doctest::Approx(s.mean_operation_cost).epsilon(1e-9));

    CHECK(s.consumer_count == 5);
    CHECK(s.prosumer_count == 5);
    CHECK(s.final_epsilon == doctest::Approx(0.05));

    SUBCASE("the checkpoint reloads and scores the trajectory deterministically") {
        auto [net_cfg, params] = load_checkpoint((fs::path(dir) / "qnet.bin").string());
        CHECK(net_cfg.output == 25);
        std::string before = slurp(fs::path(dir) / "trajectory.csv");
        write_trajectory(dir, cfg, params);
        CHECK(slurp(fs::path(dir) / "trajectory.csv") == before);
    }

    SUBCASE("rerunning the same seed reproduces every artifact byte") {
        std::string steps = slurp(fs::path(dir) / "steps.csv");
        std::string ckpt = slurp(fs::path(dir) / "qnet.bin");
        std::string summary = slurp(fs::path(dir) / "summary.json");
        run_train(cfg, 1, dir);
        CHECK(slurp(fs::path(dir) / "steps.csv") == steps);
        CHECK(slurp(fs::path(dir) / "qnet.bin") == ckpt);
        CHECK(slurp(fs::path(dir) / "summary.json") == summary);
    }
}

TEST_CASE("sweeps validate inputs before running") {
    ExperimentConfig cfg = smoke_config();
    CHECK_THROWS_AS(run_sweep_weights(cfg, {{0.7, 0.7}}, {1}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_sweep_battery(cfg, {-5.0}, {1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep_ratio(cfg, {1.5}, {1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep_weights(cfg, {{0.2, 0.2}}, {}, 1),
                    std::invalid_argument);
}

TEST_CASE("a tiny weight sweep emits one row per pair with correct weights") {
    TempDir tmp;
    ExperimentConfig cfg = smoke_config();
    cfg.agent.total_steps = 300;

    auto rows = run_sweep_weights(cfg, {{0.2, 0.2}, {0.6, 0.2}}, {1, 2}, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].alpha == 0.2);
    CHECK(rows[0].sp_weight == doctest::Approx(0.6));
    CHECK(rows[1].alpha == 0.6);

    write_weight_sweep(tmp.path.string(), rows);
    std::string csv = slurp(tmp.path / "sweep_weights.csv");
    CHECK(csv.find("alpha,beta,sp_weight,avg_consumer_profit_per_member") == 0);

    SUBCASE("cell order does not depend on scheduling") {
        auto rows_serial = run_sweep_weights(cfg, {{0.2, 0.2}, {0.6, 0.2}}, {1, 2}, 1);
        REQUIRE(rows_serial.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows_serial[i].avg_consumer_profit == rows[i].avg_consumer_profit);
            CHECK(rows_serial[i].avg_sp_profit == rows[i].avg_sp_profit);
        }
    }
}

TEST_CASE("ratio sweep resolves the prosumer split") {
    ExperimentConfig cfg = smoke_config();
    cfg.agent.total_steps = 200;
    auto rows = run_sweep_ratio(cfg, {0.5}, {1}, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].consumer_fraction == 0.5);
    // Consumer fraction 0.5 on ten customers means five prosumers.
    ExperimentConfig cell = cfg;
    cell.data.prosumer_fraction = 0.5;
    RunSummary s = run_train_cell(cell, 1).summary;
    CHECK(s.prosumer_count == 5);
}
