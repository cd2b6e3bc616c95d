#pragma once
// Experiment harness: a fully-serializable configuration whose defaults
// reproduce the baseline study (alpha = beta = 0.3, 30 kWh battery, ten
// customers split evenly), single training runs with on-disk artifacts,
// and the three sweeps (cost weights, battery capacity, consumer ratio).
// Sweep cells are independent and may run concurrently; tables are always
// assembled in cell order so outputs are a pure function of config and
// seeds.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mg/dqn.hpp"
#include "mg/env.hpp"
#include "mg/profiles.hpp"

namespace mg {

struct SweepConfig {
    // (alpha, beta) rows for the weight sweep.
    std::vector<std::pair<double, double>> weights{
        {0.2, 0.6}, {0.2, 0.2}, {0.6, 0.2}, {0.3, 0.3}, {0.3, 0.5},
        {0.5, 0.3}, {0.5, 0.2}, {0.4, 0.4}, {0.1, 0.7}, {0.7, 0.1}};
    std::vector<double> battery_capacities_kwh{10, 20, 30, 40, 50};
    // The battery sweep puts the highest focus on the provider.
    double battery_alpha = 0.2;
    double battery_beta = 0.2;
    std::vector<double> consumer_fractions{0.3, 0.5, 0.7, 0.9};
};

struct ExperimentConfig {
    std::string run_id = "run";
    std::string out_dir = "out";
    std::vector<std::uint64_t> seeds{1, 2, 3};

    DatasetConfig data;
    double battery_capacity_kwh = 30.0;
    double battery_efficiency = 0.9;
    double battery_soc_min = 0.1;
    double battery_soc_max = 0.9;
    double battery_soc_init = 0.5;
    double battery_power_cap_fraction = 0.05;
    double tariff_discharge = 0.3;
    double tariff_charge = 0.6;
    ProviderConfig provider;
    WeightConfig weights;
    ActionGrid grid;
    int episode_length = 8760;
    double demand_scale = 0.0;
    AgentConfig agent;
    SweepConfig sweep;

    BatteryConfig make_battery_config() const;
    EnvConfig make_env_config() const;
    void validate() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

// Loads the config file (or the defaults when path is empty), applies
// key=value overrides, and rejects unknown keys by name.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);

struct RunSummary {
    std::uint64_t seed = 0;
    double total_last_year_reward = 0.0;
    double avg_reward = 0.0;
    double avg_consumer_profit = 0.0; // per member per step, negative mean cost
    double avg_prosumer_profit = 0.0;
    double avg_sp_profit = 0.0;
    double mean_operation_cost = 0.0;
    double final_epsilon = 0.0;
    double wall_seconds = 0.0; // reported on the console, never serialized
    int consumer_count = 0;
    int prosumer_count = 0;
};

RunSummary summarize_run(const ExperimentConfig& cfg, std::uint64_t seed,
                         const TrainStats& stats);

struct RunOutput {
    RunSummary summary;
    TrainResult result;
};

// One training cell, no artifacts.
RunOutput run_train_cell(const ExperimentConfig& cfg, std::uint64_t seed);

// Trains one seed and writes steps/episodes/curve tables, the greedy-
// rollout trajectory, the checkpoint, and summary.json under out_dir.
RunSummary run_train(const ExperimentConfig& cfg, std::uint64_t seed,
                     const std::string& out_dir);

struct WeightSweepRow {
    double alpha = 0.0, beta = 0.0, sp_weight = 0.0;
    double avg_consumer_profit = 0.0;
    double avg_prosumer_profit = 0.0;
    double avg_sp_profit = 0.0;
};

struct BatterySweepRow {
    double capacity_kwh = 0.0;
    double total_last_year_reward = 0.0;
};

struct RatioSweepRow {
    double consumer_fraction = 0.0;
    double avg_reward = 0.0;
};

// Seed-averaged sweep tables. jobs <= 0 uses the hardware thread count.
std::vector<WeightSweepRow> run_sweep_weights(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<double, double>>& weight_rows,
    const std::vector<std::uint64_t>& seeds, int jobs = 0);

std::vector<BatterySweepRow> run_sweep_battery(
    const ExperimentConfig& cfg, const std::vector<double>& capacities,
    const std::vector<std::uint64_t>& seeds, int jobs = 0);

std::vector<RatioSweepRow> run_sweep_ratio(
    const ExperimentConfig& cfg, const std::vector<double>& fractions,
    const std::vector<std::uint64_t>& seeds, int jobs = 0);

// Report writers. All output is deterministic: no timestamps, shortest
// round-trip number formatting, rows in cell order.
void write_step_tables(const std::string& dir, const TrainStats& stats);
void write_trajectory(const std::string& dir, const ExperimentConfig& cfg,
                      const NetParams& params);
void write_run_summary_json(const std::string& dir, const ExperimentConfig& cfg,
                            const std::vector<RunSummary>& summaries);
void write_weight_sweep(const std::string& dir,
                        const std::vector<WeightSweepRow>& rows);
void write_battery_sweep(const std::string& dir,
                         const std::vector<BatterySweepRow>& rows);
void write_ratio_sweep(const std::string& dir,
                       const std::vector<RatioSweepRow>& rows);

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

} // namespace mg
