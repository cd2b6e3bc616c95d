// pricelab: train a pricing agent on the microgrid simulator and run the
// weight / battery-capacity / consumer-ratio sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mg/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string data;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> sets;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--data", args.data, "Profile CSV path, or 'synthetic'");
    cmd->add_option("--seed", args.seeds, "Seed list")->delimiter(',');
    cmd->add_option("--set", args.sets, "Override config keys, e.g. agent.total_steps=5000");
    cmd->add_option("--jobs", args.jobs, "Concurrent sweep cells (default: hardware)");
}

mg::ExperimentConfig resolve(const CommonArgs& args) {
    mg::ExperimentConfig cfg = mg::load_config(args.config_path, args.sets);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (!args.data.empty()) cfg.data.source = args.data;
    if (!args.seeds.empty()) cfg.seeds = args.seeds;
    cfg.validate();
    return cfg;
}

void print_summary(const mg::RunSummary& s) {
    std::printf("seed %llu: avg reward %.6g, last-year reward %.6g, "
                "C profit %.6g, P profit %.6g, SP profit %.6g (%.1fs)\n",
                static_cast<unsigned long long>(s.seed), s.avg_reward,
                s.total_last_year_reward, s.avg_consumer_profit,
                s.avg_prosumer_profit, s.avg_sp_profit, s.wall_seconds);
}

int cmd_train(const CommonArgs& args) {
    mg::ExperimentConfig cfg = resolve(args);
    std::vector<mg::RunSummary> summaries;
    for (std::uint64_t seed : cfg.seeds) {
        std::string dir =
            (fs::path(cfg.out_dir) / ("seed_" + std::to_string(seed))).string();
        mg::RunSummary s = mg::run_train(cfg, seed, dir);
        print_summary(s);
        summaries.push_back(s);
    }
    mg::write_run_summary_json(cfg.out_dir, cfg, summaries);
    std::printf("wrote %s\n", (fs::path(cfg.out_dir) / "summary.json").string().c_str());
    return 0;
}

int cmd_sweep_weights(const CommonArgs& args) {
    mg::ExperimentConfig cfg = resolve(args);
    auto rows = mg::run_sweep_weights(cfg, cfg.sweep.weights, cfg.seeds, args.jobs);
    mg::write_weight_sweep(cfg.out_dir, rows);
    for (const auto& r : rows)
        std::printf("alpha %.2f beta %.2f sp %.2f: C %.6g  P %.6g  SP %.6g\n",
                    r.alpha, r.beta, r.sp_weight, r.avg_consumer_profit,
                    r.avg_prosumer_profit, r.avg_sp_profit);
    std::printf("wrote %s\n",
                (fs::path(cfg.out_dir) / "sweep_weights.csv").string().c_str());
    return 0;
}

int cmd_sweep_battery(const CommonArgs& args) {
    mg::ExperimentConfig cfg = resolve(args);
    auto rows = mg::run_sweep_battery(cfg, cfg.sweep.battery_capacities_kwh,
                                      cfg.seeds, args.jobs);
    mg::write_battery_sweep(cfg.out_dir, rows);
    for (const auto& r : rows)
        std::printf("capacity %.0f kWh: last-year reward %.6g\n", r.capacity_kwh,
                    r.total_last_year_reward);
    std::printf("wrote %s\n",
                (fs::path(cfg.out_dir) / "sweep_battery.csv").string().c_str());
    return 0;
}

int cmd_sweep_ratio(const CommonArgs& args) {
    mg::ExperimentConfig cfg = resolve(args);
    auto rows = mg::run_sweep_ratio(cfg, cfg.sweep.consumer_fractions, cfg.seeds,
                                    args.jobs);
    mg::write_ratio_sweep(cfg.out_dir, rows);
    for (const auto& r : rows)
        std::printf("consumer fraction %.2f: avg reward %.6g\n",
                    r.consumer_fraction, r.avg_reward);
    std::printf("wrote %s\n",
                (fs::path(cfg.out_dir) / "sweep_ratio.csv").string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peer-to-peer microgrid pricing lab"};
    app.require_subcommand(1);

    CommonArgs train_args, weights_args, battery_args, ratio_args;
    CLI::App* train = app.add_subcommand("train", "Train one agent per seed");
    add_common(train, train_args);
    CLI::App* sweep_w =
        app.add_subcommand("sweep-weights", "Cost-weight sweep (alpha, beta grid)");
    add_common(sweep_w, weights_args);
    CLI::App* sweep_b =
        app.add_subcommand("sweep-battery", "Battery-capacity sweep");
    add_common(sweep_b, battery_args);
    CLI::App* sweep_r =
        app.add_subcommand("sweep-ratio", "Consumer-fraction sweep");
    add_common(sweep_r, ratio_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(train_args);
        if (sweep_w->parsed()) return cmd_sweep_weights(weights_args);
        if (sweep_b->parsed()) return cmd_sweep_battery(battery_args);
        if (sweep_r->parsed()) return cmd_sweep_ratio(ratio_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
