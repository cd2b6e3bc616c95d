#include "mg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mg/kernels.hpp"

namespace mg {

using nlohmann::json;

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config <-> JSON
// ---------------------------------------------------------------------------

BatteryConfig ExperimentConfig::make_battery_config() const {
    BatteryConfig b;
    b.capacity_kwh = battery_capacity_kwh;
    b.efficiency = battery_efficiency;
    b.soc_min = battery_soc_min;
    b.soc_max = battery_soc_max;
    b.soc_init = battery_soc_init;
    b.charge_cap_kwh = battery_power_cap_fraction * battery_capacity_kwh;
    b.discharge_cap_kwh = battery_power_cap_fraction * battery_capacity_kwh;
    b.tariff_discharge = tariff_discharge;
    b.tariff_charge = tariff_charge;
    return b;
}

EnvConfig ExperimentConfig::make_env_config() const {
    EnvConfig env;
    env.customers = build_customers(data);
    env.battery = make_battery_config();
    env.provider = provider;
    env.weights = weights;
    env.grid = grid;
    env.episode_length = episode_length;
    env.demand_scale = demand_scale;
    env.validate();
    return env;
}

void ExperimentConfig::validate() const {
    data.validate();
    make_battery_config().validate();
    weights.validate();
    agent.validate();
    if (grid.retail.empty() || grid.purchase.empty())
        throw std::invalid_argument("config: action grid must be non-empty");
    double min_retail = *std::min_element(grid.retail.begin(), grid.retail.end());
    if (!(provider.sigma < min_retail))
        throw std::invalid_argument(
            "config: provider.sigma must be below the lowest retail coefficient");
    if (episode_length < 1)
        throw std::invalid_argument("config: episode_length must be positive");
    if (!(battery_power_cap_fraction >= 0.0))
        throw std::invalid_argument("config: battery power_cap_fraction must be >= 0");
    if (seeds.empty())
        throw std::invalid_argument("config: at least one seed required");
    for (auto [a, b] : sweep.weights) {
        if (a < 0.0 || b < 0.0 || a + b > 1.0)
            throw std::invalid_argument("config: sweep weight row (" +
                                        format_double(a) + ", " + format_double(b) +
                                        ") violates alpha + beta <= 1");
    }
}

json ExperimentConfig::to_json() const {
    json j;
    j["run_id"] = run_id;
    j["out_dir"] = out_dir;
    j["seeds"] = seeds;
    j["data"] = {
        {"source", data.source},
        {"target_mean_load_kwh", data.target_mean_load_kwh},
        {"customer_count", data.customer_count},
        {"prosumer_fraction", data.prosumer_fraction},
        {"jitter", data.jitter},
        {"seed", data.seed},
        {"length", data.length},
    };
    j["battery"] = {
        {"capacity_kwh", battery_capacity_kwh},
        {"efficiency", battery_efficiency},
        {"soc_min", battery_soc_min},
        {"soc_max", battery_soc_max},
        {"soc_init", battery_soc_init},
        {"power_cap_fraction", battery_power_cap_fraction},
        {"tariff_discharge", tariff_discharge},
        {"tariff_charge", tariff_charge},
    };
    j["provider"] = {{"sigma", provider.sigma}};
    j["weights"] = {{"alpha", weights.alpha}, {"beta", weights.beta}};
    j["action_grid"] = {{"retail", grid.retail}, {"purchase", grid.purchase}};
    j["env"] = {{"episode_length", episode_length}, {"demand_scale", demand_scale}};
    j["agent"] = {
        {"minibatch", agent.minibatch},
        {"warmup", agent.warmup},
        {"replay_capacity", agent.replay_capacity},
        {"total_steps", agent.total_steps},
        {"target_sync", agent.target_sync},
        {"learning_rate", agent.learning_rate},
        {"discount", agent.discount},
        {"epsilon",
         {{"start", agent.epsilon.start},
          {"end", agent.epsilon.end},
          {"decay_fraction", agent.epsilon.decay_fraction}}},
        {"target_rule", agent.target_rule == TargetRule::Double ? "double" : "vanilla"},
        {"hidden", agent.net.hidden},
    };
    j["sweep"] = {
        {"weights", sweep.weights},
        {"battery_capacities_kwh", sweep.battery_capacities_kwh},
        {"battery_alpha", sweep.battery_alpha},
        {"battery_beta", sweep.battery_beta},
        {"consumer_fractions", sweep.consumer_fractions},
    };
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    c.run_id = j.at("run_id").get<std::string>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();

    const json& d = j.at("data");
    c.data.source = d.at("source").get<std::string>();
    c.data.target_mean_load_kwh = d.at("target_mean_load_kwh").get<double>();
    c.data.customer_count = d.at("customer_count").get<int>();
    c.data.prosumer_fraction = d.at("prosumer_fraction").get<double>();
    c.data.jitter = d.at("jitter").get<double>();
    c.data.seed = d.at("seed").get<std::uint64_t>();
    c.data.length = d.at("length").get<int>();

    const json& b = j.at("battery");
    c.battery_capacity_kwh = b.at("capacity_kwh").get<double>();
    c.battery_efficiency = b.at("efficiency").get<double>();
    c.battery_soc_min = b.at("soc_min").get<double>();
    c.battery_soc_max = b.at("soc_max").get<double>();
    c.battery_soc_init = b.at("soc_init").get<double>();
    c.battery_power_cap_fraction = b.at("power_cap_fraction").get<double>();
    c.tariff_discharge = b.at("tariff_discharge").get<double>();
    c.tariff_charge = b.at("tariff_charge").get<double>();

    c.provider.sigma = j.at("provider").at("sigma").get<double>();
    c.weights.alpha = j.at("weights").at("alpha").get<double>();
    c.weights.beta = j.at("weights").at("beta").get<double>();
    c.grid.retail = j.at("action_grid").at("retail").get<std::vector<double>>();
    c.grid.purchase = j.at("action_grid").at("purchase").get<std::vector<double>>();
    c.episode_length = j.at("env").at("episode_length").get<int>();
    c.demand_scale = j.at("env").at("demand_scale").get<double>();

    const json& a = j.at("agent");
    c.agent.minibatch = a.at("minibatch").get<int>();
    c.agent.warmup = a.at("warmup").get<int>();
    c.agent.replay_capacity = a.at("replay_capacity").get<int>();
    c.agent.total_steps = a.at("total_steps").get<long>();
    c.agent.target_sync = a.at("target_sync").get<int>();
    c.agent.learning_rate = a.at("learning_rate").get<double>();
    c.agent.discount = a.at("discount").get<double>();
    c.agent.epsilon.start = a.at("epsilon").at("start").get<double>();
    c.agent.epsilon.end = a.at("epsilon").at("end").get<double>();
    c.agent.epsilon.decay_fraction = a.at("epsilon").at("decay_fraction").get<double>();
    std::string rule = a.at("target_rule").get<std::string>();
    if (rule == "vanilla")
        c.agent.target_rule = TargetRule::Vanilla;
    else if (rule == "double")
        c.agent.target_rule = TargetRule::Double;
    else
        throw std::invalid_argument("config: agent.target_rule must be 'vanilla' or 'double'");
    c.agent.net.hidden = a.at("hidden").get<std::vector<int>>();

    const json& s = j.at("sweep");
    c.sweep.weights = s.at("weights").get<std::vector<std::pair<double, double>>>();
    c.sweep.battery_capacities_kwh =
        s.at("battery_capacities_kwh").get<std::vector<double>>();
    c.sweep.battery_alpha = s.at("battery_alpha").get<double>();
    c.sweep.battery_beta = s.at("battery_beta").get<double>();
    c.sweep.consumer_fractions = s.at("consumer_fractions").get<std::vector<double>>();
    return c;
}

namespace {

void collect_unknown_keys(const json& candidate, const json& schema,
                          const std::string& prefix,
                          std::vector<std::string>& unknown) {
    if (!candidate.is_object()) return;
    for (auto it = candidate.begin(); it != candidate.end(); ++it) {
        std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!schema.is_object() || !schema.contains(it.key())) {
            unknown.push_back(path);
            continue;
        }
        if (it.value().is_object())
            collect_unknown_keys(it.value(), schema.at(it.key()), path, unknown);
    }
}

void deep_merge(json& base, const json& overlay) {
    if (!overlay.is_object() || !base.is_object()) {
        base = overlay;
        return;
    }
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (base.contains(it.key()) && base[it.key()].is_object() &&
            it.value().is_object())
            deep_merge(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

} // namespace

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
    json schema = ExperimentConfig{}.to_json();
    json merged = schema;

    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("config: cannot open " + path);
        json loaded;
        try {
            in >> loaded;
        } catch (const json::exception& e) {
            throw std::invalid_argument("config: " + path + ": " + e.what());
        }
        std::vector<std::string> unknown;
        collect_unknown_keys(loaded, schema, "", unknown);
        if (!unknown.empty()) {
            std::string msg = "config: unknown keys:";
            for (const std::string& k : unknown) msg += " " + k;
            throw std::invalid_argument(msg);
        }
        deep_merge(merged, loaded);
    }

    for (const std::string& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: override '" + kv +
                                        "' is not of the form key=value");
        std::string key = kv.substr(0, eq);
        std::string value = kv.substr(eq + 1);

        // Walk the schema to confirm the key exists before assigning.
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto dot = key.find('.', start);
            parts.push_back(key.substr(start, dot - start));
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        const json* node = &schema;
        json* slot = &merged;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!node->is_object() || !node->contains(parts[i]))
                throw std::invalid_argument("config: unknown key '" + key + "'");
            node = &node->at(parts[i]);
            slot = &(*slot)[parts[i]];
        }
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::exception&) {
            parsed = value; // bare strings stay strings
        }
        *slot = parsed;
    }

    ExperimentConfig cfg = ExperimentConfig::from_json(merged);
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Runs and summaries
// ---------------------------------------------------------------------------

namespace {

int prosumer_count_of(const DatasetConfig& d) {
    int p = static_cast<int>(std::ceil(d.prosumer_fraction * d.customer_count));
    return std::min(p, d.customer_count);
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

constexpr int kHoursPerYear = 8760;

} // namespace

RunSummary summarize_run(const ExperimentConfig& cfg, std::uint64_t seed,
                         const TrainStats& stats) {
    RunSummary s;
    s.seed = seed;
    s.prosumer_count = prosumer_count_of(cfg.data);
    s.consumer_count = cfg.data.customer_count - s.prosumer_count;

    s.avg_reward = mean_of(stats.reward);
    std::size_t n = stats.reward.size();
    std::size_t window = std::min<std::size_t>(n, kHoursPerYear);
    for (std::size_t i = n - window; i < n; ++i)
        s.total_last_year_reward += stats.reward[i];

    double mean_psi = mean_of(stats.provider_cost);
    double mean_phi_c = mean_of(stats.consumer_cost_total);
    double mean_phi_p = mean_of(stats.prosumer_cost_total);
    s.avg_sp_profit = -mean_psi;
    s.avg_consumer_profit =
        s.consumer_count > 0 ? -mean_phi_c / s.consumer_count : 0.0;
    s.avg_prosumer_profit =
        s.prosumer_count > 0 ? -mean_phi_p / s.prosumer_count : 0.0;
    s.mean_operation_cost = mean_of(stats.operation_cost);

    AgentConfig agent = cfg.agent;
    s.final_epsilon = epsilon_at(agent.total_steps - 1, agent);
    return s;
}

RunOutput run_train_cell(const ExperimentConfig& cfg, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    EnvConfig env_cfg = cfg.make_env_config();
    AgentConfig agent = cfg.agent;
    agent.seed = seed;
    agent.net.output = env_cfg.grid.size();
    agent.net.learning_rate = agent.learning_rate;

    TrainResult result = train(env_cfg, agent);
    RunSummary summary = summarize_run(cfg, seed, result.stats);
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return RunOutput{summary, std::move(result)};
}

RunSummary run_train(const ExperimentConfig& cfg, std::uint64_t seed,
                     const std::string& out_dir) {
    RunOutput out = run_train_cell(cfg, seed);

    fs::create_directories(out_dir);
    write_step_tables(out_dir, out.result.stats);
    write_trajectory(out_dir, cfg, out.result.params);

    AgentConfig agent = cfg.agent;
    NetConfig net_cfg = agent.net;
    net_cfg.output = cfg.grid.size();
    net_cfg.learning_rate = agent.learning_rate;
    save_checkpoint((fs::path(out_dir) / "qnet.bin").string(), net_cfg,
                    out.result.params);
    write_run_summary_json(out_dir, cfg, {out.summary});
    return out.summary;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

void parallel_cells(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        jobs = hc > 0 ? static_cast<int>(hc) : 1;
    }
    jobs = std::min(jobs, n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(err_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

std::vector<WeightSweepRow> run_sweep_weights(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<double, double>>& weight_rows,
    const std::vector<std::uint64_t>& seeds, int jobs) {
    for (auto [a, b] : weight_rows) {
        WeightConfig w{a, b};
        w.validate(); // reject every bad pair before any training run
    }
    if (seeds.empty())
        throw std::invalid_argument("sweep: at least one seed required");

    int rows = static_cast<int>(weight_rows.size());
    int cols = static_cast<int>(seeds.size());
    std::vector<RunSummary> cells(rows * cols);
    parallel_cells(rows * cols, jobs, [&](int i) {
        int r = i / cols, s = i % cols;
        ExperimentConfig cell = cfg;
        cell.weights.alpha = weight_rows[r].first;
        cell.weights.beta = weight_rows[r].second;
        cells[i] = run_train_cell(cell, seeds[s]).summary;
    });

    std::vector<WeightSweepRow> table(rows);
    for (int r = 0; r < rows; ++r) {
        WeightSweepRow& row = table[r];
        row.alpha = weight_rows[r].first;
        row.beta = weight_rows[r].second;
        row.sp_weight = 1.0 - row.alpha - row.beta;
        for (int s = 0; s < cols; ++s) {
            const RunSummary& cell = cells[r * cols + s];
            row.avg_consumer_profit += cell.avg_consumer_profit;
            row.avg_prosumer_profit += cell.avg_prosumer_profit;
            row.avg_sp_profit += cell.avg_sp_profit;
        }
        row.avg_consumer_profit /= cols;
        row.avg_prosumer_profit /= cols;
        row.avg_sp_profit /= cols;
    }
    return table;
}

std::vector<BatterySweepRow> run_sweep_battery(
    const ExperimentConfig& cfg, const std::vector<double>& capacities,
    const std::vector<std::uint64_t>& seeds, int jobs) {
    for (double c : capacities)
        if (!(c > 0.0))
            throw std::invalid_argument("sweep: battery capacity must be positive, got " +
                                        format_double(c));
    if (seeds.empty())
        throw std::invalid_argument("sweep: at least one seed required");

    int rows = static_cast<int>(capacities.size());
    int cols = static_cast<int>(seeds.size());
    std::vector<RunSummary> cells(rows * cols);
    parallel_cells(rows * cols, jobs, [&](int i) {
        int r = i / cols, s = i % cols;
        ExperimentConfig cell = cfg;
        cell.battery_capacity_kwh = capacities[r];
        cell.weights.alpha = cfg.sweep.battery_alpha;
        cell.weights.beta = cfg.sweep.battery_beta;
        cells[i] = run_train_cell(cell, seeds[s]).summary;
    });

    std::vector<BatterySweepRow> table(rows);
    for (int r = 0; r < rows; ++r) {
        table[r].capacity_kwh = capacities[r];
        double total = 0.0;
        for (int s = 0; s < cols; ++s)
            total += cells[r * cols + s].total_last_year_reward;
        table[r].total_last_year_reward = total / cols;
    }
    return table;
}

std::vector<RatioSweepRow> run_sweep_ratio(
    const ExperimentConfig& cfg, const std::vector<double>& fractions,
    const std::vector<std::uint64_t>& seeds, int jobs) {
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0))
            throw std::invalid_argument("sweep: consumer fraction must be in [0, 1], got " +
                                        format_double(f));
    if (seeds.empty())
        throw std::invalid_argument("sweep: at least one seed required");

    int rows = static_cast<int>(fractions.size());
    int cols = static_cast<int>(seeds.size());
    std::vector<RunSummary> cells(rows * cols);
    parallel_cells(rows * cols, jobs, [&](int i) {
        int r = i / cols, s = i % cols;
        ExperimentConfig cell = cfg;
        cell.data.prosumer_fraction = 1.0 - fractions[r];
        cells[i] = run_train_cell(cell, seeds[s]).summary;
    });

    std::vector<RatioSweepRow> table(rows);
    for (int r = 0; r < rows; ++r) {
        table[r].consumer_fraction = fractions[r];
        double total = 0.0;
        for (int s = 0; s < cols; ++s)
            total += cells[r * cols + s].avg_reward;
        table[r].avg_reward = total / cols;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Report writers
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        throw std::logic_error("format_double: buffer too small");
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_table(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("reports: cannot write " + path.string());
    return out;
}

} // namespace

void write_step_tables(const std::string& dir, const TrainStats& stats) {
    {
        std::ofstream out = open_table(dir, "steps.csv");
        out << "step,epsilon,action,reward,loss\n";
        std::size_t li = 0;
        for (std::size_t t = 0; t < stats.reward.size(); ++t) {
            out << t << ',' << format_double(stats.epsilon[t]) << ','
                << stats.action[t] << ',' << format_double(stats.reward[t]) << ',';
            if (li < stats.losses.size() &&
                stats.losses[li].first == static_cast<long>(t)) {
                out << format_double(stats.losses[li].second);
                ++li;
            }
            out << '\n';
        }
    }
    {
        std::ofstream out = open_table(dir, "reward_curve.csv");
        out << "step,reward\n";
        for (std::size_t t = 0; t < stats.reward.size(); ++t)
            out << t << ',' << format_double(stats.reward[t]) << '\n';
    }
    {
        std::ofstream out = open_table(dir, "loss_curve.csv");
        out << "step,loss\n";
        for (const auto& [step, loss] : stats.losses)
            out << step << ',' << format_double(loss) << '\n';
    }
    {
        std::ofstream out = open_table(dir, "episodes.csv");
        out << "episode,steps,total_reward,mean_reward,mean_loss,learn_steps\n";
        for (const EpisodeStats& ep : stats.episodes)
            out << ep.episode << ',' << ep.steps << ','
                << format_double(ep.total_reward) << ','
                << format_double(ep.mean_reward) << ','
                << format_double(ep.mean_loss) << ',' << ep.learn_steps << '\n';
    }
}

void write_trajectory(const std::string& dir, const ExperimentConfig& cfg,
                      const NetParams& params) {
    Env env(cfg.make_env_config());
    Workspace ws;
    std::ofstream out = open_table(dir, "trajectory.csv");
    out << "step,hour,soc,a,p,sp_demand,sp_surplus,reward,psi,"
           "phi_consumers_total,phi_prosumers_total,battery_charge,"
           "battery_discharge\n";

    env.reset();
    while (!env.done()) {
        std::array<double, 3> features =
            env.observation().features(env.demand_scale());
        std::span<const double> q = forward(params, features, ws);
        int action = static_cast<int>(kern::max_index(q.data(), q.size()));
        auto [tr, sr] = env.step(action);
        double phi_c = 0.0, phi_p = 0.0;
        for (double v : sr.consumer_costs) phi_c += v;
        for (double v : sr.prosumer_costs) phi_p += v;
        out << sr.step << ',' << sr.hour << ',' << format_double(sr.soc_after)
            << ',' << format_double(sr.action.retail) << ','
            << format_double(sr.action.purchase) << ','
            << format_double(sr.sp_demand_kwh) << ','
            << format_double(sr.sp_surplus_kwh) << ','
            << format_double(sr.reward) << ','
            << format_double(sr.provider_cost) << ',' << format_double(phi_c)
            << ',' << format_double(phi_p) << ','
            << format_double(sr.battery_charge_kwh) << ','
            << format_double(sr.battery_discharge_kwh) << '\n';
    }
}

namespace {

json summary_to_json(const RunSummary& s) {
    return json{
        {"seed", s.seed},
        {"total_last_year_reward", s.total_last_year_reward},
        {"avg_reward", s.avg_reward},
        {"avg_consumer_profit_per_member", s.avg_consumer_profit},
        {"avg_prosumer_profit_per_member", s.avg_prosumer_profit},
        {"avg_sp_profit", s.avg_sp_profit},
        {"mean_operation_cost", s.mean_operation_cost},
        {"final_epsilon", s.final_epsilon},
        {"consumer_count", s.consumer_count},
        {"prosumer_count", s.prosumer_count},
    };
}

} // namespace

void write_run_summary_json(const std::string& dir, const ExperimentConfig& cfg,
                            const std::vector<RunSummary>& summaries) {
    json j;
    j["config"] = cfg.to_json();
    j["runs"] = json::array();
    for (const RunSummary& s : summaries) j["runs"].push_back(summary_to_json(s));

    if (!summaries.empty()) {
        RunSummary mean;
        for (const RunSummary& s : summaries) {
            mean.total_last_year_reward += s.total_last_year_reward;
            mean.avg_reward += s.avg_reward;
            mean.avg_consumer_profit += s.avg_consumer_profit;
            mean.avg_prosumer_profit += s.avg_prosumer_profit;
            mean.avg_sp_profit += s.avg_sp_profit;
            mean.mean_operation_cost += s.mean_operation_cost;
        }
        double n = static_cast<double>(summaries.size());
        mean.total_last_year_reward /= n;
        mean.avg_reward /= n;
        mean.avg_consumer_profit /= n;
        mean.avg_prosumer_profit /= n;
        mean.avg_sp_profit /= n;
        mean.mean_operation_cost /= n;
        mean.final_epsilon = summaries.front().final_epsilon;
        mean.consumer_count = summaries.front().consumer_count;
        mean.prosumer_count = summaries.front().prosumer_count;
        json m = summary_to_json(mean);
        m.erase("seed");
        j["seed_mean"] = m;
    }

    std::ofstream out = open_table(dir, "summary.json");
    out << j.dump(2) << '\n';
}

void write_weight_sweep(const std::string& dir,
                        const std::vector<WeightSweepRow>& rows) {
    std::ofstream out = open_table(dir, "sweep_weights.csv");
    out << "alpha,beta,sp_weight,avg_consumer_profit_per_member,"
           "avg_prosumer_profit_per_member,avg_sp_profit\n";
    for (const WeightSweepRow& r : rows)
        out << format_double(r.alpha) << ',' << format_double(r.beta) << ','
            << format_double(r.sp_weight) << ','
            << format_double(r.avg_consumer_profit) << ','
            << format_double(r.avg_prosumer_profit) << ','
            << format_double(r.avg_sp_profit) << '\n';
}

void write_battery_sweep(const std::string& dir,
                         const std::vector<BatterySweepRow>& rows) {
    std::ofstream out = open_table(dir, "sweep_battery.csv");
    out << "capacity_kwh,total_last_year_reward\n";
    for (const BatterySweepRow& r : rows)
        out << format_double(r.capacity_kwh) << ','
            << format_double(r.total_last_year_reward) << '\n';
}

void write_ratio_sweep(const std::string& dir,
                       const std::vector<RatioSweepRow>& rows) {
    std::ofstream out = open_table(dir, "sweep_ratio.csv");
    out << "consumer_fraction,avg_reward\n";
    for (const RatioSweepRow& r : rows)
        out << format_double(r.consumer_fraction) << ','
            << format_double(r.avg_reward) << '\n';
}

} // namespace mg
