#include "mg/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mg/rng.hpp"

namespace mg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw std::invalid_argument("profiles: row " + std::to_string(row) +
                                    ", column " + column + ": not a number: '" + cell + "'");
    if (!std::isfinite(value))
        throw std::invalid_argument("profiles: row " + std::to_string(row) +
                                    ", column " + column + ": non-finite value");
    if (value < 0.0)
        throw std::invalid_argument("profiles: row " + std::to_string(row) +
                                    ", column " + column + ": negative value " + cell);
    return value;
}

} // namespace

void ProfileSeries::validate() const {
    if (load_kwh.size() != pv_kwh.size())
        throw std::invalid_argument("profiles: load and pv lengths differ");
    for (std::size_t i = 0; i < load_kwh.size(); ++i) {
        if (!(std::isfinite(load_kwh[i]) && load_kwh[i] >= 0.0))
            throw std::invalid_argument("profiles: bad load at row " + std::to_string(i + 1));
        if (!(std::isfinite(pv_kwh[i]) && pv_kwh[i] >= 0.0))
            throw std::invalid_argument("profiles: bad pv at row " + std::to_string(i + 1));
    }
}

void DatasetConfig::validate() const {
    if (customer_count < 1)
        throw std::invalid_argument("dataset: customer_count must be at least 1");
    if (!(prosumer_fraction >= 0.0 && prosumer_fraction <= 1.0))
        throw std::invalid_argument("dataset: prosumer_fraction must be in [0, 1]");
    if (!(jitter >= 0.0 && jitter < 1.0))
        throw std::invalid_argument("dataset: jitter must be in [0, 1)");
    if (!(target_mean_load_kwh > 0.0))
        throw std::invalid_argument("dataset: target_mean_load_kwh must be positive");
    if (source == "synthetic" && length < 24)
        throw std::invalid_argument("dataset: synthetic length must be at least 24");
}

ProfileSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("profiles: cannot open " + path);

    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("profiles: " + path + " is empty");

    auto header = split_fields(line);
    int load_col = -1, pv_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "load_kwh") load_col = static_cast<int>(i);
        if (header[i] == "pv_kwh") pv_col = static_cast<int>(i);
    }
    if (load_col < 0)
        throw std::invalid_argument("profiles: " + path + " missing column load_kwh");
    if (pv_col < 0)
        throw std::invalid_argument("profiles: " + path + " missing column pv_kwh");

    ProfileSeries series;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() <= static_cast<std::size_t>(std::max(load_col, pv_col)))
            throw std::invalid_argument("profiles: row " + std::to_string(row) +
                                        ": expected " + std::to_string(header.size()) +
                                        " fields, got " + std::to_string(fields.size()));
        series.load_kwh.push_back(parse_cell(fields[load_col], row, "load_kwh"));
        series.pv_kwh.push_back(parse_cell(fields[pv_col], row, "pv_kwh"));
    }
    series.validate();
    return series;
}

void write_csv(const ProfileSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("profiles: cannot write " + path);
    out << "load_kwh,pv_kwh\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", series.load_kwh[i], series.pv_kwh[i]);
        out << buf;
    }
}

ProfileSeries scale_profiles(ProfileSeries series, double target_mean) {
    series.validate();
    if (series.size() == 0)
        throw std::invalid_argument("profiles: cannot scale an empty series");
    double mean = 0.0;
    for (double v : series.load_kwh) mean += v;
    mean /= static_cast<double>(series.size());
    if (mean <= 0.0)
        throw std::invalid_argument("profiles: all-zero load series cannot be scaled");

    double factor = target_mean / mean;
    for (double& v : series.load_kwh) v *= factor;
    for (double& v : series.pv_kwh) v *= factor;
    return series;
}

std::vector<CustomerProfile> assign_customers(const ProfileSeries& series,
                                              const DatasetConfig& cfg) {
    cfg.validate();
    series.validate();

    int prosumers = static_cast<int>(
        std::ceil(cfg.prosumer_fraction * static_cast<double>(cfg.customer_count)));
    prosumers = std::min(prosumers, cfg.customer_count);

    std::vector<CustomerProfile> customers;
    customers.reserve(cfg.customer_count);
    for (int id = 0; id < cfg.customer_count; ++id) {
        CustomerProfile c;
        c.id = id;
        c.kind = id < prosumers ? CustomerKind::Prosumer : CustomerKind::Consumer;

        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(id)));
        double load_factor = 1.0 + rng.uniform(-cfg.jitter, cfg.jitter);
        double pv_factor = 1.0 + rng.uniform(-cfg.jitter, cfg.jitter);

        c.demand_kwh.resize(series.size());
        c.generation_kwh.assign(series.size(), 0.0);
        for (std::size_t t = 0; t < series.size(); ++t)
            c.demand_kwh[t] = series.load_kwh[t] * load_factor;
        if (c.kind == CustomerKind::Prosumer)
            for (std::size_t t = 0; t < series.size(); ++t)
                c.generation_kwh[t] = series.pv_kwh[t] * pv_factor;
        customers.push_back(std::move(c));
    }
    return customers;
}

ProfileSeries synth_profiles(int length, std::uint64_t seed) {
    if (length < 24)
        throw std::invalid_argument("profiles: synthetic length must be at least 24");

    Rng rng(mix_seed(seed, 0x5e71e5));
    ProfileSeries series;
    series.load_kwh.resize(length);
    series.pv_kwh.resize(length);

    for (int t = 0; t < length; ++t) {
        int hour = t % 24;
        int day = t / 24;
        // Mild seasonal swing on top of the daily shape.
        double season = 1.0 + 0.05 * std::sin(2.0 * kPi * (day % 365) / 365.0);

        // Base load with morning and evening bumps, evening dominant.
        double load = 0.6 +
                      0.35 * std::exp(-0.5 * std::pow((hour - 8.0) / 2.5, 2.0)) +
                      0.95 * std::exp(-0.5 * std::pow((hour - 19.0) / 2.5, 2.0));
        load *= season * (1.0 + 0.04 * rng.normal());
        series.load_kwh[t] = std::max(0.0, load);

        // Daylight half-sine between 06:00 and 18:00; strictly zero at night
        // so noise cannot invent nighttime generation.
        double pv = 0.0;
        if (hour > 6 && hour < 18) {
            double phase = (hour - 6.0) / 12.0;
            pv = 3.2 * std::sin(kPi * phase) * season * (1.0 + 0.06 * rng.normal());
        }
        series.pv_kwh[t] = std::max(0.0, pv);
    }
    return series;
}

std::vector<CustomerProfile> build_customers(const DatasetConfig& cfg) {
    cfg.validate();
    ProfileSeries series = cfg.source == "synthetic"
                               ? synth_profiles(cfg.length, cfg.seed)
                               : load_csv(cfg.source);
    series = scale_profiles(std::move(series), cfg.target_mean_load_kwh);
    return assign_customers(series, cfg);
}

} // namespace mg
