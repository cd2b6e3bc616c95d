#pragma once
// Hourly load/PV profile ingestion, scaling to household level, and
// per-customer assignment with multiplicative jitter. A synthetic
// generator with a plausible diurnal shape backs tests and offline runs.

#include <cstdint>
#include <string>
#include <vector>

#include "mg/customer.hpp"

namespace mg {

struct ProfileSeries {
    std::vector<double> load_kwh;
    std::vector<double> pv_kwh;

    std::size_t size() const { return load_kwh.size(); }
    void validate() const; // throws std::invalid_argument
};

struct DatasetConfig {
    std::string source = "synthetic";  // CSV path, or "synthetic"
    double target_mean_load_kwh = 1.5; // per-household hourly mean after scaling
    int customer_count = 10;
    double prosumer_fraction = 0.5;
    double jitter = 0.2;               // per-customer amplitude, in [0, 1)
    std::uint64_t seed = 42;
    int length = 8760;                 // rows generated when source is synthetic

    void validate() const;
};

// Parses a delimited text file with header columns `load_kwh` and `pv_kwh`
// (dot-decimal, one row per hour). Errors identify the offending row and
// column.
ProfileSeries load_csv(const std::string& path);

void write_csv(const ProfileSeries& series, const std::string& path);

// Rescales load and pv by target_mean / mean(load).
ProfileSeries scale_profiles(ProfileSeries series, double target_mean);

// Derives customer_count households from one series: the first
// ceil(count * prosumer_fraction) ids are prosumers, the rest consumers.
// Each customer's load (and a prosumer's pv) is the series times
// (1 + u), u uniform in [-jitter, +jitter], seeded per customer id.
std::vector<CustomerProfile> assign_customers(const ProfileSeries& series,
                                              const DatasetConfig& cfg);

// Diurnal load with an evening peak and a daylight half-sine PV curve,
// both with seeded multiplicative noise. PV is identically zero at night.
ProfileSeries synth_profiles(int length, std::uint64_t seed);

// source -> load or synthesize -> scale -> assign.
std::vector<CustomerProfile> build_customers(const DatasetConfig& cfg);

} // namespace mg
