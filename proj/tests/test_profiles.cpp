#include "doctest.h"

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "mg/profiles.hpp"

using namespace mg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mg_profiles_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

} // namespace

TEST_CASE("csv round trip") {
    TempDir tmp;
    ProfileSeries series = synth_profiles(48, 5);
    fs::path p = tmp.path / "series.csv";
    write_csv(series, p.string());
    ProfileSeries back = load_csv(p.string());
    REQUIRE(back.size() == 48);
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.load_kwh[i] == doctest::Approx(series.load_kwh[i]).epsilon(1e-5));
        CHECK(back.pv_kwh[i] == doctest::Approx(series.pv_kwh[i]).epsilon(1e-5));
    }
}

TEST_CASE("csv errors identify the problem") {
    TempDir tmp;
    fs::path p = tmp.path / "bad.csv";

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv((tmp.path / "nope.csv").string()),
                        std::invalid_argument);
    }
    SUBCASE("missing pv column") {
        write_file(p, "load_kwh,solar\n1.0,2.0\n");
        CHECK_THROWS_WITH_AS(load_csv(p.string()),
                             doctest::Contains("pv_kwh"), std::invalid_argument);
    }
    SUBCASE("negative cell names the row") {
        std::string body = "load_kwh,pv_kwh\n";
        for (int i = 0; i < 40; ++i) body += "1.0,0.5\n";
        body += "-3,0.5\n"; // row 42 counting the header
        write_file(p, body);
        CHECK_THROWS_WITH_AS(load_csv(p.string()), doctest::Contains("row 42"),
                             std::invalid_argument);
    }
    SUBCASE("non-numeric cell") {
        write_file(p, "load_kwh,pv_kwh\nabc,0.5\n");
        CHECK_THROWS_AS(load_csv(p.string()), std::invalid_argument);
    }
}

TEST_CASE("scaling hits the target mean") {
    ProfileSeries series;
    series.load_kwh = {4000.0, 4000.0, 4000.0};
    series.pv_kwh = {8000.0, 0.0, 4000.0};

    ProfileSeries scaled = scale_profiles(series, 1.5);
    double mean = 0.0;
    for (double v : scaled.load_kwh) mean += v;
    mean /= scaled.size();
    CHECK(mean == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(scaled.load_kwh[0] == doctest::Approx(4000.0 * 0.000375).epsilon(1e-12));
    CHECK(scaled.pv_kwh[0] == doctest::Approx(8000.0 * 0.000375).epsilon(1e-12));

    SUBCASE("scaling to the current mean is the identity") {
        ProfileSeries same = scale_profiles(series, 4000.0);
        for (std::size_t i = 0; i < same.size(); ++i)
            CHECK(same.load_kwh[i] == doctest::Approx(series.load_kwh[i]));
    }
    SUBCASE("all-zero load is rejected") {
        ProfileSeries zero;
        zero.load_kwh = {0.0, 0.0};
        zero.pv_kwh = {0.0, 0.0};
        CHECK_THROWS_AS(scale_profiles(zero, 1.0), std::invalid_argument);
    }
}

TEST_CASE("customer assignment") {
    ProfileSeries series = synth_profiles(72, 9);
    DatasetConfig cfg;
    cfg.customer_count = 10;
    cfg.prosumer_fraction = 0.5;

    SUBCASE("five prosumers, five consumers, prosumers first") {
        auto customers = assign_customers(series, cfg);
        REQUIRE(customers.size() == 10);
        for (int i = 0; i < 5; ++i)
            CHECK(customers[i].kind == CustomerKind::Prosumer);
        for (int i = 5; i < 10; ++i) {
            CHECK(customers[i].kind == CustomerKind::Consumer);
            for (double g : customers[i].generation_kwh) CHECK(g == 0.0);
        }
    }
    SUBCASE("fractional counts round up") {
        cfg.customer_count = 10;
        cfg.prosumer_fraction = 0.25;
        auto customers = assign_customers(series, cfg);
        int prosumers = 0;
        for (const auto& c : customers)
            if (c.kind == CustomerKind::Prosumer) ++prosumers;
        CHECK(prosumers == 3);
    }
    SUBCASE("zero jitter clones the series") {
        cfg.jitter = 0.0;
        auto customers = assign_customers(series, cfg);
        for (const auto& c : customers)
            for (std::size_t t = 0; t < series.size(); ++t)
                CHECK(c.demand_kwh[t] == doctest::Approx(series.load_kwh[t]));
    }
    SUBCASE("same seed reproduces, different seed varies") {
        auto a = assign_customers(series, cfg);
        auto b = assign_customers(series, cfg);
        CHECK(a[3].demand_kwh == b[3].demand_kwh);
        cfg.seed = 123;
        auto c = assign_customers(series, cfg);
        CHECK(a[3].demand_kwh != c[3].demand_kwh);
    }
    SUBCASE("jitter stays within the configured band") {
        auto customers = assign_customers(series, cfg);
        for (const auto& c : customers)
            for (std::size_t t = 0; t < series.size(); ++t)
                if (series.load_kwh[t] > 0)
                    CHECK(std::abs(c.demand_kwh[t] / series.load_kwh[t] - 1.0) <=
                          cfg.jitter + 1e-12);
    }
}

TEST_CASE("synthetic profiles") {
    ProfileSeries series = synth_profiles(48, 21);
    REQUIRE(series.size() == 48);
    series.validate();

    SUBCASE("pv is zero at night") {
        for (std::size_t t = 0; t < series.size(); ++t) {
            int hour = static_cast<int>(t % 24);
            if (hour <= 6 || hour >= 18) CHECK(series.pv_kwh[t] == 0.0);
        }
    }
    SUBCASE("deterministic per seed") {
        ProfileSeries again = synth_profiles(48, 21);
        CHECK(series.load_kwh == again.load_kwh);
        CHECK(series.pv_kwh == again.pv_kwh);
    }
    SUBCASE("too-short request is rejected") {
        CHECK_THROWS_AS(synth_profiles(12, 21), std::invalid_argument);
    }
    SUBCASE("midday generation exceeds load for the default shape") {
        // The prosumer fixture needs both surplus and shortage hours.
        ProfileSeries year = synth_profiles(8760, 21);
        int surplus_hours = 0, shortage_hours = 0;
        for (std::size_t t = 0; t < year.size(); ++t) {
            if (year.pv_kwh[t] > year.load_kwh[t]) ++surplus_hours;
            if (year.load_kwh[t] > year.pv_kwh[t]) ++shortage_hours;
        }
        CHECK(surplus_hours > 1000);
        CHECK(shortage_hours > 1000);
    }
}

TEST_CASE("the bundled fixture loads and matches the documented shape") {
    ProfileSeries series = load_csv("data/synthetic_8760.csv");
    CHECK(series.size() == 8760);
}
