// Regenerates the bundled synthetic profile fixture (data/synthetic_8760.csv).

#include <cstdio>
#include <cstdlib>
#include <string>

#include "mg/profiles.hpp"

int main(int argc, char** argv) {
    std::string path = argc > 1 ? argv[1] : "data/synthetic_8760.csv";
    int length = argc > 2 ? std::atoi(argv[2]) : 8760;
    std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;

    mg::ProfileSeries series = mg::synth_profiles(length, seed);
    mg::write_csv(series, path);
    std::printf("wrote %s (%d rows)\n", path.c_str(), length);
    return 0;
}
