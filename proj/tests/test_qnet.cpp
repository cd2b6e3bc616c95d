#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <vector>

#include "mg/qnet.hpp"
#include "mg/rng.hpp"

using namespace mg;
namespace fs = std::filesystem;

namespace {

// Loss recomputed without touching the gradient path: plain forwards only.
double loss_oracle(const NetParams& params, std::span<const GradSample> batch) {
    double loss = 0.0;
    for (const GradSample& s : batch) {
        std::vector<double> q = forward(
            params, std::span<const double>{
                        s.x, static_cast<std::size_t>(params.input_size())});
        double diff = q[s.action] - s.target;
        loss += diff * diff;
    }
    return loss / static_cast<double>(batch.size());
}

NetConfig small_config(Rng& rng) {
    NetConfig cfg;
    cfg.input = 2 + rng.uniform_int(3);
    cfg.hidden = {1 + rng.uniform_int(8), 1 + rng.uniform_int(8)};
    cfg.output = 2 + rng.uniform_int(5);
    return cfg;
}

} // namespace

TEST_CASE("initialization is seeded and variance-scaled") {
    NetConfig cfg;
    NetParams a = NetParams::init(cfg, 42);
    NetParams b = NetParams::init(cfg, 42);
    CHECK(a == b);
    NetParams c = NetParams::init(cfg, 43);
    CHECK(a != c);

    for (const Layer& layer : a.layers)
        for (double bias : layer.b) CHECK(bias == 0.0);

    // Sample variance of the 64x64 layer against the 2/fan_in scheme.
    const Layer& mid = a.layers[1];
    REQUIRE(mid.in == 64);
    double mean = 0.0;
    for (double w : mid.w) mean += w;
    mean /= mid.w.size();
    double var = 0.0;
    for (double w : mid.w) var += (w - mean) * (w - mean);
    var /= mid.w.size();
    CHECK(var == doctest::Approx(2.0 / 64.0).epsilon(0.2));
}

TEST_CASE("forward computes the layer composition") {
    SUBCASE("zero parameters give zero output") {
        NetConfig cfg;
        cfg.input = 3;
        cfg.hidden = {4};
        cfg.output = 2;
        NetParams params = NetParams::init(cfg, 1);
        for (Layer& l : params.layers) {
            std::fill(l.w.begin(), l.w.end(), 0.0);
            std::fill(l.b.begin(), l.b.end(), 0.0);
        }
        std::vector<double> x{0.3, 0.7, 0.1};
        for (double q : forward(params, x)) CHECK(q == 0.0);
    }
    SUBCASE("hand-built single-hidden-unit net") {
        NetParams params;
        params.layers.push_back(Layer{3, 1, {2.0, 0.0, 0.0}, {-1.0}});
        params.layers.push_back(Layer{1, 1, {0.5}, {0.0}});

        std::vector<double> x{1.0, 0.0, 0.0};
        CHECK(forward(params, x)[0] == doctest::Approx(0.5).epsilon(1e-12));

        // Rectifier clips 2 * 0.4 - 1 < 0.
        std::vector<double> x2{0.4, 0.0, 0.0};
        CHECK(forward(params, x2)[0] == doctest::Approx(0.0));
    }
    SUBCASE("non-finite input is rejected") {
        NetParams params = NetParams::init(NetConfig{}, 3);
        std::vector<double> x{0.1, std::nan(""), 0.2};
        CHECK_THROWS_AS(forward(params, x), std::logic_error);
    }
    SUBCASE("repeated calls agree bit for bit") {
        NetParams params = NetParams::init(NetConfig{}, 7);
        std::vector<double> x{0.5, 0.25, 0.9};
        auto a = forward(params, x);
        auto b = forward(params, x);
        CHECK(a == b);
    }
    SUBCASE("a deep copy evaluates identically") {
        NetParams params = NetParams::init(NetConfig{}, 11);
        NetParams copy = params;
        std::vector<double> x{0.2, 0.8, 0.4};
        CHECK(forward(params, x) == forward(copy, x));
    }
}

TEST_CASE("gradient facts") {
    SUBCASE("targets equal to predictions give zero gradient") {
        NetConfig cfg;
        cfg.input = 3;
        cfg.hidden = {5};
        cfg.output = 4;
        NetParams params = NetParams::init(cfg, 5);
        std::vector<std::vector<double>> xs = {
            {0.1, 0.5, 0.9}, {0.7, 0.2, 0.3}};
        std::vector<GradSample> batch;
        for (auto& x : xs) {
            std::vector<double> q = forward(params, x);
            batch.push_back({x.data(), 1, q[1]});
        }
        Grads grads;
        Workspace ws;
        double loss = grad(params, batch, grads, ws);
        CHECK(loss == 0.0);
        for (const Layer& l : grads.layers) {
            for (double g : l.w) CHECK(g == 0.0);
            for (double g : l.b) CHECK(g == 0.0);
        }
    }
    SUBCASE("single linear unit matches hand differentiation") {
        NetParams params;
        params.layers.push_back(Layer{1, 1, {1.0}, {0.0}});
        double x = 1.0;
        GradSample sample{&x, 0, 0.0};
        Grads grads;
        Workspace ws;
        double loss = grad(params, {&sample, 1}, grads, ws);
        CHECK(loss == doctest::Approx(1.0));
        CHECK(grads.layers[0].w[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(grads.layers[0].b[0] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("loss matches the independent recomputation") {
        NetConfig cfg;
        NetParams params = NetParams::init(cfg, 99);
        Rng rng(1);
        std::vector<std::array<double, 3>> xs(32);
        std::vector<GradSample> batch;
        for (auto& x : xs) {
            x = {rng.uniform(), rng.uniform(), rng.uniform()};
            batch.push_back({x.data(), rng.uniform_int(cfg.output),
                             rng.uniform(-2.0, 2.0)});
        }
        Grads grads;
        Workspace ws;
        double loss = grad(params, batch, grads, ws);
        CHECK(loss == doctest::Approx(loss_oracle(params, batch)).epsilon(1e-12));
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        NetConfig cfg = small_config(rng);
        NetParams params = NetParams::init(cfg, rng.next());
        // Zero-init biases can leave pre-activations sitting exactly on the
        // rectifier corner, where central differences are meaningless.
        // Randomize them and keep every unit clear of the kink.
        for (Layer& l : params.layers)
            for (double& b : l.b) b = rng.uniform(-0.5, 0.5);

        std::vector<std::vector<double>> xs;
        std::vector<GradSample> batch;
        Workspace probe;
        for (int i = 0; i < 4; ++i) {
            std::vector<double> x(cfg.input);
            double min_abs_z = 0.0;
            for (int attempt = 0; attempt < 100 && min_abs_z < 1e-3; ++attempt) {
                for (double& v : x) v = rng.uniform(-1.0, 1.0);
                forward(params, x, probe);
                min_abs_z = 1e9;
                for (const auto& pre : probe.pre)
                    for (double z : pre) min_abs_z = std::min(min_abs_z, std::abs(z));
            }
            REQUIRE(min_abs_z >= 1e-3);
            xs.push_back(std::move(x));
        }
        for (auto& x : xs)
            batch.push_back({x.data(), rng.uniform_int(cfg.output),
                             rng.uniform(-1.0, 1.0)});

        Grads grads;
        Workspace ws;
        grad(params, batch, grads, ws);

        const double h = 1e-5;
        for (std::size_t l = 0; l < params.layers.size(); ++l) {
            auto check_param = [&](std::vector<double>& theta,
                                   const std::vector<double>& g,
                                   std::size_t idx) {
                double saved = theta[idx];
                theta[idx] = saved + h;
                double up = loss_oracle(params, batch);
                theta[idx] = saved - h;
                double down = loss_oracle(params, batch);
                theta[idx] = saved;
                double fd = (up - down) / (2.0 * h);
                double scale = std::max({1.0, std::abs(fd), std::abs(g[idx])});
                REQUIRE(std::abs(fd - g[idx]) <= 1e-4 * scale);
            };
            for (std::size_t i = 0; i < params.layers[l].w.size(); ++i)
                check_param(params.layers[l].w, grads.layers[l].w, i);
            for (std::size_t i = 0; i < params.layers[l].b.size(); ++i)
                check_param(params.layers[l].b, grads.layers[l].b, i);
        }
    }
}

TEST_CASE("sgd update") {
    NetParams params;
    params.layers.push_back(Layer{1, 1, {1.0}, {0.5}});
    Grads grads;
    grads.layers.push_back(Layer{1, 1, {0.2}, {0.0}});

    SUBCASE("moves against the gradient") {
        sgd_update(params, grads, 0.001);
        CHECK(params.layers[0].w[0] == doctest::Approx(0.9998).epsilon(1e-12));
        CHECK(params.layers[0].b[0] == doctest::Approx(0.5));
    }
    SUBCASE("zero gradient or zero rate is a no-op") {
        NetParams before = params;
        sgd_update(params, grads, 0.0);
        CHECK(params == before);
        grads.layers[0].w[0] = 0.0;
        sgd_update(params, grads, 0.1);
        CHECK(params == before);
    }
}

TEST_CASE("one small sgd step does not increase the loss") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        NetConfig cfg = small_config(rng);
        NetParams params = NetParams::init(cfg, rng.next());
        std::vector<std::vector<double>> xs;
        std::vector<GradSample> batch;
        for (int i = 0; i < 8; ++i) {
            std::vector<double> x(cfg.input);
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
            xs.push_back(std::move(x));
        }
        for (auto& x : xs)
            batch.push_back({x.data(), rng.uniform_int(cfg.output),
                             rng.uniform(-1.0, 1.0)});

        Grads grads;
        Workspace ws;
        double before = grad(params, batch, grads, ws);
        sgd_update(params, grads, 1e-4);
        double after = loss_oracle(params, batch);
        CHECK(after <= before + 1e-12);
    }
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    fs::path path = fs::temp_directory_path() /
                    ("mg_qnet_" + std::to_string(::getpid()) + ".bin");
    NetConfig cfg;
    cfg.hidden = {16, 8};
    NetParams params = NetParams::init(cfg, 77);
    save_checkpoint(path.string(), cfg, params);
    auto [cfg2, params2] = load_checkpoint(path.string());
    CHECK(cfg2.input == cfg.input);
    CHECK(cfg2.hidden == cfg.hidden);
    CHECK(cfg2.output == cfg.output);
    CHECK(cfg2.learning_rate == cfg.learning_rate);
    CHECK(params2 == params);
    fs::remove(path);

    CHECK_THROWS_AS(load_checkpoint("/nonexistent/qnet.bin"), std::runtime_error);
}
