#pragma once
// Minimal feed-forward Q-network: rectifier hidden layers, linear output,
// analytic gradients for the masked quadratic TD loss, and plain SGD.
// Double precision throughout so gradient checks are reproducible.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mg {

struct NetConfig {
    int input = 3;
    std::vector<int> hidden{64, 64};
    int output = 25;
    double learning_rate = 0.001;

    void validate() const; // throws std::invalid_argument
};

struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> w; // out*in, row-major
    std::vector<double> b; // out

    friend bool operator==(const Layer&, const Layer&) = default;
};

struct NetParams {
    std::vector<Layer> layers;

    // Weights from a normal with variance 2/fan_in, biases zero.
    static NetParams init(const NetConfig& cfg, std::uint64_t seed);

    int input_size() const { return layers.front().in; }
    int output_size() const { return layers.back().out; }

    friend bool operator==(const NetParams&, const NetParams&) = default;
};

// Scratch buffers reused across forward/backward calls.
struct Workspace {
    std::vector<std::vector<double>> pre;  // z per layer
    std::vector<std::vector<double>> act;  // h per layer (last layer linear)
    std::vector<std::vector<double>> delta;

    void fit(const NetParams& params);
};

// Q-values for one observation; the returned span points into ws and is
// valid until the next call with the same workspace.
std::span<const double> forward(const NetParams& params,
                                std::span<const double> x, Workspace& ws);

// Allocating convenience wrapper.
std::vector<double> forward(const NetParams& params, std::span<const double> x);

struct GradSample {
    const double* x = nullptr; // input_size() features
    int action = 0;
    double target = 0.0;
};

// Gradient accumulator, same shapes as the parameters.
struct Grads {
    std::vector<Layer> layers;

    static Grads zeros_like(const NetParams& params);
    void reset();
};

// Mean squared TD loss over the batch, (1/K) sum (Q(x, a) - y)^2, with
// gradient flowing only through each sample's taken action. Overwrites
// grads and returns the loss.
double grad(const NetParams& params, std::span<const GradSample> batch,
            Grads& grads, Workspace& ws);

// theta <- theta - lr * g
void sgd_update(NetParams& params, const Grads& grads, double learning_rate);

// Versioned binary container; save/load round-trips bit-exactly.
void save_checkpoint(const std::string& path, const NetConfig& cfg,
                     const NetParams& params);
std::pair<NetConfig, NetParams> load_checkpoint(const std::string& path);

} // namespace mg
