#include "mg/qnet.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mg/kernels.hpp"
#include "mg/rng.hpp"

namespace mg {

void NetConfig::validate() const {
    if (input < 1 || output < 1)
        throw std::invalid_argument("qnet: input and output sizes must be at least 1");
    for (int h : hidden)
        if (h < 1)
            throw std::invalid_argument("qnet: hidden sizes must be at least 1");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("qnet: learning rate must be positive");
}

NetParams NetParams::init(const NetConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(mix_seed(seed, 0x1417));

    std::vector<int> sizes;
    sizes.push_back(cfg.input);
    for (int h : cfg.hidden) sizes.push_back(h);
    sizes.push_back(cfg.output);

    NetParams params;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer layer;
        layer.in = sizes[l];
        layer.out = sizes[l + 1];
        layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.b.assign(layer.out, 0.0);
        double stddev = std::sqrt(2.0 / static_cast<double>(layer.in));
        for (double& w : layer.w) w = stddev * rng.normal();
        params.layers.push_back(std::move(layer));
    }
    return params;
}

void Workspace::fit(const NetParams& params) {
    std::size_t n = params.layers.size();
    pre.resize(n);
    act.resize(n);
    delta.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        pre[l].resize(params.layers[l].out);
        act[l].resize(params.layers[l].out);
        delta[l].resize(params.layers[l].out);
    }
}

std::span<const double> forward(const NetParams& params,
                                std::span<const double> x, Workspace& ws) {
    if (static_cast<int>(x.size()) != params.input_size())
        throw std::logic_error("qnet: input size mismatch");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::logic_error("qnet: non-finite network input");

    ws.fit(params);
    const kern::Kernels& k = kern::active();
    const std::size_t last = params.layers.size() - 1;

    const double* input = x.data();
    for (std::size_t l = 0; l <= last; ++l) {
        const Layer& layer = params.layers[l];
        k.dense_forward(layer.w.data(), layer.b.data(), input, ws.pre[l].data(),
                        layer.out, layer.in);
        if (l < last) {
            k.relu_forward(ws.pre[l].data(), ws.act[l].data(), layer.out);
            input = ws.act[l].data();
        }
    }
    // Linear output layer.
    ws.act[last] = ws.pre[last];
    return {ws.act[last].data(), ws.act[last].size()};
}

std::vector<double> forward(const NetParams& params, std::span<const double> x) {
    Workspace ws;
    auto out = forward(params, x, ws);
    return {out.begin(), out.end()};
}

Grads Grads::zeros_like(const NetParams& params) {
    Grads g;
    for (const Layer& layer : params.layers) {
        Layer zero;
        zero.in = layer.in;
        zero.out = layer.out;
        zero.w.assign(layer.w.size(), 0.0);
        zero.b.assign(layer.b.size(), 0.0);
        g.layers.push_back(std::move(zero));
    }
    return g;
}

void Grads::reset() {
    for (Layer& layer : layers) {
        std::fill(layer.w.begin(), layer.w.end(), 0.0);
        std::fill(layer.b.begin(), layer.b.end(), 0.0);
    }
}

double grad(const NetParams& params, std::span<const GradSample> batch,
            Grads& grads, Workspace& ws) {
    if (batch.empty())
        throw std::logic_error("qnet: empty gradient batch");
    bool shapes_match = grads.layers.size() == params.layers.size();
    for (std::size_t l = 0; shapes_match && l < params.layers.size(); ++l)
        shapes_match = grads.layers[l].in == params.layers[l].in &&
                       grads.layers[l].out == params.layers[l].out;
    if (!shapes_match)
        grads = Grads::zeros_like(params);
    else
        grads.reset();

    const kern::Kernels& k = kern::active();
    const std::size_t last = params.layers.size() - 1;
    const double inv_k = 1.0 / static_cast<double>(batch.size());

    double loss = 0.0;
    for (const GradSample& sample : batch) {
        std::span<const double> x{sample.x,
                                  static_cast<std::size_t>(params.input_size())};
        std::span<const double> q = forward(params, x, ws);

        double diff = q[sample.action] - sample.target;
        loss += diff * diff * inv_k;
        double dq = 2.0 * diff * inv_k; // d(mean loss)/dQ(x, a)

        // Output layer: the loss touches a single row.
        {
            const Layer& layer = params.layers[last];
            Layer& g = grads.layers[last];
            const double* h_prev = last > 0 ? ws.act[last - 1].data() : sample.x;
            k.axpy(dq, h_prev, g.w.data() + static_cast<std::size_t>(sample.action) * layer.in,
                   layer.in);
            g.b[sample.action] += dq;
            if (last > 0) {
                std::vector<double>& dh = ws.delta[last - 1];
                std::fill(dh.begin(), dh.end(), 0.0);
                k.axpy(dq, layer.w.data() + static_cast<std::size_t>(sample.action) * layer.in,
                       dh.data(), layer.in);
            }
        }

        for (std::size_t l = last; l-- > 0;) {
            const Layer& layer = params.layers[l];
            Layer& g = grads.layers[l];
            std::vector<double>& dh = ws.delta[l];
            // Rectifier gate, in place.
            k.relu_backward(ws.pre[l].data(), dh.data(), dh.data(), layer.out);
            const double* input = l > 0 ? ws.act[l - 1].data() : sample.x;
            k.dense_grad_acc(g.w.data(), g.b.data(), dh.data(), input,
                             layer.out, layer.in);
            if (l > 0)
                k.dense_backward_data(layer.w.data(), dh.data(),
                                      ws.delta[l - 1].data(), layer.out, layer.in);
        }
    }
    return loss;
}

void sgd_update(NetParams& params, const Grads& grads, double learning_rate) {
    if (grads.layers.size() != params.layers.size())
        throw std::logic_error("qnet: gradient/parameter shape mismatch");
    const kern::Kernels& k = kern::active();
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Layer& p = params.layers[l];
        const Layer& g = grads.layers[l];
        if (g.w.size() != p.w.size() || g.b.size() != p.b.size())
            throw std::logic_error("qnet: gradient/parameter shape mismatch");
        k.axpy(-learning_rate, g.w.data(), p.w.data(), p.w.size());
        k.axpy(-learning_rate, g.b.data(), p.b.data(), p.b.size());
    }
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'M', 'G', 'Q', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void get(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
}

} // namespace

void save_checkpoint(const std::string& path, const NetConfig& cfg,
                     const NetParams& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("qnet: cannot write " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(cfg.input));
    put(out, static_cast<std::uint32_t>(cfg.hidden.size()));
    for (int h : cfg.hidden) put(out, static_cast<std::uint32_t>(h));
    put(out, static_cast<std::uint32_t>(cfg.output));
    put(out, cfg.learning_rate);
    put(out, static_cast<std::uint32_t>(params.layers.size()));
    for (const Layer& layer : params.layers) {
        put(out, static_cast<std::uint32_t>(layer.in));
        put(out, static_cast<std::uint32_t>(layer.out));
        out.write(reinterpret_cast<const char*>(layer.w.data()),
                  static_cast<std::streamsize>(layer.w.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(layer.b.data()),
                  static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
    }
    if (!out)
        throw std::runtime_error("qnet: write failed for " + path);
}

std::pair<NetConfig, NetParams> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("qnet: cannot open " + path);
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("qnet: " + path + " is not a checkpoint");
    std::uint32_t version = 0;
    get(in, version);
    if (version != kVersion)
        throw std::runtime_error("qnet: unsupported checkpoint version " +
                                 std::to_string(version));

    NetConfig cfg;
    std::uint32_t input = 0, n_hidden = 0, output = 0, n_layers = 0;
    get(in, input);
    get(in, n_hidden);
    cfg.hidden.clear();
    for (std::uint32_t i = 0; i < n_hidden; ++i) {
        std::uint32_t h = 0;
        get(in, h);
        cfg.hidden.push_back(static_cast<int>(h));
    }
    get(in, output);
    get(in, cfg.learning_rate);
    cfg.input = static_cast<int>(input);
    cfg.output = static_cast<int>(output);

    NetParams params;
    get(in, n_layers);
    for (std::uint32_t l = 0; l < n_layers; ++l) {
        Layer layer;
        std::uint32_t lin = 0, lout = 0;
        get(in, lin);
        get(in, lout);
        layer.in = static_cast<int>(lin);
        layer.out = static_cast<int>(lout);
        layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.b.resize(layer.out);
        in.read(reinterpret_cast<char*>(layer.w.data()),
                static_cast<std::streamsize>(layer.w.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(layer.b.data()),
                static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
        params.layers.push_back(std::move(layer));
    }
    if (!in)
        throw std::runtime_error("qnet: truncated checkpoint " + path);
    return {cfg, params};
}

} // namespace mg
