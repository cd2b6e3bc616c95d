#include "mg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace mg::kern {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void dense_forward_scalar(const double* w, const double* b, const double* x,
                          double* y, std::size_t out, std::size_t in) {
    for (std::size_t o = 0; o < out; ++o)
        y[o] = dot_scalar(w + o * in, x, in) + b[o];
}

void dense_backward_data_scalar(const double* w, const double* dy, double* dx,
                                std::size_t out, std::size_t in) {
    for (std::size_t i = 0; i < in; ++i) dx[i] = 0.0;
    for (std::size_t o = 0; o < out; ++o) {
        if (dy[o] == 0.0) continue;
        axpy_scalar(dy[o], w + o * in, dx, in);
    }
}

void dense_grad_acc_scalar(double* gw, double* gb, const double* dy,
                           const double* x, std::size_t out, std::size_t in) {
    for (std::size_t o = 0; o < out; ++o) {
        if (dy[o] == 0.0) continue;
        axpy_scalar(dy[o], x, gw + o * in, in);
        gb[o] += dy[o];
    }
}

void relu_forward_scalar(const double* z, double* h, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) h[i] = z[i] > 0.0 ? z[i] : 0.0;
}

void relu_backward_scalar(const double* z, const double* dh, double* dz,
                          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dz[i] = z[i] > 0.0 ? dh[i] : 0.0;
}

constexpr Kernels kScalar = {
    dot_scalar,
    axpy_scalar,
    dense_forward_scalar,
    dense_backward_data_scalar,
    dense_grad_acc_scalar,
    relu_forward_scalar,
    relu_backward_scalar,
    "scalar",
};

} // namespace

const Kernels& scalar() { return kScalar; }

// Defined in kernels_avx2.cpp; returns nullptr when AVX2 was not compiled
// in or the CPU lacks it.
const Kernels* avx2_impl();

const Kernels* avx2() { return avx2_impl(); }

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace {

const Kernels* pick_default() {
    if (const char* env = std::getenv("MG_KERNELS")) {
        std::string s(env);
        if (s == "scalar") return &kScalar;
        if (s == "avx2" && avx2_impl()) return avx2_impl();
        // Unknown or unavailable request in the environment falls through
        // to auto selection rather than aborting a run.
    }
    if (const Kernels* k = avx2_impl()) return k;
    return &kScalar;
}

std::atomic<const Kernels*> g_active{nullptr};

} // namespace

const Kernels& active() {
    const Kernels* k = g_active.load(std::memory_order_acquire);
    if (!k) {
        k = pick_default();
        g_active.store(k, std::memory_order_release);
    }
    return *k;
}

void select(const std::string& name) {
    if (name == "scalar") {
        g_active.store(&kScalar, std::memory_order_release);
    } else if (name == "avx2") {
        const Kernels* k = avx2_impl();
        if (!k) throw std::runtime_error("kernels: avx2 backend unavailable on this host");
        g_active.store(k, std::memory_order_release);
    } else if (name == "auto") {
        g_active.store(pick_default(), std::memory_order_release);
    } else {
        throw std::runtime_error("kernels: unknown backend '" + name + "'");
    }
}

std::size_t max_index(const double* x, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] > x[best]) best = i;
    return best;
}

} // namespace mg::kern
