#pragma once
// Dense-layer math kernels with runtime ISA dispatch.
//
// The training loop spends almost all of its time in a handful of flat
// array operations (dot products, axpy accumulation, rectifier masks)
// over row-major weight matrices. Each operation has a scalar reference
// implementation and, on x86-64 with AVX2+FMA, a vectorized variant.
// The active backend is picked once at startup and can be forced for
// equivalence testing. Scalar and SIMD variants associate reductions
// differently, so they agree to rounding, not bit-for-bit.

#include <cstddef>
#include <string>

namespace mg::kern {

struct Kernels {
    // dot(a, b, n) = sum a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = W x + b; W is out*in row-major
    void (*dense_forward)(const double* w, const double* b, const double* x,
                          double* y, std::size_t out, std::size_t in);
    // dx = W^T dy (dx overwritten); rows with dy[o] == 0 are skipped
    void (*dense_backward_data)(const double* w, const double* dy, double* dx,
                                std::size_t out, std::size_t in);
    // gw += dy (outer) x, gb += dy; rows with dy[o] == 0 are skipped
    void (*dense_grad_acc)(double* gw, double* gb, const double* dy,
                           const double* x, std::size_t out, std::size_t in);
    // h[i] = max(z[i], 0)
    void (*relu_forward)(const double* z, double* h, std::size_t n);
    // dz[i] = z[i] > 0 ? dh[i] : 0; dz may alias dh
    void (*relu_backward)(const double* z, const double* dh, double* dz,
                          std::size_t n);
    const char* name;
};

// Scalar reference backend; always available.
const Kernels& scalar();

// AVX2+FMA backend, or nullptr when not compiled in / not supported by
// the host CPU.
const Kernels* avx2();

// Backend used by the rest of the library. Defaults to the best
// supported backend; MG_KERNELS=scalar|avx2 in the environment overrides
// the default at first use.
const Kernels& active();

// Force a backend ("scalar", "avx2", "auto"). Throws std::runtime_error
// for unknown or unavailable names. Intended for tests and benchmarks.
void select(const std::string& name);

// Index of the maximum element, lowest index on ties. Deliberately not
// per-backend: tie-breaking must be identical everywhere.
std::size_t max_index(const double* x, std::size_t n);

} // namespace mg::kern
