#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ltr::kernels {

// Function table for the data-parallel inner loops. One scalar reference
// implementation always exists; SIMD variants are registered per platform
// and selected at runtime (see select/active below).
struct Backend {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out[i] = max(0, x[i])
    void (*relu)(const double* x, double* out, std::size_t n);
    // out[i] = (a[i] - b[i])^2
    void (*sq_diff)(const double* a, const double* b, double* out, std::size_t n);
    // index of the maximum entry, lowest index on ties; n must be >= 1
    std::size_t (*argmax)(const double* x, std::size_t n);
};

// Scalar reference kernels. These define the semantics every SIMD variant
// is equivalence-tested against.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void relu(const double* x, double* out, std::size_t n);
void sq_diff(const double* a, const double* b, double* out, std::size_t n);
std::size_t argmax(const double* x, std::size_t n);
}  // namespace scalar

const Backend& scalar_backend();

// AVX2+FMA variants. Compiled only on x86-64; returns nullptr when the
// binary lacks them or the running CPU does not support AVX2.
const Backend* avx2_backend();

// Currently active backend. Defaults to the widest variant the CPU
// supports; the LTR_KERNELS environment variable ("scalar" or "avx2")
// overrides the default.
const Backend& active();

// Force a backend by name. Returns false (and leaves the selection
// unchanged) if the named backend is unavailable.
bool select(const std::string& name);

std::vector<std::string> available();

inline double dot(const double* a, const double* b, std::size_t n) {
    return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    active().axpy(alpha, x, y, n);
}
inline void relu(const double* x, double* out, std::size_t n) {
    active().relu(x, out, n);
}
inline void sq_diff(const double* a, const double* b, double* out, std::size_t n) {
    active().sq_diff(a, b, out, n);
}
inline std::size_t argmax(const double* x, std::size_t n) {
    return active().argmax(x, n);
}

}  // namespace ltr::kernels
