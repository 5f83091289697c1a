#include "ltr/kernels.hpp"

namespace ltr::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void relu(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void sq_diff(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        out[i] = d * d;
    }
}

std::size_t argmax(const double* x, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] > x[best]) best = i;
    }
    return best;
}

}  // namespace ltr::kernels::scalar

namespace ltr::kernels {

const Backend& scalar_backend() {
    static const Backend b{
            "scalar", &scalar::dot,     &scalar::axpy,
            &scalar::relu, &scalar::sq_diff, &scalar::argmax,
    };
    return b;
}

}  // namespace ltr::kernels
