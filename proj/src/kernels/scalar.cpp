// Reference kernels. Plain loops over std:: math; every SIMD variant is
// equivalence-tested against these.

#include <cmath>
#include <limits>

#include "spherelift/kernels.hpp"

namespace spherelift::kernels {
namespace {

double dot_scalar(const double* x, const double* y, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double reduce_max_scalar(const double* x, size_t n) {
    double m = x[0];
    for (size_t i = 1; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double sum_exp_scalar(const double* x, size_t n, double shift) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += std::exp(x[i] - shift);
    return s;
}

double dot_exp_scalar(const double* w, const double* x, size_t n, double shift) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += w[i] * std::exp(x[i] - shift);
    return s;
}

void exp_shift_scalar(const double* x, double* out, size_t n, double shift) {
    for (size_t i = 0; i < n; ++i) out[i] = std::exp(x[i] - shift);
}

void grid_logpdf_scalar(const double* t, double* out, size_t n, const GridCoeffs& c) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const double ti = t[i];
        const double w = c.w0 + c.w1 * ti - ti * ti;
        if (w <= 0.0) {
            out[i] = neg_inf;
            continue;
        }
        out[i] = c.lin * ti + c.srt * std::sqrt(w) + c.h * std::log(w);
    }
}

constexpr Ops kScalarOps = {
    "scalar",        dot_scalar,       axpy_scalar,        reduce_max_scalar,
    sum_exp_scalar,  dot_exp_scalar,   exp_shift_scalar,   grid_logpdf_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace spherelift::kernels
