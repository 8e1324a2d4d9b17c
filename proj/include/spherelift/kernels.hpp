#ifndef SPHERELIFT_KERNELS_HPP
#define SPHERELIFT_KERNELS_HPP

#include <cstddef>
#include <string>

namespace spherelift::kernels {

// Coefficients for the fused grid evaluation of the 1D log densities that
// show up everywhere in this project:
//
//     out[i] = lin*t + srt*sqrt(w) + h*log(w),   w = w0 + w1*t - t^2,
//
// with out[i] = -inf wherever w <= 0 (outside the support). Covers the
// single-coordinate conditional of the triangular-factor density
// (w0 = rho^2, w1 = 0), the k=2 correlation density (w0 = 1) and the k=3
// determinant slice (w1 = 2*s12*s13).
struct GridCoeffs {
    double lin = 0.0;
    double srt = 0.0;
    double h = 0.0;
    double w0 = 1.0;
    double w1 = 0.0;
};

// One table of function pointers per instruction set. Inputs must be free of
// NaN; -inf is allowed where noted (log-space "zero" weights).
struct Ops {
    const char* name;

    double (*dot)(const double* x, const double* y, size_t n);
    // y += a*x
    void (*axpy)(double a, const double* x, double* y, size_t n);
    // max over n >= 1 entries (-inf entries allowed)
    double (*reduce_max)(const double* x, size_t n);
    // sum_i exp(x[i] - shift); -inf entries contribute 0
    double (*sum_exp)(const double* x, size_t n, double shift);
    // sum_i w[i] * exp(x[i] - shift)
    double (*dot_exp)(const double* w, const double* x, size_t n, double shift);
    // out[i] = exp(x[i] - shift)
    void (*exp_shift)(const double* x, double* out, size_t n, double shift);
    // fused 1D log-density grid, see GridCoeffs
    void (*grid_logpdf)(const double* t, double* out, size_t n, const GridCoeffs& c);
};

const Ops& scalar_ops();

// Null when the binary was built without AVX2 support or the CPU lacks it.
const Ops* avx2_ops();

// Runtime-selected table: AVX2 when available, scalar otherwise. The
// SPHERELIFT_KERNELS environment variable ("scalar" or "avx2") overrides
// the automatic choice; it is read once on first use.
const Ops& active();

// Test hook: force a table (by name) for the rest of the process.
// Returns false if the requested table is unavailable.
bool force(const std::string& name);

}  // namespace spherelift::kernels

#endif
