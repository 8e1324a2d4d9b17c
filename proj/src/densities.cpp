#include "spherelift/densities.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spherelift/errors.hpp"
#include "spherelift/linalg.hpp"

namespace spherelift {

double log_norm_const(long n, int k) {
    if (k < 1 || n <= k)
        throw DomainError("log_norm_const requires n > k >= 1, got n = " + std::to_string(n) +
                          ", k = " + std::to_string(k));
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double ln_pi = std::log(std::numbers::pi);
    const double ln_2 = std::numbers::ln2;

    double ln_c = (kd * kd - kd) / 4.0 * ln_pi + nd * kd / 2.0 * ln_2;
    for (int j = 1; j <= k; ++j) ln_c += std::lgamma((nd - j + 1.0) / 2.0);

    return nd * kd / 2.0 * std::log(2.0 * std::numbers::pi) - ln_c;
}

double log_density_L(const LowerCorrelations& L, const ModelParams& params) {
    const int k = params.k();
    if (L.k() != k) throw DimensionMismatch("correlation entries do not match the coupling size");

    const Mat S = L.assemble_S();
    Mat chol;
    if (!try_chol_lower(S, chol))
        throw NotPositiveDefinite("assembled correlation matrix is not strictly positive definite");

    double tr = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) tr += S(i, j) * params.A(i, j);

    const double nd = static_cast<double>(params.n);
    return k * std::numbers::ln2 + log_norm_const(params.n, k) + params.beta * nd * tr +
           0.5 * (nd - k - 1.0) * logdet_from_chol(chol);
}

double log_density_U(const UpperREntries& U, const ModelParams& params) {
    const int k = params.k();
    if (U.k() != k) throw DimensionMismatch("factor entries do not match the coupling size");

    // reconstruct the diagonal and assemble the columns of R
    Mat R(k, k);
    double log_diag = 0.0;
    const double nd = static_cast<double>(params.n);
    for (int j = 0; j < k; ++j) {
        const double sq = U.column_strict_sq(j);
        if (sq >= 1.0)
            throw OutOfSupport("column " + std::to_string(j) +
                               " of the factor entries has squared sum >= 1");
        for (int i = 0; i < j; ++i) R(i, j) = U.at(i, j);
        const double rjj = std::sqrt(1.0 - sq);
        R(j, j) = rjj;
        log_diag += (nd - (j + 1) - 1.0) * std::log(rjj);  // exponent n - j - 1, 1-based j
    }

    // beta * n * tr(A R^T R); (R^T R)_{pq} = <column p, column q>
    double tr = 0.0;
    for (int p = 0; p < k; ++p) {
        tr += params.A(p, p);  // unit diagonal of R^T R
        for (int q = p + 1; q < k; ++q) {
            double ip = 0.0;
            for (int m = 0; m <= p; ++m) ip += R(m, p) * R(m, q);
            tr += 2.0 * params.A(p, q) * ip;
        }
    }

    return params.beta * nd * tr + log_diag;
}

double energy(const ElliptopeMatrix& S, const InteractionMatrix& A) {
    if (S.k() != A.k()) throw DimensionMismatch("correlation and coupling sizes differ");
    double tr = 0.0;
    for (int i = 0; i < S.k(); ++i)
        for (int j = 0; j < S.k(); ++j) tr += A(i, j) * S(i, j);
    return tr;
}

}  // namespace spherelift
