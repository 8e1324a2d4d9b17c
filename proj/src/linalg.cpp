#include "spherelift/linalg.hpp"

#include <cmath>

#include "spherelift/errors.hpp"

namespace spherelift {

bool try_chol_lower(const Mat& S, Mat& L) {
    const int k = S.rows();
    L = Mat(k, k);
    for (int j = 0; j < k; ++j) {
        double d = S(j, j);
        for (int p = 0; p < j; ++p) d -= L(j, p) * L(j, p);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (int i = j + 1; i < k; ++i) {
            double s = S(i, j);
            for (int p = 0; p < j; ++p) s -= L(i, p) * L(j, p);
            L(i, j) = s / ljj;
        }
    }
    return true;
}

Mat chol_lower(const Mat& S) {
    Mat L;
    if (!try_chol_lower(S, L))
        throw NotPositiveDefinite("Cholesky failed: matrix is not strictly positive definite");
    return L;
}

double logdet_from_chol(const Mat& L) {
    double s = 0.0;
    for (int j = 0; j < L.rows(); ++j) s += std::log(L(j, j));
    return 2.0 * s;
}

double logdet_spd(const Mat& S) { return logdet_from_chol(chol_lower(S)); }

std::vector<double> chol_solve(const Mat& L, const std::vector<double>& b) {
    const int k = L.rows();
    std::vector<double> y(b);
    for (int i = 0; i < k; ++i) {
        double s = y[i];
        for (int p = 0; p < i; ++p) s -= L(i, p) * y[p];
        y[i] = s / L(i, i);
    }
    for (int i = k - 1; i >= 0; --i) {
        double s = y[i];
        for (int p = i + 1; p < k; ++p) s -= L(p, i) * y[p];
        y[i] = s / L(i, i);
    }
    return y;
}

Mat spd_inverse(const Mat& S) {
    const int k = S.rows();
    const Mat L = chol_lower(S);
    Mat inv(k, k);
    std::vector<double> e(k, 0.0);
    for (int j = 0; j < k; ++j) {
        e[j] = 1.0;
        std::vector<double> x = chol_solve(L, e);
        for (int i = 0; i < k; ++i) inv(i, j) = x[i];
        e[j] = 0.0;
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = inv(j, i) = v;
        }
    return inv;
}

double sym_eig_min(const Mat& S) {
    const int k = S.rows();
    if (k == 1) return S(0, 0);
    Mat a = S;

    // cyclic Jacobi sweeps until the off-diagonal mass is negligible
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;

        for (int p = 0; p < k - 1; ++p) {
            for (int q = p + 1; q < k; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < k; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < k; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }

    double mn = a(0, 0);
    for (int i = 1; i < k; ++i) mn = std::min(mn, a(i, i));
    return mn;
}

}  // namespace spherelift
