#include "spherelift/sampler.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "spherelift/densities.hpp"
#include "spherelift/errors.hpp"
#include "spherelift/kernels.hpp"

namespace spherelift {

ColMat haar_stiefel(int n, int k, RngStream& rng) {
    if (n < k || k < 1)
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "haar_stiefel requires n >= k >= 1");
    const auto& ops = kernels::active();

    for (int attempt = 0; attempt < 2; ++attempt) {
        ColMat Q(n, k);
        rng.normal_fill({Q.data().data(), Q.data().size()});

        bool ok = true;
        for (int j = 0; j < k && ok; ++j) {
            auto v = Q.col(j);
            // modified Gram-Schmidt against the already-orthonormal columns
            for (int i = 0; i < j; ++i) {
                auto qi = Q.col(i);
                const double r = ops.dot(qi.data(), v.data(), v.size());
                ops.axpy(-r, qi.data(), v.data(), v.size());
            }
            const double nrm = std::sqrt(ops.dot(v.data(), v.data(), v.size()));
            if (!(nrm > 1e-100)) {
                ok = false;  // astronomically unlikely; refill and retry once
                break;
            }
            const double inv = 1.0 / nrm;
            for (double& x : v) x *= inv;
        }
        if (ok) return Q;
    }
    throw RankDeficient("Gaussian fill produced rank-deficient columns twice");
}

CholeskyFactor assemble_R(const UpperREntries& U) {
    const int k = U.k();
    Mat R(k, k);
    for (int j = 0; j < k; ++j) {
        const double sq = U.column_strict_sq(j);
        if (sq >= 1.0)
            throw OutOfSupport("column " + std::to_string(j) +
                               " of the factor entries has squared sum >= 1");
        for (int i = 0; i < j; ++i) R(i, j) = U.at(i, j);
        R(j, j) = std::sqrt(1.0 - sq);
    }
    return CholeskyFactor(std::move(R));
}

namespace {

// Redraw R[row, col] from its conditional given everything else. The working
// upper-triangular matrix R carries reconstructed diagonals and is updated in
// place. Returns false when the feasible interval has collapsed.
bool gibbs_update_coord(Mat& R, int row, int col, const ModelParams& params, RngStream& rng,
                        std::vector<double>& t_buf, std::vector<double>& g_buf,
                        std::vector<double>& p_buf) {
    const int k = params.k();
    const double nd = static_cast<double>(params.n);

    double rho_sq = 1.0;
    for (int i = 0; i < col; ++i)
        if (i != row) rho_sq -= R(i, col) * R(i, col);
    if (rho_sq <= 0.0) return false;
    const double rho = std::sqrt(rho_sq);
    if (rho <= 1e-12) return false;

    // conditional log density along t = R[row, col], with u = R[col, col]:
    //   a1*t + a2*sqrt(rho^2 - t^2) + (n-col-2)/2 * ln(rho^2 - t^2)
    // a1 collects couplings of column `col` against row `row` of the other
    // columns, a2 those against row `col` of the columns to the right.
    double a1 = 0.0, a2 = 0.0;
    for (int m = 0; m < k; ++m) {
        if (m == col) continue;
        if (row <= m) a1 += params.A(m, col) * R(row, m);
        if (m > col) a2 += params.A(m, col) * R(col, m);
    }
    const double bn2 = 2.0 * params.beta * nd;

    kernels::GridCoeffs c;
    c.lin = bn2 * a1;
    c.srt = bn2 * a2;
    c.h = 0.5 * (nd - (col + 1) - 1.0);
    c.w0 = rho_sq;

    const auto& ops = kernels::active();
    const size_t m = t_buf.size();
    const double step = 2.0 * rho / static_cast<double>(m);
    for (size_t i = 0; i < m; ++i) t_buf[i] = -rho + (i + 0.5) * step;

    ops.grid_logpdf(t_buf.data(), g_buf.data(), m, c);
    const double gmax = ops.reduce_max(g_buf.data(), m);
    ops.exp_shift(g_buf.data(), p_buf.data(), m, gmax);

    // trapezoid CDF over the nodes, inverted by linear interpolation
    double cum = 0.0;
    g_buf[0] = 0.0;  // reuse as the CDF buffer
    for (size_t i = 1; i < m; ++i) {
        cum += 0.5 * (p_buf[i - 1] + p_buf[i]);
        g_buf[i] = cum;
    }
    const double target = rng.uniform01() * cum;

    size_t lo = 0, hi = m - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        (g_buf[mid] < target ? lo : hi) = mid;
    }
    const double seg = g_buf[hi] - g_buf[lo];
    const double frac = seg > 0.0 ? (target - g_buf[lo]) / seg : 0.5;
    const double t_new = t_buf[lo] + frac * step;

    R(row, col) = t_new;
    R(col, col) = std::sqrt(std::max(rho_sq - t_new * t_new, 0.0));
    return true;
}

Mat assemble_work_matrix(const UpperREntries& U) {
    const int k = U.k();
    Mat R(k, k);
    for (int j = 0; j < k; ++j) {
        const double sq = U.column_strict_sq(j);
        if (sq >= 1.0) throw OutOfSupport("Gibbs state left the support");
        for (int i = 0; i < j; ++i) R(i, j) = U.at(i, j);
        R(j, j) = std::sqrt(1.0 - sq);
    }
    return R;
}

SpinSample rotate_factor(const CholeskyFactor& R, long n, RngStream& rng) {
    const int k = R.k();
    const ColMat Q = haar_stiefel(static_cast<int>(n), k, rng);
    const auto& ops = kernels::active();
    ColMat X(static_cast<int>(n), k);
    for (int j = 0; j < k; ++j) {
        auto xj = X.col(j);
        for (int i = 0; i <= j; ++i)
            ops.axpy(R(i, j), Q.col(i).data(), xj.data(), xj.size());
    }
    return SpinSample(std::move(X));
}

}  // namespace

SpinSample approx_sample(const CholeskyFactor& R_star, int n, RngStream& rng) {
    if (n <= R_star.k())
        throw ValidationError(ValidationError::Kind::NotOverparameterized,
                              "approx_sample requires n > k");
    return rotate_factor(R_star, n, rng);
}

void gibbs_sweep(GibbsState& state, const ModelParams& params, RngStream& rng, int grid_size) {
    const int k = params.k();
    if (state.U.k() != k) throw DimensionMismatch("Gibbs state does not match the model size");
    if (grid_size < 16)
        throw ValidationError(ValidationError::Kind::BadParameter, "grid_size must be >= 16");

    Mat R = assemble_work_matrix(state.U);
    std::vector<double> t_buf(grid_size), g_buf(grid_size), p_buf(grid_size);

    for (int i = 0; i < k - 1; ++i)
        for (int j = i + 1; j < k; ++j)
            if (!gibbs_update_coord(R, i, j, params, rng, t_buf, g_buf, p_buf))
                ++state.degenerate_skips;

    for (int i = 0; i < k - 1; ++i)
        for (int j = i + 1; j < k; ++j) state.U.set(i, j, R(i, j));

    ++state.sweep_count;
    state.last_log_density = log_density_U(state.U, params);
}

GibbsChain::GibbsChain(ModelParams params, ChainOptions opts, RngStream rng)
    : params_(std::move(params)),
      opts_(opts),
      rng_(rng),
      state_(opts.init ? *opts.init : UpperREntries::zeros(params_.k())) {
    if (!state_.U.in_support()) throw OutOfSupport("initial Gibbs state is outside the support");
}

void GibbsChain::burn_in() {
    if (burned_) return;
    for (int s = 0; s < opts_.burn_in; ++s) gibbs_sweep(state_, params_, rng_, opts_.grid_size);
    burned_ = true;
}

CholeskyFactor GibbsChain::next_R() {
    burn_in();
    for (int s = 0; s < std::max(opts_.thin, 1); ++s)
        gibbs_sweep(state_, params_, rng_, opts_.grid_size);
    return assemble_R(state_.U);
}

SpinSample GibbsChain::next_sample() {
    const CholeskyFactor R = next_R();
    return rotate_factor(R, params_.n, rng_);
}

SpinSample exact_sample(const ModelParams& params, const ChainOptions& opts, RngStream& rng) {
    GibbsState st(opts.init ? *opts.init : UpperREntries::zeros(params.k()));
    if (!st.U.in_support()) throw OutOfSupport("initial Gibbs state is outside the support");
    for (int s = 0; s < opts.burn_in; ++s) gibbs_sweep(st, params, rng, opts.grid_size);
    for (int s = 0; s < std::max(opts.thin, 1); ++s) gibbs_sweep(st, params, rng, opts.grid_size);
    return rotate_factor(assemble_R(st.U), params.n, rng);
}

std::vector<int> hyperplane_round(const SpinSample& X, RngStream& rng) {
    const auto& ops = kernels::active();
    std::vector<double> v(static_cast<size_t>(X.n()));
    rng.normal_fill(v);

    std::vector<int> signs(X.k());
    for (int j = 0; j < X.k(); ++j) {
        const double ip = ops.dot(v.data(), X.col(j).data(), v.size());
        signs[j] = ip < 0.0 ? -1 : +1;  // measure-zero tie goes to +1
    }
    return signs;
}

}  // namespace spherelift
