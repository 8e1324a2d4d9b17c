#include "spherelift/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spherelift/errors.hpp"
#include "spherelift/kernels.hpp"
#include "spherelift/parallel.hpp"

namespace spherelift::oracle {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_spec(const QuadratureSpec& spec) {
    if (spec.points < 1001 || spec.points % 2 == 0)
        throw DomainError("quadrature points must be odd and >= 1001");
}

std::vector<double> midpoint_nodes(double lo, double hi, int points) {
    std::vector<double> t(points);
    const double h = (hi - lo) / points;
    for (int i = 0; i < points; ++i) t[i] = lo + (i + 0.5) * h;
    return t;
}

// log densities on the nodes for the k=2 family: lin*s + h*ln(1-s^2),
// trapezoid end weights folded in as ln(1/2).
std::vector<double> k2_log_grid(const ModelParams& p, const std::vector<double>& nodes) {
    const auto& ops = kernels::active();
    std::vector<double> g(nodes.size());
    kernels::GridCoeffs c;
    c.lin = 2.0 * p.beta * static_cast<double>(p.n) * p.A(0, 1);
    c.h = 0.5 * (static_cast<double>(p.n) - 3.0);
    c.w0 = 1.0;
    ops.grid_logpdf(nodes.data(), g.data(), nodes.size(), c);
    g.front() += std::log(0.5);
    g.back() += std::log(0.5);
    return g;
}

void require_k(const ModelParams& p, int k, const char* what) {
    if (p.k() != k)
        throw DomainError(std::string(what) + " requires k = " + std::to_string(k));
}

}  // namespace

double k2_stationary(double a, double beta) {
    const double c = 2.0 * beta * a;
    if (c == 0.0) return 0.0;
    if (c < 0.0) return -k2_stationary(-a, beta);
    // root of f(s) = s - c(1-s^2) on (0,1); f(0) < 0 < f(1)
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        const double f = mid - c * (1.0 - mid * mid);
        (f < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double k2_log_partition_ratio(const ModelParams& params, const QuadratureSpec& spec) {
    require_k(params, 2, "k2_log_partition_ratio");
    check_spec(spec);
    const auto& ops = kernels::active();
    const auto nodes = midpoint_nodes(-1.0, 1.0, spec.points);

    const std::vector<double> g_beta = k2_log_grid(params, nodes);
    ModelParams free{params.A, 0.0, params.n};
    const std::vector<double> g_zero = k2_log_grid(free, nodes);

    const double m_beta = ops.reduce_max(g_beta.data(), g_beta.size());
    const double m_zero = ops.reduce_max(g_zero.data(), g_zero.size());
    const double lse_beta = m_beta + std::log(ops.sum_exp(g_beta.data(), g_beta.size(), m_beta));
    const double lse_zero = m_zero + std::log(ops.sum_exp(g_zero.data(), g_zero.size(), m_zero));

    // the diagonal coupling enters only as a constant factor; step widths cancel
    const double diag_term =
        params.beta * static_cast<double>(params.n) * (params.A(0, 0) + params.A(1, 1));
    return diag_term + lse_beta - lse_zero;
}

double k2_moment(const ModelParams& params, const QuadratureSpec& spec) {
    require_k(params, 2, "k2_moment");
    check_spec(spec);
    const auto& ops = kernels::active();
    const auto nodes = midpoint_nodes(-1.0, 1.0, spec.points);
    const std::vector<double> g = k2_log_grid(params, nodes);
    const double m = ops.reduce_max(g.data(), g.size());
    const double mass = ops.sum_exp(g.data(), g.size(), m);
    const double first = ops.dot_exp(nodes.data(), g.data(), g.size(), m);
    return first / mass;
}

double K2Cdf::operator()(double s) const {
    if (s <= nodes.front()) return 0.0;
    if (s >= nodes.back()) return 1.0;
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
    const size_t i = static_cast<size_t>(it - nodes.begin());
    const double frac = (s - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
    return cdf[i - 1] + frac * (cdf[i] - cdf[i - 1]);
}

K2Cdf k2_cdf(const ModelParams& params, const QuadratureSpec& spec) {
    require_k(params, 2, "k2_cdf");
    check_spec(spec);
    const auto& ops = kernels::active();
    K2Cdf out;
    out.nodes = midpoint_nodes(-1.0, 1.0, spec.points);

    kernels::GridCoeffs c;
    c.lin = 2.0 * params.beta * static_cast<double>(params.n) * params.A(0, 1);
    c.h = 0.5 * (static_cast<double>(params.n) - 3.0);
    std::vector<double> g(out.nodes.size());
    ops.grid_logpdf(out.nodes.data(), g.data(), out.nodes.size(), c);

    const double m = ops.reduce_max(g.data(), g.size());
    std::vector<double> p(g.size());
    ops.exp_shift(g.data(), p.data(), g.size(), m);

    out.cdf.assign(p.size(), 0.0);
    for (size_t i = 1; i < p.size(); ++i)
        out.cdf[i] = out.cdf[i - 1] + 0.5 * (p[i - 1] + p[i]);
    const double total = out.cdf.back();
    for (double& v : out.cdf) v /= total;
    return out;
}

K3Moments k3_grid_moments(const ModelParams& params, int grid) {
    require_k(params, 3, "k3_grid_moments");
    if (params.n > 200) throw CostGuard("k3 grid quadrature is limited to n <= 200");
    if (grid < 11 || grid > 201) throw CostGuard("k3 grid must have 11..201 points per axis");

    const auto nodes = midpoint_nodes(-1.0, 1.0, grid);
    const double nd = static_cast<double>(params.n);
    const double half_pow = 0.5 * (nd - 4.0);  // (n-k-1)/2 at k = 3

    // Row task for fixed (s12, s13): vectorized slice over s23, reduced to
    // a row max-log, mass, and first moments. Rows combine afterwards in
    // index order, so the result is independent of thread scheduling.
    struct Row {
        double logz = kNegInf;  // max-log of the row
        double mass = 0.0;      // sum exp(g - logz)
        double m23 = 0.0;       // sum s23 exp(g - logz)
    };

    auto run_pass = [&](double beta) {
        const size_t rows = static_cast<size_t>(grid) * grid;
        std::vector<Row> acc(rows);
        parallel_for(rows, [&](size_t r) {
            const auto& ops = kernels::active();
            const int i12 = static_cast<int>(r) / grid;
            const int i13 = static_cast<int>(r) % grid;
            const double s12 = nodes[i12];
            const double s13 = nodes[i13];

            kernels::GridCoeffs c;
            c.lin = 2.0 * beta * nd * params.A(1, 2);
            c.h = half_pow;
            c.w0 = 1.0 - s12 * s12 - s13 * s13;
            c.w1 = 2.0 * s12 * s13;

            std::vector<double> g(nodes.size());
            ops.grid_logpdf(nodes.data(), g.data(), nodes.size(), c);
            const double row_const = 2.0 * beta * nd * (params.A(0, 1) * s12 + params.A(0, 2) * s13);

            Row row;
            const double m = ops.reduce_max(g.data(), g.size());
            if (m == kNegInf) {
                acc[r] = row;  // entire slice outside the positive definite region
                return;
            }
            row.logz = m + row_const;
            row.mass = ops.sum_exp(g.data(), g.size(), m);
            row.m23 = ops.dot_exp(nodes.data(), g.data(), g.size(), m);
            acc[r] = row;
        });

        double gmax = kNegInf;
        for (const Row& row : acc)
            if (row.logz > gmax) gmax = row.logz;

        double z = 0.0, e12 = 0.0, e13 = 0.0, e23 = 0.0;
        for (size_t r = 0; r < rows; ++r) {
            const Row& row = acc[r];
            if (row.logz == kNegInf || row.mass == 0.0) continue;
            const double w = std::exp(row.logz - gmax) * row.mass;
            const int i12 = static_cast<int>(r) / grid;
            const int i13 = static_cast<int>(r) % grid;
            z += w;
            e12 += nodes[i12] * w;
            e13 += nodes[i13] * w;
            e23 += std::exp(row.logz - gmax) * row.m23;
        }
        struct PassResult {
            double log_mass, e12, e13, e23;
        };
        return PassResult{gmax + std::log(z), e12 / z, e13 / z, e23 / z};
    };

    const auto hot = run_pass(params.beta);
    const auto cold = run_pass(0.0);

    K3Moments out{Mat::identity(3), 0.0};
    out.E_S(0, 1) = out.E_S(1, 0) = hot.e12;
    out.E_S(0, 2) = out.E_S(2, 0) = hot.e13;
    out.E_S(1, 2) = out.E_S(2, 1) = hot.e23;
    const double diag_term = params.beta * nd * (params.A(0, 0) + params.A(1, 1) + params.A(2, 2));
    out.log_ratio = diag_term + hot.log_mass - cold.log_mass;
    return out;
}

double grothendieck_prob(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("rho must lie in [-1, 1]");
    return 1.0 - std::acos(rho) / std::numbers::pi;
}

}  // namespace spherelift::oracle
