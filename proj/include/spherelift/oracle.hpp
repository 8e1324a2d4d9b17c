#ifndef SPHERELIFT_ORACLE_HPP
#define SPHERELIFT_ORACLE_HPP

#include <vector>

#include "spherelift/types.hpp"

namespace spherelift::oracle {

// Desk-scale ground truth, kept independent of the solver and samplers:
// closed forms and brute-force quadrature at k = 2, grid quadrature at k = 3.

struct QuadratureSpec {
    int points = 20001;  // odd, >= 1001; uniform nodes inset half a step from the endpoints
};

// The unique s in (-1,1) with 2*beta*a = s/(1-s^2), by bisection to 1e-14.
double k2_stationary(double a, double beta);

// ln(Z_n(beta)/Z_n(0)) for a k=2 model, reduced to a 1D integral over the
// off-diagonal correlation and evaluated in log space (stable to n ~ 1e5).
double k2_log_partition_ratio(const ModelParams& params, const QuadratureSpec& spec = {});

// E[s] under the k=2 correlation density.
double k2_moment(const ModelParams& params, const QuadratureSpec& spec = {});

// Normalized CDF of the k=2 correlation density on the quadrature nodes;
// evaluate() interpolates linearly between nodes.
struct K2Cdf {
    std::vector<double> nodes;
    std::vector<double> cdf;
    double operator()(double s) const;
};
K2Cdf k2_cdf(const ModelParams& params, const QuadratureSpec& spec = {});

struct K3Moments {
    Mat E_S;           // 3x3, unit diagonal, expected correlations elsewhere
    double log_ratio;  // ln(Z_n(beta)/Z_n(0)) over the same grid
};

// Brute-force quadrature of the k=3 correlation density over the cube
// (-1,1)^3, with points outside the positive definite region contributing
// log-density -inf. Guarded: n <= 200 and grid <= 201 per axis.
K3Moments k3_grid_moments(const ModelParams& params, int grid = 201);

// 1 - arccos(rho)/pi: probability a random hyperplane assigns the same sign
// to two unit vectors with inner product rho.
double grothendieck_prob(double rho);

}  // namespace spherelift::oracle

#endif
