#ifndef SPHERELIFT_SOLVER_HPP
#define SPHERELIFT_SOLVER_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherelift/types.hpp"

namespace spherelift {

// beta * tr(A S) + 0.5 * logdet(S); throws NotPositiveDefinite.
double objective(const ElliptopeMatrix& S, const InteractionMatrix& A, double beta);

// S(lambda) = (Diag(lambda) - 2 beta A)^{-1}. The multipliers must keep
// Diag(lambda) - 2 beta A strictly positive definite.
Mat dual_to_primal(const std::vector<double>& lambda, const InteractionMatrix& A, double beta);

struct SolveOptions {
    double tol = 1e-10;   // on max |diag(S) - 1|
    int max_iter = 200;
    std::optional<std::vector<double>> lambda0;  // warm / multi-start initialization
};

struct SolveReport {
    double q_star = 0.0;
    ElliptopeMatrix S_star;
    CholeskyFactor R_star;
    std::vector<double> lambda;
    int iterations = 0;
    double residual = 0.0;  // max |diag(S) - 1| before the diagonal snap
    bool converged = false;

    std::string to_json() const;
};

// Maximize beta*tr(AS) + 0.5*logdet(S) over correlation matrices by damped
// Newton on the k-dimensional dual root-find diag(S(lambda)) = 1. Returns a
// report with converged = false when max_iter runs out; throws
// LineSearchStalled when no acceptable step exists.
SolveReport solve_regularized(const InteractionMatrix& A, double beta, SolveOptions opts = {});

// Upper-triangular R with positive diagonal and R^T R = S.
CholeskyFactor cholesky_upper(const ElliptopeMatrix& S);

struct MaxcutSweep {
    std::vector<double> betas;
    std::vector<double> values;      // tr(A S*_beta), nondecreasing along the schedule
    std::vector<double> bound_gaps;  // (q_ref - tr A + (k/2) ln beta)/beta, NaN without q_ref
};

// Solve along an ascending schedule of beta >= 1, warm-starting each solve
// from the previous multipliers. q_ref, when known (e.g. closed form for
// 2x2), fills in the regularization-gap envelope per entry.
MaxcutSweep solve_maxcut_limit(const InteractionMatrix& A, std::span<const double> beta_schedule,
                               std::optional<double> q_ref = std::nullopt,
                               const SolveOptions& opts = {});

}  // namespace spherelift

#endif
