#include "spherelift/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "spherelift/errors.hpp"
#include "spherelift/linalg.hpp"

namespace spherelift {
namespace {

Mat dual_matrix(const std::vector<double>& lambda, const InteractionMatrix& A, double beta) {
    const int k = A.k();
    Mat M(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M(i, j) = -2.0 * beta * A(i, j);
    for (int i = 0; i < k; ++i) M(i, i) += lambda[i];
    return M;
}

// S = M^{-1} from the lower factor of M, symmetrized.
Mat primal_from_factor(const Mat& L) {
    const int k = L.rows();
    Mat S(k, k);
    std::vector<double> e(k, 0.0);
    for (int j = 0; j < k; ++j) {
        e[j] = 1.0;
        std::vector<double> col = chol_solve(L, e);
        for (int i = 0; i < k; ++i) S(i, j) = col[i];
        e[j] = 0.0;
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double v = 0.5 * (S(i, j) + S(j, i));
            S(i, j) = S(j, i) = v;
        }
    return S;
}

double residual_inf(const Mat& S) {
    double r = 0.0;
    for (int i = 0; i < S.rows(); ++i) r = std::max(r, std::fabs(S(i, i) - 1.0));
    return r;
}

}  // namespace

double objective(const ElliptopeMatrix& S, const InteractionMatrix& A, double beta) {
    if (S.k() != A.k()) throw DimensionMismatch("correlation and coupling sizes differ");
    double tr = 0.0;
    for (int i = 0; i < S.k(); ++i)
        for (int j = 0; j < S.k(); ++j) tr += A(i, j) * S(i, j);
    return beta * tr + 0.5 * logdet_spd(S.mat());
}

Mat dual_to_primal(const std::vector<double>& lambda, const InteractionMatrix& A, double beta) {
    if (static_cast<int>(lambda.size()) != A.k())
        throw DimensionMismatch("multiplier count does not match k");
    const Mat M = dual_matrix(lambda, A, beta);
    Mat L;
    if (!try_chol_lower(M, L))
        throw NotPositiveDefinite("Diag(lambda) - 2 beta A is not positive definite");
    return primal_from_factor(L);
}

SolveReport solve_regularized(const InteractionMatrix& A, double beta, SolveOptions opts) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ValidationError(ValidationError::Kind::BadParameter, "beta must be finite and >= 0");
    const int k = A.k();

    std::vector<double> lambda;
    if (opts.lambda0) {
        if (static_cast<int>(opts.lambda0->size()) != k)
            throw DimensionMismatch("lambda0 size does not match k");
        lambda = *opts.lambda0;
    } else {
        // diagonally dominant start: guaranteed positive definite
        lambda.assign(k, 0.0);
        for (int i = 0; i < k; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j < k; ++j) rowsum += std::fabs(A(i, j));
            lambda[i] = 2.0 * beta * rowsum + 1.0;
        }
    }

    Mat L;
    if (!try_chol_lower(dual_matrix(lambda, A, beta), L))
        throw NotPositiveDefinite("initial multipliers are infeasible");
    Mat S = primal_from_factor(L);
    double res = residual_inf(S);

    int iter = 0;
    while (res > opts.tol && iter < opts.max_iter) {
        ++iter;

        // Newton system: the Jacobian of diag(S(lambda)) - 1 is minus the
        // Hadamard square of S, so solve (S.S) delta = g and step by t*delta.
        Mat J(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) J(i, j) = S(i, j) * S(i, j);
        std::vector<double> g(k);
        for (int i = 0; i < k; ++i) g[i] = S(i, i) - 1.0;

        Mat JL;
        if (!try_chol_lower(J, JL))
            throw LineSearchStalled("Newton system lost positive definiteness");
        const std::vector<double> delta = chol_solve(JL, g);

        double t = 1.0;
        bool accepted = false;
        std::vector<double> cand(k);
        for (int halving = 0; halving <= 60; ++halving, t *= 0.5) {
            for (int i = 0; i < k; ++i) cand[i] = lambda[i] + t * delta[i];
            Mat Lc;
            if (!try_chol_lower(dual_matrix(cand, A, beta), Lc)) continue;
            Mat Sc = primal_from_factor(Lc);
            const double rc = residual_inf(Sc);
            if (rc <= res) {
                lambda.swap(cand);
                S = std::move(Sc);
                res = rc;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw LineSearchStalled("no step kept positive definiteness and the residual");
    }

    const bool converged = res <= opts.tol;

    // exact unit diagonal for the reported maximizer
    Mat S_snapped = S;
    for (int i = 0; i < k; ++i) S_snapped(i, i) = 1.0;

    ElliptopeMatrix S_star(std::move(S_snapped));
    CholeskyFactor R_star = cholesky_upper(S_star);
    const double q = objective(S_star, A, beta);

    return SolveReport{q, std::move(S_star), std::move(R_star), std::move(lambda),
                       iter, res, converged};
}

CholeskyFactor cholesky_upper(const ElliptopeMatrix& S) {
    Mat L;
    if (!try_chol_lower(S.mat(), L))
        throw NotPositiveDefinite("correlation matrix is not strictly positive definite");
    const int k = S.k();
    Mat R(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j) R(j, i) = L(i, j);
    return CholeskyFactor(std::move(R));
}

MaxcutSweep solve_maxcut_limit(const InteractionMatrix& A, std::span<const double> beta_schedule,
                               std::optional<double> q_ref, const SolveOptions& opts) {
    if (beta_schedule.empty())
        throw ValidationError(ValidationError::Kind::BadParameter, "empty beta schedule");
    for (size_t i = 0; i < beta_schedule.size(); ++i) {
        if (beta_schedule[i] < 1.0)
            throw ValidationError(ValidationError::Kind::BadParameter,
                                  "beta schedule entries must be >= 1");
        if (i > 0 && beta_schedule[i] <= beta_schedule[i - 1])
            throw ValidationError(ValidationError::Kind::BadParameter,
                                  "beta schedule must be strictly ascending");
    }

    const double tr_A = A.trace();
    const double kd = static_cast<double>(A.k());
    MaxcutSweep sweep;
    SolveOptions cur = opts;
    double prev_beta = 0.0;
    for (double beta : beta_schedule) {
        if (cur.lambda0) {
            // keep the warm start feasible at the larger beta: adding the
            // grown row sums back restores diagonal dominance of the shift
            for (int i = 0; i < A.k(); ++i) {
                double rowsum = 0.0;
                for (int j = 0; j < A.k(); ++j) rowsum += std::fabs(A(i, j));
                (*cur.lambda0)[i] += 2.0 * (beta - prev_beta) * rowsum;
            }
        }
        SolveReport rep = solve_regularized(A, beta, cur);
        if (!rep.converged)
            throw LineSearchStalled("maxcut sweep solve did not converge at beta = " +
                                    std::to_string(beta));
        double tr = 0.0;
        for (int i = 0; i < A.k(); ++i)
            for (int j = 0; j < A.k(); ++j) tr += A(i, j) * rep.S_star(i, j);

        if (!sweep.values.empty() && tr < sweep.values.back() - 1e-9)
            throw Error("energy sequence decreased along the beta schedule");

        sweep.betas.push_back(beta);
        sweep.values.push_back(tr);
        sweep.bound_gaps.push_back(
            q_ref ? (*q_ref - tr_A + 0.5 * kd * std::log(beta)) / beta
                  : std::numeric_limits<double>::quiet_NaN());
        cur.lambda0 = rep.lambda;  // warm start the next solve
        prev_beta = beta;
    }
    return sweep;
}

std::string SolveReport::to_json() const {
    nlohmann::json j;
    j["q_star"] = q_star;
    j["k"] = S_star.k();
    j["S_star"] = S_star.mat().data();  // row-major
    j["R_star"] = R_star.mat().data();  // row-major
    j["lambda"] = lambda;
    j["iterations"] = iterations;
    j["residual"] = residual;
    j["converged"] = converged;
    return j.dump(2);
}

}  // namespace spherelift
