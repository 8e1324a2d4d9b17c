#include <doctest.h>

#include <cmath>
#include <vector>

#include <json.hpp>

#include "spherelift/densities.hpp"
#include "spherelift/errors.hpp"
#include "spherelift/linalg.hpp"
#include "spherelift/oracle.hpp"
#include "spherelift/rng.hpp"
#include "spherelift/solver.hpp"

using namespace spherelift;

namespace {

Mat coupling2(double a) {
    Mat m(2, 2);
    m(0, 1) = m(1, 0) = a;
    return m;
}

InteractionMatrix random_coupling(int k, RngStream& rng) {
    Mat m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
    return InteractionMatrix(std::move(m));
}

double frob(const Mat& a, const Mat& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i)
        s += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("objective: identity, stationarity, beta = 0") {
    const InteractionMatrix A(coupling2(0.5));
    CHECK(objective(ElliptopeMatrix(Mat::identity(2)), A, 3.0) == doctest::Approx(0.0));

    // 2x2 objective s + 0.5 ln(1-s^2) at beta = 1, a = 1/2: derivative
    // 1 - s/(1-s^2) vanishes at the golden-ratio point
    const double s = (std::sqrt(5.0) - 1.0) / 2.0;
    const double h = 1e-6;
    auto f = [&](double t) {
        Mat S = Mat::identity(2);
        S(0, 1) = S(1, 0) = t;
        return objective(ElliptopeMatrix(S), A, 1.0);
    };
    CHECK(f(s) == doctest::Approx(s + 0.5 * std::log(1.0 - s * s)).epsilon(1e-12));
    CHECK(std::fabs((f(s + h) - f(s - h)) / (2.0 * h)) <= 1e-5);

    RngStream rng(5, 0);
    CHECK(objective(ElliptopeMatrix(Mat::identity(6)), random_coupling(6, rng), 0.0) ==
          doctest::Approx(0.0));
}

TEST_CASE("dual_to_primal closed forms") {
    const InteractionMatrix A(coupling2(0.25));
    const Mat S = dual_to_primal({1.0, 1.0}, A, 0.0);
    CHECK(S(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(S(0, 1) == doctest::Approx(0.0));

    Mat one(1, 1);
    one(0, 0) = 0.8;
    const InteractionMatrix A1(std::move(one));
    const double beta = 1.7;
    const Mat S1 = dual_to_primal({2.0 * beta * 0.8 + 1.0}, A1, beta);
    CHECK(S1(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(dual_to_primal({0.1, 0.1}, InteractionMatrix(coupling2(1.0)), 1.0),
                    NotPositiveDefinite);
}

TEST_CASE("solve: beta = 0 returns the identity immediately") {
    RngStream rng(31, 0);
    for (int k : {2, 5, 10}) {
        const SolveReport rep = solve_regularized(random_coupling(k, rng), 0.0);
        CHECK(rep.converged);
        CHECK(rep.iterations <= 2);
        CHECK(rep.residual <= 1e-12);
        CHECK(std::fabs(rep.q_star) <= 1e-12);
        CHECK(frob(rep.S_star.mat(), Mat::identity(k)) <= 1e-12);
    }
}

TEST_CASE("solve: 2x2 closed form across the (a, beta) grid") {
    for (double a : {-2.0, -0.5, -0.1, 0.1, 0.5, 2.0}) {
        for (double beta : {0.1, 1.0, 5.0, 20.0}) {
            const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(a)), beta);
            REQUIRE(rep.converged);
            const double s = oracle::k2_stationary(a, beta);
            const double q = 2.0 * beta * a * s + 0.5 * std::log(1.0 - s * s);
            CHECK(std::fabs(rep.S_star(0, 1) - s) <= 1e-9);
            CHECK(std::fabs(rep.q_star - q) <= 1e-9);
        }
    }
}

TEST_CASE("solve: canonical instance value") {
    const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(0.5)), 1.0);
    CHECK(rep.S_star(0, 1) == doctest::Approx(0.61803398874989485).epsilon(1e-10));
    CHECK(rep.q_star == doctest::Approx(0.37742807622009312).epsilon(1e-10));
    // site exchange symmetry carries over to the multipliers
    CHECK(rep.lambda[0] == doctest::Approx(rep.lambda[1]).epsilon(1e-9));
}

TEST_CASE("solve: iteration cap reports rather than throws") {
    SolveOptions opts;
    opts.max_iter = 1;
    const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(2.0)), 20.0, opts);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 1);
    CHECK(rep.residual > 1e-10);
    CHECK(std::isfinite(rep.q_star));  // partial report is still usable
}

TEST_CASE("solve: KKT residual at the reported solution") {
    RngStream rng(77, 0);
    for (int k : {2, 4, 6}) {
        const InteractionMatrix A = random_coupling(k, rng);
        const double beta = 1.5;
        const SolveReport rep = solve_regularized(A, beta);
        REQUIRE(rep.converged);
        const Mat Sinv = spd_inverse(rep.S_star.mat());
        double kkt = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                double v = beta * A(i, j) + 0.5 * Sinv(i, j);
                if (i == j) v -= 0.5 * rep.lambda[i];
                kkt = std::max(kkt, std::fabs(v));
            }
        CHECK(kkt <= 1e-8);
    }
}

TEST_CASE("solve: multistart initializations agree (unique maximizer)") {
    RngStream rng(123, 0);
    for (int k : {2, 3, 4, 5, 6}) {
        const InteractionMatrix A = random_coupling(k, rng);
        for (double beta : {0.1, 1.0, 5.0}) {
            const SolveReport base = solve_regularized(A, beta);
            REQUIRE(base.converged);
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<double> lambda0(k);
                for (int i = 0; i < k; ++i) {
                    double rowsum = 0.0;
                    for (int j = 0; j < k; ++j) rowsum += std::fabs(A(i, j));
                    lambda0[i] = 2.0 * beta * rowsum + rng.uniform(0.5, 5.0);
                }
                SolveOptions opts;
                opts.lambda0 = lambda0;
                const SolveReport rep = solve_regularized(A, beta, opts);
                REQUIRE(rep.converged);
                CHECK(frob(rep.S_star.mat(), base.S_star.mat()) <= 1e-8);
            }
        }
    }
}

TEST_CASE("solve: only the product beta * A matters") {
    RngStream rng(9, 0);
    const InteractionMatrix A = random_coupling(4, rng);
    const double c = 3.7;
    const SolveReport r1 = solve_regularized(A.scaled(c), 0.9);
    const SolveReport r2 = solve_regularized(A, 0.9 * c);
    CHECK(frob(r1.S_star.mat(), r2.S_star.mat()) <= 1e-10);
    CHECK(r1.q_star == doctest::Approx(r2.q_star).epsilon(1e-10));
}

TEST_CASE("solve: permutation equivariance") {
    RngStream rng(10, 0);
    const InteractionMatrix A = random_coupling(5, rng);
    const std::vector<int> perm = {3, 0, 4, 1, 2};
    const SolveReport rp = solve_regularized(A.permuted(perm), 1.2);
    const SolveReport r = solve_regularized(A, 1.2);
    Mat expected(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) expected(i, j) = r.S_star(perm[i], perm[j]);
    CHECK(frob(rp.S_star.mat(), expected) <= 1e-10);
}

TEST_CASE("solve: concave envelope bound between temperatures") {
    RngStream rng(14, 0);
    const InteractionMatrix A = random_coupling(4, rng);
    const double b1 = 0.8, b2 = 2.5;
    const SolveReport r1 = solve_regularized(A, b1);
    const SolveReport r2 = solve_regularized(A, b2);
    const double tr1 = energy(r1.S_star, A);
    CHECK(r2.q_star >= r1.q_star + (b2 - b1) * tr1 - 1e-10);
}

TEST_CASE("solve: k=3 symmetric instance vs a 1-parameter grid oracle") {
    Mat A(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = (i == j) ? 0.0 : 1.0;
    const double beta = 0.5;
    const SolveReport rep = solve_regularized(InteractionMatrix(A), beta);
    REQUIRE(rep.converged);
    CHECK(std::fabs(rep.S_star(0, 1) - rep.S_star(0, 2)) <= 1e-10);
    CHECK(std::fabs(rep.S_star(0, 1) - rep.S_star(1, 2)) <= 1e-10);

    // dense scan of the symmetric family: objective 6 beta s + 0.5 ln((1-s)^2 (1+2s))
    double best = -1e300;
    for (double s = -0.499999; s < 0.999999; s += 1e-6) {
        const double det = (1.0 - s) * (1.0 - s) * (1.0 + 2.0 * s);
        if (det <= 0.0) continue;
        best = std::max(best, 6.0 * beta * s + 0.5 * std::log(det));
    }
    CHECK(rep.q_star == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("maxcut sweep: 2x2 energies rise toward the unregularized value") {
    const InteractionMatrix A(coupling2(0.5));
    const std::vector<double> schedule = {1.0, 10.0, 100.0};
    const MaxcutSweep sweep = solve_maxcut_limit(A, schedule, 1.0);
    REQUIRE(sweep.values.size() == 3);
    CHECK(sweep.values[0] < sweep.values[1]);
    CHECK(sweep.values[1] < sweep.values[2]);
    for (size_t i = 0; i < 3; ++i) {
        const double s = oracle::k2_stationary(0.5, schedule[i]);
        CHECK(sweep.values[i] == doctest::Approx(s).epsilon(1e-8));
        CHECK(1.0 - sweep.values[i] <= sweep.bound_gaps[i] + 1e-9);
    }

    const MaxcutSweep trivial = solve_maxcut_limit(InteractionMatrix(Mat(3, 3)), {{1.0}});
    CHECK(trivial.values[0] == doctest::Approx(0.0));

    CHECK_THROWS_AS(solve_maxcut_limit(A, {{10.0, 5.0}}), ValidationError);
    CHECK_THROWS_AS(solve_maxcut_limit(A, {{0.5, 2.0}}), ValidationError);
}

TEST_CASE("solve report serializes with the expected fields") {
    const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(0.5)), 1.0);
    const auto j = nlohmann::json::parse(rep.to_json());
    for (const char* field :
         {"q_star", "S_star", "R_star", "lambda", "iterations", "residual", "converged"})
        CHECK(j.contains(field));
    CHECK(j["S_star"].size() == 4);
    CHECK(j["converged"].get<bool>());
}
