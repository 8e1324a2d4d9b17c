// Acceptance suite: the solver, samplers, and asymptotic claims are checked
// against independent oracles at fixed tolerances. One PASS/FAIL line per
// criterion; exit 0 only when everything holds.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "spherelift/densities.hpp"
#include "spherelift/experiments.hpp"
#include "spherelift/oracle.hpp"
#include "spherelift/sampler.hpp"
#include "spherelift/solver.hpp"
#include "spherelift/stats.hpp"

using namespace spherelift;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    if (!ok) ++failures;
}

void criterion(int id, const std::string& what,
               const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(id, ok, what, detail);
    } catch (const std::exception& e) {
        report(id, false, what, std::string("exception: ") + e.what());
    }
}

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

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace

int main() {
    std::printf("acceptance: regularized correlation SDP + spherical sampling\n");

    criterion(1, "solver matches the 2x2 closed form to 1e-9", [] {
        double worst_s = 0.0, worst_q = 0.0;
        for (double a : {-2.0, -0.5, -0.1, 0.1, 0.5, 2.0})
            for (double beta : {0.1, 1.0, 5.0, 20.0}) {
                const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(a)), beta);
                if (!rep.converged) return std::make_pair(false, std::string("no convergence"));
                const double s = oracle::k2_stationary(a, beta);
                const double q = 2.0 * beta * a * s + 0.5 * std::log(1.0 - s * s);
                worst_s = std::max(worst_s, std::fabs(rep.S_star(0, 1) - s));
                worst_q = std::max(worst_q, std::fabs(rep.q_star - q));
            }
        return std::make_pair(worst_s <= 1e-9 && worst_q <= 1e-9,
                              fmt("max |dS|=%.2e, max |dq|=%.2e", worst_s, worst_q));
    });

    criterion(2, "beta = 0 returns the identity exactly (to 1e-12)", [] {
        RngStream rng(2137, 0);
        double worst_S = 0.0, worst_q = 0.0;
        for (int k = 2; k <= 10; ++k) {
            const SolveReport rep = solve_regularized(random_coupling(k, rng), 0.0);
            if (!rep.converged) return std::make_pair(false, std::string("no convergence"));
            worst_S = std::max(worst_S, frob(rep.S_star.mat(), Mat::identity(k)));
            worst_q = std::max(worst_q, std::fabs(rep.q_star));
        }
        return std::make_pair(worst_S <= 1e-12 && worst_q <= 1e-12,
                              fmt("max ||S-I||=%.2e, max |q|=%.2e", worst_S, worst_q));
    });

    criterion(3, "unique maximizer: 10 multistarts agree within 1e-8", [] {
        RngStream rng(99, 0);
        const double betas[] = {0.1, 1.0, 5.0, 1.0, 0.1};
        double worst = 0.0;
        for (int inst = 0; inst < 5; ++inst) {
            const int k = 2 + inst;
            const InteractionMatrix A = random_coupling(k, rng);
            const double beta = betas[inst];
            const SolveReport base = solve_regularized(A, beta);
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
                worst = std::max(worst, frob(rep.S_star.mat(), base.S_star.mat()));
            }
        }
        return std::make_pair(worst <= 1e-8, fmt("max multistart spread %.2e", worst));
    });

    criterion(4, "sample concentration: log-log slopes inside [-0.65, -0.35]", [] {
        expt::ExperimentConfig config;
        config.matrix = coupling2(0.5);
        config.beta = 1.0;
        config.n_list = {16, 64, 256, 1024};
        config.samples_per_n = 400;
        config.seed = 20260810;
        const expt::ConcentrationResult r = expt::run_concentration(config);
        return std::make_pair(r.pass, fmt("slope_S=%.3f, slope_R=%.3f", r.slope_S, r.slope_R));
    });

    criterion(5, "correlation limit: sampled mean vs quadrature vs maximizer", [] {
        const ModelParams params = validate_params(coupling2(0.5), 1.0, 256);
        const SolveReport rep = solve_regularized(params.A, params.beta);
        const double target = oracle::k2_moment(params);

        ChainOptions opts;  // defaults: burn-in 500, thin 5
        GibbsChain chain(params, opts, RngStream(4096, 0));
        const int draws = 400;
        std::vector<double> s(draws);
        for (auto& v : s) v = chain.next_sample().gram()(0, 1);

        const double se = sample_std(s) / std::sqrt(static_cast<double>(draws));
        const double mc_err = std::fabs(mean(s) - target);
        const double fixed_err = std::fabs(target - rep.S_star(0, 1));
        return std::make_pair(mc_err <= 3.0 * se && fixed_err <= 0.02,
                              fmt("|mean-E|=%.2e (3SE=%.2e), |E-S*|=%.2e", mc_err, 3.0 * se,
                                  fixed_err));
    });

    criterion(6, "free energy: gap bounded (G=0.12) with slope within 0.5", [] {
        expt::ExperimentConfig config;
        config.matrix = coupling2(0.5);
        config.beta = 1.0;
        config.n_list = {8, 16, 32, 64, 128, 256, 512, 1024};
        const expt::FreeEnergyResult r = expt::run_free_energy_gap(config);
        return std::make_pair(r.pass, fmt("max |gap|=%.4f, slope=%.4f", r.max_abs_gap,
                                          r.gap_slope_vs_ln_n));
    });

    criterion(7, "unregularized limit: positive, shrinking, enveloped gaps", [] {
        const std::vector<double> schedule = {10.0, 100.0, 1000.0};
        const MaxcutSweep sweep =
            solve_maxcut_limit(InteractionMatrix(coupling2(0.5)), schedule, 1.0);
        bool ok = true;
        double prev = 2.0;
        std::string detail;
        for (size_t i = 0; i < schedule.size(); ++i) {
            const double gap = 1.0 - sweep.values[i];
            const double envelope = (1.0 + std::log(schedule[i])) / schedule[i];
            ok = ok && gap > 0.0 && gap < prev && gap <= envelope;
            prev = gap;
            detail += fmt("%.2e<=%.2e ", gap, envelope);
        }
        return std::make_pair(ok, detail);
    });

    criterion(8, "Gibbs draws pass the KS gate at 1%", [] {
        expt::ExperimentConfig config;
        config.matrix = coupling2(0.5);
        config.beta = 1.0;
        config.n = 20;
        config.samples = 5000;
        config.seed = 8;
        const expt::SamplerValidationResult hot = expt::run_sampler_validation(config);

        // flat case: beta = 0, n = 3 has a uniform correlation law
        const ModelParams p0 = validate_params(coupling2(0.5), 0.0, 3);
        GibbsState st(UpperREntries::zeros(2));
        RngStream rng(80, 0);
        std::vector<double> flat(5000);
        for (auto& v : flat) {
            gibbs_sweep(st, p0, rng);
            v = st.U.at(0, 1);
        }
        const double d0 = ks_statistic(std::move(flat), [](double x) { return 0.5 * (x + 1.0); });
        const double crit = ks_critical(5000, 0.01);
        return std::make_pair(hot.pass && d0 < crit,
                              fmt("D=%.4f, D0=%.4f, crit=%.4f", hot.ks_statistic, d0, crit));
    });

    criterion(9, "Haar rotations: orthonormality, moments, pinned Gram", [] {
        RngStream rng(909, 0);
        double worst_orth = 0.0;
        for (const auto& [n, k] : std::vector<std::pair<int, int>>{{50, 5}, {17, 3}, {128, 6}}) {
            const ColMat Q = haar_stiefel(n, k, rng);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    double ip = 0.0;
                    for (int r = 0; r < n; ++r) ip += Q(r, i) * Q(r, j);
                    worst_orth = std::max(worst_orth, std::fabs(ip - (i == j ? 1.0 : 0.0)));
                }
        }

        const int draws = 20000;
        double sum_sq = 0.0, sum_4 = 0.0;
        for (int d = 0; d < draws; ++d) {
            const ColMat Q = haar_stiefel(10, 1, rng);
            sum_sq += Q(0, 0) * Q(0, 0);
            sum_4 += Q(0, 0) * Q(0, 0) * Q(0, 0) * Q(0, 0);
        }
        const double mean_sq = sum_sq / draws;
        const double se = std::sqrt((sum_4 / draws - mean_sq * mean_sq) / draws);
        const bool moment_ok = std::fabs(mean_sq - 0.1) <= 4.0 * se;

        const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(0.5)), 1.0);
        double worst_gram = 0.0;
        for (int d = 0; d < 20; ++d) {
            const Mat gram = approx_sample(rep.R_star, 64, rng).gram();
            worst_gram = std::max(worst_gram, frob(gram, rep.S_star.mat()));
        }
        return std::make_pair(worst_orth <= 1e-12 && moment_ok && worst_gram <= 1e-12,
                              fmt("orth=%.1e, |E[q^2]-0.1|=%.1e, gram=%.1e", worst_orth,
                                  std::fabs(mean_sq - 0.1), worst_gram));
    });

    criterion(10, "hyperplane rounding follows the arccos law (3 SE)", [] {
        const SolveReport rep = solve_regularized(InteractionMatrix(coupling2(0.5)), 1.0);
        RngStream rng(1010, 0);
        const SpinSample x = approx_sample(rep.R_star, 64, rng);
        const double rho = x.gram()(0, 1);
        const double target = oracle::grothendieck_prob(rho);

        const int rounds = 50000;
        int agree = 0;
        for (int d = 0; d < rounds; ++d) {
            const auto s = hyperplane_round(x, rng);
            agree += s[0] == s[1];
        }
        const double freq = static_cast<double>(agree) / rounds;
        const double se = std::sqrt(target * (1.0 - target) / rounds);
        return std::make_pair(std::fabs(freq - target) <= 3.0 * se,
                              fmt("freq=%.4f, target=%.4f, 3SE=%.4f", freq, target, 3.0 * se));
    });

    criterion(11, "k = 3 maximizer against grid quadrature", [] {
        Mat A(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A(i, j) = (i == j) ? 0.0 : 1.0;
        const ModelParams params = validate_params(A, 0.4, 40);
        const SolveReport rep = solve_regularized(params.A, params.beta);
        const oracle::K3Moments grid = oracle::k3_grid_moments(params, 201);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                worst = std::max(worst, std::fabs(grid.E_S(i, j) - rep.S_star(i, j)));

        // decoupled third site reduces to the k = 2 oracle
        Mat D(3, 3);
        D(0, 1) = D(1, 0) = 0.5;
        const ModelParams dec = validate_params(D, 1.0, 20);
        const oracle::K3Moments dg = oracle::k3_grid_moments(dec, 201);
        const ModelParams two = validate_params(coupling2(0.5), 1.0, 20);
        const double k2 = oracle::k2_moment(two);
        const double dec_err = std::fabs(dg.E_S(0, 1) - k2);

        return std::make_pair(worst <= 0.05 && dec_err <= 1e-3,
                              fmt("max |E-S*|=%.4f (<=0.05), decoupled err=%.2e", worst, dec_err));
    });

    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
