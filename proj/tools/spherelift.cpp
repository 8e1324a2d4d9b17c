// spherelift: solve the log-det regularized correlation SDP, sample the
// spherical spin model, round to hypercube spins, and run the verification
// experiments. Exit codes: 0 ok, 1 validation or I/O error, 2 solver did not
// converge, 3 an experiment's embedded assertion failed.

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spherelift/densities.hpp"
#include "spherelift/errors.hpp"
#include "spherelift/experiments.hpp"
#include "spherelift/matrix_io.hpp"
#include "spherelift/oracle.hpp"
#include "spherelift/sampler.hpp"
#include "spherelift/solver.hpp"
#include "spherelift/table_io.hpp"

namespace {

using namespace spherelift;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConverge = 2;
constexpr int kExitAssertion = 3;

struct CommonArgs {
    std::string matrix_path;
    double beta = 1.0;
    long n = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out = "-";
    std::string format;
    std::string sampler = "approx";
    int burn_in = 500;
    int thin = 5;
    int grid_size = 2048;
    double tol = 1e-10;
    int max_iter = 200;
    std::vector<long> n_list;
    std::vector<double> beta_list;
};

std::uint64_t resolve_seed(CommonArgs& args) {
    if (!args.seed_given) {
        std::random_device rd;
        args.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::cerr << "seed: " << args.seed << "\n";  // reproducible after the fact
    }
    return args.seed;
}

std::string pair_header(int k) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < k - 1; ++i)
        for (int j = i + 1; j < k; ++j) {
            if (!first) os << ",";
            os << "s_" << (i + 1) << "_" << (j + 1);
            first = false;
        }
    return os.str();
}

std::string csv_meta(const std::vector<std::pair<std::string, std::string>>& meta) {
    std::ostringstream os;
    for (const auto& [key, value] : meta) os << "# " << key << "=" << value << "\n";
    return os.str();
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int cmd_solve(CommonArgs& args) {
    const InteractionMatrix A(read_matrix_file(args.matrix_path));
    SolveOptions opts;
    opts.tol = args.tol;
    opts.max_iter = args.max_iter;
    const std::string format = args.format.empty() ? "json" : args.format;

    SolveReport report = solve_regularized(A, args.beta, opts);

    std::string body;
    if (format == "json") {
        body = report.to_json() + "\n";
    } else if (format == "csv") {
        std::ostringstream os;
        os << "key,value\n";
        os << "k," << A.k() << "\n";
        os << "q_star," << num(report.q_star) << "\n";
        os << "iterations," << report.iterations << "\n";
        os << "residual," << num(report.residual) << "\n";
        os << "converged," << (report.converged ? 1 : 0) << "\n";
        for (int i = 0; i < A.k(); ++i)
            for (int j = 0; j < A.k(); ++j)
                os << "S_star_" << (i + 1) << "_" << (j + 1) << "," << num(report.S_star(i, j)) << "\n";
        for (int i = 0; i < A.k(); ++i)
            for (int j = 0; j < A.k(); ++j)
                os << "R_star_" << (i + 1) << "_" << (j + 1) << "," << num(report.R_star(i, j)) << "\n";
        for (int i = 0; i < A.k(); ++i) os << "lambda_" << (i + 1) << "," << num(report.lambda[i]) << "\n";
        body = os.str();
    } else {
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "solve supports --format json or csv");
    }

    write_file_atomic(args.out, body);
    return report.converged ? kExitOk : kExitNoConverge;
}

// draws either sampler into rows of strict-upper Gram entries
int cmd_sample(CommonArgs& args) {
    const InteractionMatrix A(read_matrix_file(args.matrix_path));
    const ModelParams params = validate_params(A.mat(), args.beta, args.n);
    if (args.samples < 0)
        throw ValidationError(ValidationError::Kind::BadParameter, "--samples must be >= 0");
    resolve_seed(args);
    const std::string format = args.format.empty() ? "csv" : args.format;
    const int k = A.k();

    std::vector<std::pair<std::string, std::string>> meta = {
        {"k", std::to_string(k)},           {"n", std::to_string(args.n)},
        {"beta", num(args.beta)},           {"seed", std::to_string(args.seed)},
        {"burn_in", std::to_string(args.burn_in)}, {"thin", std::to_string(args.thin)},
        {"sampler", args.sampler},
    };

    std::vector<std::vector<double>> rows;
    rows.reserve(args.samples);
    RngStream rng(args.seed, 0);

    auto push_gram = [&](const SpinSample& x) {
        const Mat gram = x.gram();
        std::vector<double> row;
        row.reserve(tri_count(k));
        for (int i = 0; i < k - 1; ++i)
            for (int j = i + 1; j < k; ++j) row.push_back(gram(i, j));
        rows.push_back(std::move(row));
    };

    if (args.sampler == "approx") {
        SolveOptions opts;
        opts.tol = args.tol;
        opts.max_iter = args.max_iter;
        const SolveReport report = solve_regularized(A, args.beta, opts);
        if (!report.converged) {
            std::cerr << "spherelift: solver did not converge within " << args.max_iter
                      << " iterations\n";
            return kExitNoConverge;
        }
        // every draw has the same Gram matrix by construction
        for (int s = 0; s < args.samples; ++s) push_gram(approx_sample(report.R_star, args.n, rng));
    } else if (args.sampler == "exact") {
        ChainOptions opts;
        opts.burn_in = args.burn_in;
        opts.thin = args.thin;
        opts.grid_size = args.grid_size;
        GibbsChain chain(params, opts, rng);
        for (int s = 0; s < args.samples; ++s) push_gram(chain.next_sample());
    } else {
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "--sampler must be approx or exact");
    }

    std::ostringstream os;
    if (format == "csv") {
        os << csv_meta(meta);
        os << pair_header(k) << "\n";
        for (const auto& row : rows) {
            for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << num(row[c]);
            os << "\n";
        }
    } else if (format == "json") {
        nlohmann::json header = nlohmann::json::object();
        for (const auto& [key, value] : meta) header[key] = value;
        os << nlohmann::json{{"header", header}}.dump() << "\n";
        for (const auto& row : rows) os << nlohmann::json(row).dump() << "\n";
    } else {
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "sample supports --format csv or json (JSON lines)");
    }
    write_file_atomic(args.out, os.str());
    return kExitOk;
}

int cmd_round(CommonArgs& args) {
    const InteractionMatrix A(read_matrix_file(args.matrix_path));
    const ModelParams params = validate_params(A.mat(), args.beta, args.n);
    if (args.samples < 0)
        throw ValidationError(ValidationError::Kind::BadParameter, "--samples must be >= 0");
    resolve_seed(args);
    const std::string format = args.format.empty() ? "csv" : args.format;
    const int k = A.k();

    std::vector<std::pair<std::string, std::string>> meta = {
        {"k", std::to_string(k)},           {"n", std::to_string(args.n)},
        {"beta", num(args.beta)},           {"seed", std::to_string(args.seed)},
        {"burn_in", std::to_string(args.burn_in)}, {"thin", std::to_string(args.thin)},
        {"sampler", args.sampler},
    };

    RngStream rng(args.seed, 0);
    std::vector<std::vector<int>> rows;
    rows.reserve(args.samples);

    auto round_from = [&](const SpinSample& x) { rows.push_back(hyperplane_round(x, rng)); };

    if (args.sampler == "approx") {
        SolveOptions sopts;
        sopts.tol = args.tol;
        sopts.max_iter = args.max_iter;
        const SolveReport report = solve_regularized(A, args.beta, sopts);
        if (!report.converged) {
            std::cerr << "spherelift: solver did not converge\n";
            return kExitNoConverge;
        }
        for (int s = 0; s < args.samples; ++s) round_from(approx_sample(report.R_star, args.n, rng));
    } else if (args.sampler == "exact") {
        ChainOptions copts;
        copts.burn_in = args.burn_in;
        copts.thin = args.thin;
        copts.grid_size = args.grid_size;
        GibbsChain chain(params, copts, rng);
        for (int s = 0; s < args.samples; ++s) round_from(chain.next_sample());
    } else {
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "--sampler must be approx or exact");
    }

    std::ostringstream os;
    if (format == "csv") {
        os << csv_meta(meta);
        for (int j = 0; j < k; ++j) os << (j ? "," : "") << "s_" << (j + 1);
        os << "\n";
        for (const auto& row : rows) {
            for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
            os << "\n";
        }
    } else if (format == "json") {
        nlohmann::json header = nlohmann::json::object();
        for (const auto& [key, value] : meta) header[key] = value;
        os << nlohmann::json{{"header", header}}.dump() << "\n";
        for (const auto& row : rows) os << nlohmann::json(row).dump() << "\n";
    } else {
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "round supports --format csv or json (JSON lines)");
    }
    write_file_atomic(args.out, os.str());
    return kExitOk;
}

expt::ExperimentConfig experiment_config(CommonArgs& args) {
    expt::ExperimentConfig config;
    config.matrix_path = args.matrix_path;
    config.beta = args.beta;
    config.n_list = args.n_list;
    config.samples_per_n = args.samples > 0 ? args.samples : 400;
    config.seed = resolve_seed(args);
    config.beta_list = args.beta_list;
    config.n = args.n;
    config.samples = args.samples > 0 ? args.samples : 5000;
    config.burn_in = args.burn_in;
    config.thin = args.thin;
    config.grid_size = args.grid_size;
    return config;
}

int finish_experiment(const Table& table, bool pass, const CommonArgs& args) {
    const std::string format = args.format.empty() ? "csv" : args.format;
    write_file_atomic(args.out, table.render(format));
    return pass ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"log-det regularized correlation SDP, spherical spin sampling, and checks"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool needs_matrix) {
        auto* m = cmd->add_option("--matrix", args.matrix_path, "coupling matrix file (text or JSON)");
        if (needs_matrix) m->required();
        cmd->add_option("--beta", args.beta, "inverse temperature");
        cmd->add_option("--n", args.n, "spin dimension");
        cmd->add_option("--samples", args.samples, "number of samples / draws");
        cmd->add_option("--seed", args.seed, "64-bit RNG seed")->each([&](const std::string&) {
            args.seed_given = true;
        });
        cmd->add_option("--out", args.out, "output path, or - for stdout");
        cmd->add_option("--format", args.format, "csv or json");
        cmd->add_option("--sampler", args.sampler, "approx or exact");
        cmd->add_option("--burn-in", args.burn_in, "Gibbs burn-in sweeps");
        cmd->add_option("--thin", args.thin, "Gibbs thinning interval");
        cmd->add_option("--grid-size", args.grid_size, "inverse-CDF grid nodes");
        cmd->add_option("--tol", args.tol, "solver residual tolerance");
        cmd->add_option("--max-iter", args.max_iter, "solver iteration cap");
        cmd->add_option("--n-list", args.n_list, "comma-separated spin dimensions")->delimiter(',');
        cmd->add_option("--beta-list", args.beta_list, "comma-separated inverse temperatures")
            ->delimiter(',');
    };

    auto* solve = app.add_subcommand("solve", "solve the regularized SDP");
    add_common(solve, true);
    auto* sample = app.add_subcommand("sample", "draw spin samples, emit Gram entries");
    add_common(sample, true);
    auto* round = app.add_subcommand("round", "draw samples and project to hypercube spins");
    add_common(round, true);
    auto* free_energy = app.add_subcommand("free-energy", "quadrature free energy vs n * q_star");
    add_common(free_energy, true);
    auto* concentration = app.add_subcommand("concentration", "sample concentration rate fit");
    add_common(concentration, true);
    auto* beta_sweep = app.add_subcommand("beta-sweep", "energy along an ascending beta schedule");
    add_common(beta_sweep, true);
    auto* validate_sampler = app.add_subcommand("validate-sampler", "KS test of the Gibbs sampler");
    add_common(validate_sampler, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(args);
        if (sample->parsed()) return cmd_sample(args);
        if (round->parsed()) return cmd_round(args);
        if (free_energy->parsed()) {
            const auto result = expt::run_free_energy_gap(experiment_config(args));
            return finish_experiment(result.table, result.pass, args);
        }
        if (concentration->parsed()) {
            const auto result = expt::run_concentration(experiment_config(args));
            return finish_experiment(result.table, result.pass, args);
        }
        if (beta_sweep->parsed()) {
            const auto result = expt::run_beta_sweep(experiment_config(args));
            return finish_experiment(result.table, result.pass, args);
        }
        if (validate_sampler->parsed()) {
            const auto result = expt::run_sampler_validation(experiment_config(args));
            return finish_experiment(result.table, result.pass, args);
        }
    } catch (const LineSearchStalled& e) {
        std::cerr << "spherelift: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const Error& e) {
        std::cerr << "spherelift: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "spherelift: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
