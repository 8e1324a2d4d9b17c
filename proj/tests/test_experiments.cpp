#include <doctest.h>

#include <cmath>

#include "spherelift/errors.hpp"
#include "spherelift/experiments.hpp"
#include "spherelift/table_io.hpp"

using namespace spherelift;
using namespace spherelift::expt;

namespace {

Mat coupling2(double a) {
    Mat m(2, 2);
    m(0, 1) = m(1, 0) = a;
    return m;
}

}  // namespace

TEST_CASE("free energy: beta = 0 gives identically zero gaps") {
    ExperimentConfig config;
    config.matrix = coupling2(0.5);
    config.beta = 0.0;
    config.n_list = {8, 16, 32, 64};
    const FreeEnergyResult r = run_free_energy_gap(config);
    CHECK(r.pass);
    CHECK(r.max_abs_gap <= 1e-12);
    for (const auto& row : r.table.rows) CHECK(std::fabs(row[3]) <= 1e-12);
}

TEST_CASE("free energy: canonical instance is bounded with a flat gap") {
    ExperimentConfig config;
    config.matrix = coupling2(0.5);
    config.beta = 1.0;
    config.n_list = {8, 16, 32, 64, 128};
    const FreeEnergyResult r = run_free_energy_gap(config);
    CHECK(r.pass);
    CHECK(r.max_abs_gap <= kFreeEnergyGapBound);
    CHECK(std::fabs(r.gap_slope_vs_ln_n) <= kFreeEnergyGapSlopeBound);

    // deterministic: rerunning renders byte-identical output
    const FreeEnergyResult again = run_free_energy_gap(config);
    CHECK(r.table.to_csv() == again.table.to_csv());
    CHECK(r.table.to_json() == again.table.to_json());
}

TEST_CASE("free energy: wrong k is a validation error") {
    ExperimentConfig config;
    config.matrix = Mat(3, 3);
    config.n_list = {8, 16};
    CHECK_THROWS_AS(run_free_energy_gap(config), ValidationError);
}

TEST_CASE("beta sweep: envelope holds for the 2-site instance") {
    ExperimentConfig config;
    config.matrix = coupling2(0.5);
    config.beta_list = {10.0, 100.0, 1000.0};
    const BetaSweepResult r = run_beta_sweep(config);
    CHECK(r.pass);
    REQUIRE(r.table.rows.size() == 3);
    double prev_gap = 2.0;
    for (const auto& row : r.table.rows) {
        const double gap = row[2];
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
        CHECK(gap <= (1.0 + std::log(row[0])) / row[0] + 1e-9);
    }
}

TEST_CASE("beta sweep: descending schedules are rejected") {
    ExperimentConfig config;
    config.matrix = coupling2(0.5);
    config.beta_list = {100.0, 10.0};
    CHECK_THROWS_AS(run_beta_sweep(config), ValidationError);
}

TEST_CASE("sampler validation: Gibbs draws pass the KS gate") {
    ExperimentConfig config;
    config.matrix = coupling2(0.5);
    config.beta = 1.0;
    config.n = 20;
    config.samples = 1500;
    config.burn_in = 200;
    config.thin = 2;
    config.seed = 31;
    const SamplerValidationResult r = run_sampler_validation(config);
    CHECK(r.pass);
    CHECK(r.ks_statistic < r.ks_critical);
}

TEST_CASE("concentration: slopes track the square-root law at small scale") {
    ExperimentConfig config;
    config.matrix = coupling2(0.5);
    config.beta = 1.0;
    config.n_list = {8, 32, 128, 512};
    config.samples_per_n = 150;
    config.burn_in = 150;
    config.thin = 2;
    config.seed = 11;
    const ConcentrationResult r = run_concentration(config);
    CHECK(r.pass);
    CHECK(r.slope_S >= kSlopeWindowLo);
    CHECK(r.slope_S <= kSlopeWindowHi);
    CHECK(r.slope_R >= kSlopeWindowLo);
    CHECK(r.slope_R <= kSlopeWindowHi);

    // provenance header is present in both renderings
    CHECK(r.table.to_csv().find("# version=") == 0);
    CHECK(r.table.to_csv().find("# seed=11") != std::string::npos);

    // pure function of (config, seed)
    const ConcentrationResult again = run_concentration(config);
    CHECK(r.table.to_csv() == again.table.to_csv());
}

TEST_CASE("table rendering: csv and json carry the same numbers") {
    Table t;
    t.add_meta("version", build_version());
    t.columns = {"x", "y"};
    t.rows = {{1.0, 2.5}, {2.0, std::nan("")}};
    const std::string csv = t.to_csv();
    CHECK(csv.find("x,y\n") != std::string::npos);
    CHECK(csv.find("nan") != std::string::npos);
    const std::string json = t.to_json();
    CHECK(json.find("\"x\": 1.0") != std::string::npos);
    CHECK(json.find("null") != std::string::npos);
    CHECK_THROWS_AS(t.render("yaml"), ValidationError);
}
