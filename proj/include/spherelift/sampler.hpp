#ifndef SPHERELIFT_SAMPLER_HPP
#define SPHERELIFT_SAMPLER_HPP

#include <optional>
#include <vector>

#include "spherelift/rng.hpp"
#include "spherelift/types.hpp"

namespace spherelift {

// Uniformly distributed point on the Stiefel manifold O(n, k): Gaussian fill
// followed by modified Gram-Schmidt with positive triangular diagonal.
ColMat haar_stiefel(int n, int k, RngStream& rng);

// X = Q R_star with fresh Haar Q: one draw of the approximate sampler.
// X^T X reproduces R_star^T R_star on every draw.
SpinSample approx_sample(const CholeskyFactor& R_star, int n, RngStream& rng);

// Triangular factor with the given strict upper entries and the diagonal
// reconstructed per column; throws OutOfSupport.
CholeskyFactor assemble_R(const UpperREntries& U);

struct ChainOptions {
    int burn_in = 500;
    int thin = 5;
    int grid_size = 2048;
    std::optional<UpperREntries> init;  // default: all zeros (R = I, always in support)
};

struct GibbsState {
    UpperREntries U;
    long sweep_count = 0;
    double last_log_density = 0.0;
    long degenerate_skips = 0;  // coordinates left unchanged because the interval collapsed

    explicit GibbsState(UpperREntries u) : U(std::move(u)) {}
};

// One systematic scan over the strict upper entries in row-major order. Each
// coordinate is redrawn from its exact 1D conditional by grid inverse-CDF in
// log space (grid_size nodes, max-log subtracted, trapezoid cumulative sums,
// linear interpolation against one uniform variate). Coordinates whose
// feasible interval has collapsed below 1e-12 are skipped and counted.
void gibbs_sweep(GibbsState& state, const ModelParams& params, RngStream& rng,
                 int grid_size = 2048);

// Convenience wrapper owning a state, its RNG and the chain protocol.
class GibbsChain {
public:
    GibbsChain(ModelParams params, ChainOptions opts, RngStream rng);

    // run the burn-in sweeps (idempotent)
    void burn_in();
    // advance `thin` sweeps and return the current factor
    CholeskyFactor next_R();
    // next_R combined with a fresh Haar rotation
    SpinSample next_sample();

    const GibbsState& state() const { return state_; }

private:
    ModelParams params_;
    ChainOptions opts_;
    RngStream rng_;
    GibbsState state_;
    bool burned_ = false;
};

// One exact sample: Gibbs chain for the triangular factor (burn-in + thin),
// independent Haar rotation, X = Q R.
SpinSample exact_sample(const ModelParams& params, const ChainOptions& opts, RngStream& rng);

// Random-hyperplane projection to hypercube spins: s_i = sign(<v, x_i>) for
// one standard normal direction v, ties resolved to +1.
std::vector<int> hyperplane_round(const SpinSample& X, RngStream& rng);

}  // namespace spherelift

#endif
