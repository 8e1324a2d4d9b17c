#ifndef SPHERELIFT_DENSITIES_HPP
#define SPHERELIFT_DENSITIES_HPP

#include "spherelift/types.hpp"

namespace spherelift {

// Log of the spherical-volume constant relating the spin distribution to the
// correlation-matrix density. Stable up to n ~ 1e6 (log-gamma throughout).
double log_norm_const(long n, int k);

// Log of the unnormalized density of the strict lower correlations,
// k*ln 2 + log_norm_const + beta*n*tr(S(L) A) + ((n-k-1)/2) * logdet S(L).
// Throws NotPositiveDefinite when S(L) is singular or indefinite.
double log_density_L(const LowerCorrelations& L, const ModelParams& params);

// Log of the unnormalized density of the strict upper triangular-factor
// entries, with each diagonal entry reconstructed as
// R_jj = sqrt(1 - sum_{i<j} R_ij^2). Throws OutOfSupport when a column's
// strict entries have squared sum >= 1. Normalization constants are not
// included here (only ratios of this density are ever consumed).
double log_density_U(const UpperREntries& U, const ModelParams& params);

// tr(A S)
double energy(const ElliptopeMatrix& S, const InteractionMatrix& A);

}  // namespace spherelift

#endif
