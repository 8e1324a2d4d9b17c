#ifndef SPHERELIFT_LINALG_HPP
#define SPHERELIFT_LINALG_HPP

#include <vector>

#include "spherelift/mat.hpp"

namespace spherelift {

// Dense symmetric k x k helpers. Everything is O(k^3) with k small, so the
// loops stay plain and allocation-free where it matters.

// Lower Cholesky factor L with L L^T = S. Returns false on a nonpositive pivot.
bool try_chol_lower(const Mat& S, Mat& L);

// Throwing variant (NotPositiveDefinite).
Mat chol_lower(const Mat& S);

// log det(S) from a lower factor: 2 * sum log L_jj.
double logdet_from_chol(const Mat& L);

// log det(S) via Cholesky; throws NotPositiveDefinite.
double logdet_spd(const Mat& S);

// Solve S x = b given the lower factor of S.
std::vector<double> chol_solve(const Mat& L, const std::vector<double>& b);

// Inverse of an SPD matrix via its Cholesky factor; result is exactly
// symmetric (averaged).
Mat spd_inverse(const Mat& S);

// Smallest eigenvalue of a symmetric matrix by the cyclic Jacobi method.
double sym_eig_min(const Mat& S);

}  // namespace spherelift

#endif
