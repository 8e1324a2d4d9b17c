#ifndef SPHERELIFT_TYPES_HPP
#define SPHERELIFT_TYPES_HPP

#include <utility>
#include <vector>

#include "spherelift/mat.hpp"

namespace spherelift {

// Tolerances shared by the domain types.
inline constexpr double kAsymmetryTol = 1e-12;   // max-norm asymmetry accepted for couplings
inline constexpr double kPsdTol = 1e-10;         // smallest eigenvalue allowed below zero
inline constexpr double kUnitNormTol = 1e-12;    // spin column norm slack

// Symmetric coupling matrix. Construction symmetrizes entries that differ by
// at most kAsymmetryTol in max-norm and rejects anything worse, so the stored
// matrix is symmetric bit-for-bit.
class InteractionMatrix {
public:
    explicit InteractionMatrix(Mat entries);

    int k() const { return m_.rows(); }
    const Mat& mat() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < k(); ++i) t += m_(i, i);
        return t;
    }

    InteractionMatrix permuted(const std::vector<int>& perm) const;
    InteractionMatrix scaled(double c) const;

private:
    Mat m_;
};

// A fully specified model instance: couplings, inverse temperature, spin
// dimension. Only the over-parameterized n > k regime is admitted.
struct ModelParams {
    InteractionMatrix A;
    double beta;
    long n;

    int k() const { return A.k(); }
};

ModelParams validate_params(Mat A_raw, double beta, long n);

// k x k positive semidefinite matrix with exactly unit diagonal.
class ElliptopeMatrix {
public:
    explicit ElliptopeMatrix(Mat entries);

    int k() const { return m_.rows(); }
    const Mat& mat() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Mat m_;
};

// Strict lower triangle of a correlation matrix, row-major over pairs i > j.
// Admits the closed set (PSD within kPsdTol); strict definiteness is the
// density evaluators' business.
class LowerCorrelations {
public:
    LowerCorrelations(int k, std::vector<double> entries);

    // From the strict lower triangle of a symmetric matrix.
    static LowerCorrelations from_matrix(const Mat& S);

    int k() const { return k_; }
    const std::vector<double>& entries() const { return e_; }
    // entry for pair (i, j), i > j, 0-based
    double at(int i, int j) const { return e_[upper_index(j, i, k_)]; }

    Mat assemble_S() const;

private:
    int k_;
    std::vector<double> e_;
};

// Strict upper triangle of a unit-column upper-triangular factor, row-major
// over pairs i < j. Plain holder: support membership (every column's strict
// entries having squared sum < 1) is checked by the operations that need it.
class UpperREntries {
public:
    UpperREntries(int k, std::vector<double> entries);

    static UpperREntries zeros(int k) { return {k, std::vector<double>(tri_count(k), 0.0)}; }

    int k() const { return k_; }
    const std::vector<double>& entries() const { return e_; }
    std::vector<double>& entries() { return e_; }
    double at(int i, int j) const { return e_[upper_index(i, j, k_)]; }
    void set(int i, int j, double v) { e_[upper_index(i, j, k_)] = v; }

    // squared norm of the strict part of column j
    double column_strict_sq(int j) const;
    bool in_support() const;

private:
    int k_;
    std::vector<double> e_;
};

// Upper-triangular factor with positive diagonal and unit column norms.
class CholeskyFactor {
public:
    explicit CholeskyFactor(Mat entries);

    int k() const { return m_.rows(); }
    const Mat& mat() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    UpperREntries strict_upper() const;
    Mat gram() const;  // R^T R

private:
    Mat m_;
};

// Spin configuration: k unit vectors in R^n, stored column-major.
class SpinSample {
public:
    SpinSample(ColMat columns);

    int n() const { return x_.n(); }
    int k() const { return x_.k(); }
    const ColMat& cols() const { return x_; }
    std::span<const double> col(int j) const { return x_.col(j); }

    Mat gram() const;  // X^T X

private:
    ColMat x_;
};

}  // namespace spherelift

#endif
