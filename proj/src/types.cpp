#include "spherelift/types.hpp"

#include <cmath>
#include <string>

#include "spherelift/kernels.hpp"
#include "spherelift/linalg.hpp"

namespace spherelift {

InteractionMatrix::InteractionMatrix(Mat entries) : m_(std::move(entries)) {
    if (!m_.square() || m_.rows() < 1)
        throw ValidationError(ValidationError::Kind::NonSquare,
                              "coupling matrix must be square and nonempty");
    if (!m_.all_finite())
        throw ValidationError(ValidationError::Kind::NonFinite,
                              "coupling matrix has non-finite entries");
    const double asym = m_.max_asymmetry();
    if (asym > kAsymmetryTol)
        throw ValidationError(ValidationError::Kind::AsymmetryTooLarge,
                              "coupling matrix asymmetry " + std::to_string(asym) +
                                  " exceeds 1e-12 max-norm tolerance");
    for (int i = 0; i < m_.rows(); ++i)
        for (int j = i + 1; j < m_.cols(); ++j) {
            const double v = 0.5 * (m_(i, j) + m_(j, i));
            m_(i, j) = m_(j, i) = v;
        }
}

InteractionMatrix InteractionMatrix::permuted(const std::vector<int>& perm) const {
    Mat p(k(), k());
    for (int i = 0; i < k(); ++i)
        for (int j = 0; j < k(); ++j) p(i, j) = m_(perm[i], perm[j]);
    return InteractionMatrix(std::move(p));
}

InteractionMatrix InteractionMatrix::scaled(double c) const {
    Mat p = m_;
    for (double& v : p.data()) v *= c;
    return InteractionMatrix(std::move(p));
}

ModelParams validate_params(Mat A_raw, double beta, long n) {
    InteractionMatrix A(std::move(A_raw));
    if (!std::isfinite(beta) || beta < 0.0)
        throw ValidationError(ValidationError::Kind::BadParameter,
                              "beta must be finite and >= 0");
    if (n <= A.k())
        throw ValidationError(ValidationError::Kind::NotOverparameterized,
                              "spin dimension n = " + std::to_string(n) +
                                  " must exceed the number of sites k = " + std::to_string(A.k()));
    return ModelParams{std::move(A), beta, n};
}

ElliptopeMatrix::ElliptopeMatrix(Mat entries) : m_(std::move(entries)) {
    if (!m_.square() || m_.rows() < 1)
        throw ValidationError(ValidationError::Kind::NonSquare, "correlation matrix must be square");
    if (!m_.all_finite())
        throw ValidationError(ValidationError::Kind::NonFinite,
                              "correlation matrix has non-finite entries");
    if (!m_.is_symmetric_exact())
        throw ValidationError(ValidationError::Kind::AsymmetryTooLarge,
                              "correlation matrix must be exactly symmetric");
    for (int i = 0; i < m_.rows(); ++i)
        if (m_(i, i) != 1.0)
            throw ValidationError(ValidationError::Kind::BadParameter,
                                  "correlation matrix diagonal must be exactly 1");
    for (int i = 0; i < m_.rows(); ++i)
        for (int j = i + 1; j < m_.cols(); ++j)
            if (std::fabs(m_(i, j)) > 1.0 + kAsymmetryTol)
                throw ValidationError(ValidationError::Kind::BadParameter,
                                      "correlation entries must lie in [-1, 1]");
    if (sym_eig_min(m_) < -kPsdTol)
        throw NotPositiveDefinite("correlation matrix is not positive semidefinite");
}

LowerCorrelations::LowerCorrelations(int k, std::vector<double> entries)
    : k_(k), e_(std::move(entries)) {
    if (k_ < 1 || static_cast<int>(e_.size()) != tri_count(k_))
        throw DimensionMismatch("lower-triangle entry count does not match k");
    // membership check: the assembled matrix must be a valid correlation matrix
    ElliptopeMatrix check(assemble_S());
}

LowerCorrelations LowerCorrelations::from_matrix(const Mat& S) {
    const int k = S.rows();
    std::vector<double> e(tri_count(k));
    for (int j = 0; j < k; ++j)
        for (int i = j + 1; i < k; ++i) e[upper_index(j, i, k)] = S(i, j);
    return {k, std::move(e)};
}

Mat LowerCorrelations::assemble_S() const {
    Mat S = Mat::identity(k_);
    for (int j = 0; j < k_; ++j)
        for (int i = j + 1; i < k_; ++i) S(i, j) = S(j, i) = e_[upper_index(j, i, k_)];
    return S;
}

UpperREntries::UpperREntries(int k, std::vector<double> entries)
    : k_(k), e_(std::move(entries)) {
    if (k_ < 1 || static_cast<int>(e_.size()) != tri_count(k_))
        throw DimensionMismatch("upper-triangle entry count does not match k");
}

double UpperREntries::column_strict_sq(int j) const {
    double s = 0.0;
    for (int i = 0; i < j; ++i) {
        const double v = e_[upper_index(i, j, k_)];
        s += v * v;
    }
    return s;
}

bool UpperREntries::in_support() const {
    for (int j = 1; j < k_; ++j)
        if (column_strict_sq(j) >= 1.0) return false;
    return true;
}

CholeskyFactor::CholeskyFactor(Mat entries) : m_(std::move(entries)) {
    if (!m_.square() || m_.rows() < 1)
        throw DimensionMismatch("triangular factor must be square");
    const int k = m_.rows();
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < i; ++j)
            if (m_(i, j) != 0.0)
                throw ValidationError(ValidationError::Kind::BadParameter,
                                      "factor must be upper triangular");
    for (int j = 0; j < k; ++j) {
        if (!(m_(j, j) > 0.0))
            throw ValidationError(ValidationError::Kind::BadParameter,
                                  "factor diagonal must be strictly positive");
        double nrm = 0.0;
        for (int i = 0; i <= j; ++i) nrm += m_(i, j) * m_(i, j);
        if (std::fabs(nrm - 1.0) > 64.0 * kUnitNormTol)
            throw ValidationError(ValidationError::Kind::BadParameter,
                                  "factor columns must have unit norm");
    }
}

UpperREntries CholeskyFactor::strict_upper() const {
    const int k = m_.rows();
    std::vector<double> e(tri_count(k));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) e[upper_index(i, j, k)] = m_(i, j);
    return {k, std::move(e)};
}

Mat CholeskyFactor::gram() const {
    const int k = m_.rows();
    Mat S(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            double s = 0.0;
            for (int m = 0; m <= std::min(i, j); ++m) s += m_(m, i) * m_(m, j);
            S(i, j) = S(j, i) = s;
        }
    return S;
}

SpinSample::SpinSample(ColMat columns) : x_(std::move(columns)) {
    const auto& ops = kernels::active();
    for (int j = 0; j < x_.k(); ++j) {
        auto c = x_.col(j);
        const double nrm = std::sqrt(ops.dot(c.data(), c.data(), c.size()));
        if (std::fabs(nrm - 1.0) > kUnitNormTol)
            throw ValidationError(ValidationError::Kind::BadParameter,
                                  "spin column " + std::to_string(j) + " is not unit length");
    }
}

Mat SpinSample::gram() const {
    const auto& ops = kernels::active();
    const int k = x_.k();
    Mat S(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            const double s = ops.dot(x_.col(i).data(), x_.col(j).data(), x_.col(i).size());
            S(i, j) = S(j, i) = s;
        }
    return S;
}

}  // namespace spherelift
