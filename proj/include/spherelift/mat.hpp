#ifndef SPHERELIFT_MAT_HPP
#define SPHERELIFT_MAT_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spherelift/errors.hpp"

namespace spherelift {

// Dense row-major matrix. Everything in this project is small (k x k) or
// tall-skinny (n x k, stored separately as ColMat), so no fancy storage.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

    static Mat identity(int k) {
        Mat m(k, k);
        for (int i = 0; i < k; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {d_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {d_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }

    const std::vector<double>& data() const { return d_; }
    std::vector<double>& data() { return d_; }

    bool is_symmetric_exact() const {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    double max_asymmetry() const {
        double m = 0.0;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                m = std::max(m, std::fabs((*this)(i, j) - (*this)(j, i)));
        return m;
    }

    bool all_finite() const {
        for (double v : d_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> d_;
};

// Column-major n x k matrix: each column is contiguous. Used for spin
// configurations and Stiefel points, where all the work is per column.
class ColMat {
public:
    ColMat() = default;
    ColMat(int n, int k) : n_(n), k_(k), d_(static_cast<size_t>(n) * k, 0.0) {}

    int n() const { return n_; }
    int k() const { return k_; }

    std::span<double> col(int j) { return {d_.data() + static_cast<size_t>(j) * n_, static_cast<size_t>(n_)}; }
    std::span<const double> col(int j) const { return {d_.data() + static_cast<size_t>(j) * n_, static_cast<size_t>(n_)}; }

    double& operator()(int i, int j) { return d_[static_cast<size_t>(j) * n_ + i]; }
    double operator()(int i, int j) const { return d_[static_cast<size_t>(j) * n_ + i]; }

    std::vector<double>& data() { return d_; }
    const std::vector<double>& data() const { return d_; }

    friend bool operator==(const ColMat&, const ColMat&) = default;

private:
    int n_ = 0, k_ = 0;
    std::vector<double> d_;
};

// Flat index helpers for strict-triangle storage, row-major over pairs:
// upper (i<j): (0,1),(0,2),...,(0,k-1),(1,2),...   lower (i>j) mirrors it.
inline int tri_count(int k) { return k * (k - 1) / 2; }

inline int upper_index(int i, int j, int k) {
    // i < j, 0-based
    return i * k - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace spherelift

#endif
