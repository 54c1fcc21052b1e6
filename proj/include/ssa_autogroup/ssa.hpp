#pragma once

// Basic singular spectrum analysis: embedding, SVD, grouping, diagonal averaging.
//
// All routines are templated on the scalar type and accept any Eigen dense
// expression where a series or matrix is expected. Component indices in the
// public API are 1-based, matching the usual SSA notation (X_1, ..., X_d).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ssa_autogroup/error.hpp"

namespace ssa_autogroup {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Relative threshold below which lambda_i / lambda_1 is treated as zero.
inline constexpr double kRankTolerance = 1e-12;

/// Largest admissible window for a series of length n (floor(n/2)).
[[nodiscard]] constexpr Index max_window(Index n) noexcept { return n / 2; }

/// Default window length used when none is supplied.
[[nodiscard]] constexpr Index default_window(Index n) noexcept { return n / 2; }

inline void check_window(Index n, Index window) {
    if (window < 2 || window > max_window(n)) {
        throw Error(ErrorKind::WindowOutOfRange,
                    "window length " + std::to_string(window) + " outside [2, " +
                        std::to_string(max_window(n)) + "] for N = " + std::to_string(n));
    }
}

template <typename Derived>
void check_finite(const Eigen::DenseBase<Derived>& values) {
    for (Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(static_cast<double>(values.derived().coeff(i)))) {
            throw Error(ErrorKind::NonFiniteInput, "non-finite value at position " + std::to_string(i + 1));
        }
    }
}

/// A validated univariate series: at least 4 finite observations, optional labels (e.g. dates).
template <typename Scalar = double>
class TimeSeries {
public:
    explicit TimeSeries(Vector<Scalar> values, std::vector<std::string> labels = {})
        : values_(std::move(values)), labels_(std::move(labels)) {
        if (values_.size() == 0) {
            throw Error(ErrorKind::EmptySeries, "series has no observations");
        }
        if (values_.size() < 4) {
            throw Error(ErrorKind::WindowOutOfRange,
                        "series of length " + std::to_string(values_.size()) + " admits no window length");
        }
        if (!labels_.empty() && static_cast<Index>(labels_.size()) != values_.size()) {
            throw Error(ErrorKind::LengthMismatch, "labels and values differ in length");
        }
        check_finite(values_);
    }

    [[nodiscard]] const Vector<Scalar>& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] Index size() const noexcept { return values_.size(); }

private:
    Vector<Scalar> values_;
    std::vector<std::string> labels_;
};

/// L x K Hankel matrix whose c-th column is (y_c, ..., y_{c+L-1}).
template <typename Scalar = double>
struct TrajectoryMatrix {
    Matrix<Scalar> entries;

    [[nodiscard]] Index window() const noexcept { return entries.rows(); }
    [[nodiscard]] Index lagged_count() const noexcept { return entries.cols(); }
    [[nodiscard]] Index series_length() const noexcept { return entries.rows() + entries.cols() - 1; }
};

/// Hankel embedding of a raw series; only checks the window bound.
template <typename Derived>
[[nodiscard]] auto hankel_embed(const Eigen::MatrixBase<Derived>& y, Index window) {
    using Scalar = typename Derived::Scalar;
    const Index n = y.size();
    check_window(n, window);
    const Index k = n - window + 1;
    Matrix<Scalar> x(window, k);
    for (Index c = 0; c < k; ++c) {
        x.col(c) = y.segment(c, window);
    }
    return x;
}

template <typename Scalar>
[[nodiscard]] TrajectoryMatrix<Scalar> embed(const TimeSeries<Scalar>& series, Index window) {
    return TrajectoryMatrix<Scalar>{hankel_embed(series.values(), window)};
}

/// Averages the anti-diagonals i + j = const of an L x K matrix into a series of length L + K - 1.
template <typename Derived>
[[nodiscard]] auto diagonal_average(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    const Index rows = m.rows();
    const Index cols = m.cols();
    if (rows < 1 || cols < 1) {
        throw Error(ErrorKind::LengthMismatch, "diagonal averaging needs a non-empty matrix");
    }
    const typename Derived::PlainObject x = m;
    Vector<Scalar> sums = Vector<Scalar>::Zero(rows + cols - 1);
    Vector<Scalar> counts = Vector<Scalar>::Zero(rows + cols - 1);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            sums(i + j) += x(i, j);
            counts(i + j) += Scalar(1);
        }
    }
    return Vector<Scalar>(sums.cwiseQuotient(counts));
}

/// Eigentriples (lambda_i, U_i, V_i) of a trajectory matrix, lambda sorted decreasingly.
///
/// Only the d = rank(X) triples with lambda_i > kRankTolerance * lambda_1 are kept.
/// Each U_i has its first nonzero coordinate positive.
template <typename Scalar = double>
class SsaDecomposition {
public:
    SsaDecomposition(Vector<Scalar> series, Index window, Vector<Scalar> eigenvalues, Matrix<Scalar> left,
                     Matrix<Scalar> right)
        : series_(std::move(series)), window_(window), eigenvalues_(std::move(eigenvalues)),
          left_(std::move(left)), right_(std::move(right)) {}

    [[nodiscard]] Index window() const noexcept { return window_; }
    [[nodiscard]] Index lagged_count() const noexcept { return series_.size() - window_ + 1; }
    [[nodiscard]] Index series_length() const noexcept { return series_.size(); }
    [[nodiscard]] Index rank() const noexcept { return eigenvalues_.size(); }

    [[nodiscard]] const Vector<Scalar>& series() const noexcept { return series_; }
    [[nodiscard]] const Vector<Scalar>& eigenvalues() const noexcept { return eigenvalues_; }
    /// L x d, column i-1 is U_i.
    [[nodiscard]] const Matrix<Scalar>& left() const noexcept { return left_; }
    /// K x d, column i-1 is V_i.
    [[nodiscard]] const Matrix<Scalar>& right() const noexcept { return right_; }

    [[nodiscard]] Scalar singular_value(Index i) const { return std::sqrt(eigenvalues_(i - 1)); }

    /// Elementary matrix X_i = sqrt(lambda_i) U_i V_i^T (1-based i).
    [[nodiscard]] Matrix<Scalar> elementary(Index i) const {
        check_component(i);
        return singular_value(i) * left_.col(i - 1) * right_.col(i - 1).transpose();
    }

    void check_component(Index i) const {
        if (i < 1 || i > rank()) {
            throw Error(ErrorKind::IndexOutOfRank,
                        "component " + std::to_string(i) + " outside [1, " + std::to_string(rank()) + "]");
        }
    }

private:
    Vector<Scalar> series_;
    Index window_;
    Vector<Scalar> eigenvalues_;
    Matrix<Scalar> left_;
    Matrix<Scalar> right_;
};

template <typename Scalar>
[[nodiscard]] SsaDecomposition<Scalar> decompose(const TrajectoryMatrix<Scalar>& x) {
    const Matrix<Scalar>& m = x.entries;
    const Index rows = m.rows();
    const Index cols = m.cols();
    check_window(rows + cols - 1, rows);
    check_finite(m);

    Vector<Scalar> series(rows + cols - 1);
    series.head(rows) = m.col(0);
    series.tail(cols - 1) = m.row(rows - 1).tail(cols - 1).transpose();

    Eigen::BDCSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericalFailure, "singular value decomposition did not converge");
    }
    const Vector<Scalar> sigma = svd.singularValues();
    const Vector<Scalar> lambda = sigma.array().square().matrix();

    Index rank = 0;
    if (lambda.size() > 0 && lambda(0) > Scalar(0)) {
        const Scalar cutoff = Scalar(kRankTolerance) * lambda(0);
        while (rank < lambda.size() && lambda(rank) > cutoff) {
            ++rank;
        }
    }

    Matrix<Scalar> left = svd.matrixU().leftCols(rank);
    Matrix<Scalar> right = svd.matrixV().leftCols(rank);
    for (Index i = 0; i < rank; ++i) {
        const Scalar floor = Scalar(16) * Eigen::NumTraits<Scalar>::epsilon() * left.col(i).cwiseAbs().maxCoeff();
        for (Index r = 0; r < rows; ++r) {
            if (std::abs(left(r, i)) > floor) {
                if (left(r, i) < Scalar(0)) {
                    left.col(i) = -left.col(i);
                    right.col(i) = -right.col(i);
                }
                break;
            }
        }
    }
    return SsaDecomposition<Scalar>(std::move(series), rows, lambda.head(rank), std::move(left), std::move(right));
}

template <typename Scalar>
[[nodiscard]] SsaDecomposition<Scalar> decompose(const TimeSeries<Scalar>& series, Index window) {
    return decompose(embed(series, window));
}

/// Sum of the elementary matrices over the index set I (1-based), diagonally averaged.
template <typename Scalar>
[[nodiscard]] Vector<Scalar> reconstruct(const SsaDecomposition<Scalar>& dec, std::span<const Index> indices) {
    if (indices.empty()) {
        throw Error(ErrorKind::IndexOutOfRank, "empty index set");
    }
    std::vector<Index> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::IndexOutOfRank, "duplicate index in group");
    }
    Matrix<Scalar> weighted_left(dec.window(), static_cast<Index>(sorted.size()));
    Matrix<Scalar> right(dec.lagged_count(), static_cast<Index>(sorted.size()));
    for (std::size_t c = 0; c < sorted.size(); ++c) {
        const Index i = sorted[c];
        dec.check_component(i);
        weighted_left.col(static_cast<Index>(c)) = dec.singular_value(i) * dec.left().col(i - 1);
        right.col(static_cast<Index>(c)) = dec.right().col(i - 1);
    }
    return diagonal_average(weighted_left * right.transpose());
}

/// Reconstruction over the contiguous block {first, ..., last}.
template <typename Scalar>
[[nodiscard]] Vector<Scalar> reconstruct_range(const SsaDecomposition<Scalar>& dec, Index first, Index last) {
    if (first > last) {
        throw Error(ErrorKind::IndexOutOfRank, "empty index range");
    }
    dec.check_component(first);
    dec.check_component(last);
    const Index count = last - first + 1;
    const Matrix<Scalar> weighted_left =
        dec.left().middleCols(first - 1, count) * dec.eigenvalues().segment(first - 1, count).cwiseSqrt().asDiagonal();
    return diagonal_average(weighted_left * dec.right().middleCols(first - 1, count).transpose());
}

/// Elementary reconstructed series as columns of an N x d matrix.
template <typename Scalar>
[[nodiscard]] Matrix<Scalar> elementary_series(const SsaDecomposition<Scalar>& dec) {
    Matrix<Scalar> out(dec.series_length(), dec.rank());
    for (Index i = 1; i <= dec.rank(); ++i) {
        out.col(i - 1) = diagonal_average(dec.elementary(i));
    }
    return out;
}

} // namespace ssa_autogroup
