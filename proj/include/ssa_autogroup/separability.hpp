#pragma once

// Weighted (w-) scalar products and correlations between reconstructed series,
// plus the signal/noise split that feeds the grouping tests.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ssa_autogroup/ssa.hpp"

namespace ssa_autogroup {

/// w_t = min{t, L, N - t + 1}: how often y_t appears in the L-trajectory matrix.
template <typename Scalar = double>
struct WeightVector {
    Vector<Scalar> values;
    Index window = 0;

    [[nodiscard]] Index size() const noexcept { return values.size(); }
};

template <typename Scalar = double>
[[nodiscard]] WeightVector<Scalar> weights(Index n, Index window) {
    check_window(n, window);
    WeightVector<Scalar> w{Vector<Scalar>(n), window};
    for (Index t = 1; t <= n; ++t) {
        w.values(t - 1) = static_cast<Scalar>(std::min({t, window, n - t + 1}));
    }
    return w;
}

namespace detail {

template <typename A, typename B, typename Scalar>
void check_lengths(const Eigen::MatrixBase<A>& s, const Eigen::MatrixBase<B>& z, const WeightVector<Scalar>& w) {
    if (s.size() != z.size() || s.size() != w.size()) {
        throw Error(ErrorKind::LengthMismatch, "series lengths " + std::to_string(s.size()) + ", " +
                                                   std::to_string(z.size()) + " and weights " +
                                                   std::to_string(w.size()) + " differ");
    }
}

} // namespace detail

template <typename A, typename B, typename Scalar>
[[nodiscard]] Scalar wscalar(const Eigen::MatrixBase<A>& s, const Eigen::MatrixBase<B>& z,
                             const WeightVector<Scalar>& w) {
    detail::check_lengths(s, z, w);
    return (w.values.array() * s.array() * z.array()).sum();
}

template <typename A, typename Scalar>
[[nodiscard]] Scalar wnorm(const Eigen::MatrixBase<A>& s, const WeightVector<Scalar>& w) {
    return std::sqrt(wscalar(s, s, w));
}

/// Weighted norm at or below this value marks a null component.
///
/// `scale` is the magnitude of the series the component was taken from.
template <typename Scalar>
[[nodiscard]] Scalar degeneracy_threshold(Scalar scale, const WeightVector<Scalar>& w) {
    return Scalar(1e-10) * (scale * std::sqrt(w.values.sum()) + Scalar(1e-300));
}

/// w-correlation <S,Z>_w / (||S||_w ||Z||_w).
///
/// Throws DegenerateComponent if either weighted norm is null relative to `scale`,
/// which defaults to the largest absolute value of S and Z.
template <typename A, typename B, typename Scalar>
[[nodiscard]] Scalar wcorr(const Eigen::MatrixBase<A>& s, const Eigen::MatrixBase<B>& z, const WeightVector<Scalar>& w,
                           std::optional<Scalar> scale = std::nullopt) {
    detail::check_lengths(s, z, w);
    const Scalar ref = scale.value_or(std::max(s.cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff()));
    const Scalar tol = degeneracy_threshold(ref, w);
    const Scalar ns = wnorm(s, w);
    const Scalar nz = wnorm(z, w);
    if (ns <= tol || nz <= tol) {
        throw Error(ErrorKind::DegenerateComponent, "weighted norm of a component is null");
    }
    const Scalar r = wscalar(s, z, w) / (ns * nz);
    return std::clamp(r, Scalar(-1), Scalar(1));
}

template <typename Scalar = double>
struct WcorrMatrix {
    Matrix<Scalar> values;  ///< |w-correlation| between elementary components, d x d
    Warnings warnings;
};

/// Absolute w-correlations of the elementary reconstructed components.
///
/// Entries involving a null component are set to 0 and reported as warnings.
template <typename Scalar>
[[nodiscard]] WcorrMatrix<Scalar> wcorr_matrix(const SsaDecomposition<Scalar>& dec) {
    const Index d = dec.rank();
    if (d < 1) {
        throw Error(ErrorKind::DegenerateComponent, "decomposition has no positive eigenvalues (d = 0)");
    }
    const auto w = weights<Scalar>(dec.series_length(), dec.window());
    const Matrix<Scalar> comps = elementary_series(dec);
    const Scalar scale = dec.series().cwiseAbs().maxCoeff();
    const Scalar tol = degeneracy_threshold(scale, w);

    Vector<Scalar> norms(d);
    for (Index i = 0; i < d; ++i) {
        norms(i) = wnorm(comps.col(i), w);
    }

    WcorrMatrix<Scalar> out{Matrix<Scalar>::Zero(d, d), {}};
    for (Index i = 0; i < d; ++i) {
        if (norms(i) <= tol) {
            out.warnings.push_back({"wcorr_matrix", "component " + std::to_string(i + 1) + " is null; row set to 0"});
            continue;
        }
        out.values(i, i) = Scalar(1);
        for (Index j = i + 1; j < d; ++j) {
            if (norms(j) <= tol) {
                continue;
            }
            const Scalar r = std::abs(wscalar(comps.col(i), comps.col(j), w)) / (norms(i) * norms(j));
            out.values(i, j) = out.values(j, i) = std::min(r, Scalar(1));
        }
    }
    return out;
}

/// Reconstructed signal S_g (components 1..g), residual Z_g = Y - S_g and U_gt = w_t S_gt Z_gt.
template <typename Scalar = double>
struct SignalNoiseSplit {
    Index g = 0;
    Vector<Scalar> signal;
    Vector<Scalar> noise;
    Vector<Scalar> products;
};

template <typename A, typename B, typename Scalar>
[[nodiscard]] Vector<Scalar> u_series(const Eigen::MatrixBase<A>& s, const Eigen::MatrixBase<B>& z,
                                      const WeightVector<Scalar>& w) {
    detail::check_lengths(s, z, w);
    return (w.values.array() * s.array() * z.array()).matrix();
}

/// Signal/noise split at grouping index g, 1 <= g <= d.
///
/// For g = d the split is exactly (Y, 0) so U_d vanishes identically.
template <typename Scalar>
[[nodiscard]] SignalNoiseSplit<Scalar> split(const SsaDecomposition<Scalar>& dec, Index g) {
    dec.check_component(g);
    SignalNoiseSplit<Scalar> out;
    out.g = g;
    if (g == dec.rank()) {
        out.signal = dec.series();
        out.noise = Vector<Scalar>::Zero(dec.series_length());
    } else {
        out.signal = reconstruct_range(dec, Index{1}, g);
        out.noise = dec.series() - out.signal;
    }
    out.products = u_series(out.signal, out.noise, weights<Scalar>(dec.series_length(), dec.window()));
    return out;
}

} // namespace ssa_autogroup
