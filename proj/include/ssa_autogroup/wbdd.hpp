#pragma once

// Wild bootstrap for dependent data (WBDD).
//
// A centered series R is turned into pseudo-observations
//     R*_t = (R_t - Rbar_{l,v}) eta_t + Rbar,
//     eta_t = sum_j v_l(t - j + 1) / ||v_l||_2 * sqrt(l) * a_j,
// where v_l(t) = v((t - 0.5) / l) is a tapered window over a block of length l,
// Rbar_{l,v} the tapered moving block mean and a_1..a_Q (Q = N - l + 1) i.i.d.
// auxiliary draws with mean 0 and variance 1/l.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssa_autogroup/error.hpp"
#include "ssa_autogroup/rng.hpp"

namespace ssa_autogroup {

using Index = Eigen::Index;

enum class TaperKind { Triangle, Trapezoid043, Custom };

/// Window function v: R -> [0, 1], zero outside [0, 1], symmetric around 1/2.
class TaperWindow {
public:
    using Function = std::function<double(double)>;

    /// v(t) = t on (0, 0.5], 1 - t on (0.5, 1), 0 elsewhere.
    [[nodiscard]] static TaperWindow triangle();
    /// Trapezoid with flat top on [0.43, 0.57] and linear flanks.
    [[nodiscard]] static TaperWindow trapezoid043();
    [[nodiscard]] static TaperWindow custom(std::string name, Function fn);

    [[nodiscard]] double operator()(double t) const { return fn_(t); }
    [[nodiscard]] TaperKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    TaperWindow(TaperKind kind, std::string name, Function fn)
        : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

    TaperKind kind_;
    std::string name_;
    Function fn_;
};

[[nodiscard]] TaperWindow parse_taper(std::string_view name);

/// Pointwise violations of the window assumptions (range, support, positivity near 1/2,
/// symmetry, monotone first half) on a grid; empty when admissible.
[[nodiscard]] std::vector<std::string> taper_violations(const TaperWindow& window, int grid_points = 2001);

struct WindowWeights {
    Eigen::VectorXd values;  ///< v_l(1..l)
    double l1 = 0.0;
    double l2 = 0.0;
};

/// v((t - 0.5) / l) for t = 1..l.
[[nodiscard]] WindowWeights window_weights(const TaperWindow& window, Index ell);

enum class AuxKind { Gaussian, PresetA3, PresetA4, PresetA5, PresetA7 };

[[nodiscard]] std::string_view to_string(AuxKind kind) noexcept;
[[nodiscard]] AuxKind parse_aux_kind(std::string_view name);

/// Fills `out` with i.i.d. draws that have mean 0 and variance 1/ell.
using AuxSampler = std::function<void(Rng& rng, Index ell, std::span<double> out)>;

struct AuxSequenceSpec {
    AuxKind kind = AuxKind::Gaussian;
    AuxSampler draw;
};

/// a_j ~ Normal(0, 1/ell).
[[nodiscard]] AuxSequenceSpec gaussian_aux();

/// Maps auxiliary-sequence kinds to samplers. Only the Gaussian default is built in;
/// the presets must be registered explicitly before use.
class AuxRegistry {
public:
    AuxRegistry();

    void add(AuxKind kind, AuxSampler sampler);
    [[nodiscard]] bool contains(AuxKind kind) const { return samplers_.contains(kind); }
    [[nodiscard]] AuxSequenceSpec resolve(AuxKind kind) const;

private:
    std::map<AuxKind, AuxSampler> samplers_;
};

struct BootstrapConfig {
    std::optional<Index> ell;  ///< block size; nullopt means max(2, round(N^(1/5)))
    TaperWindow window = TaperWindow::triangle();
    AuxSequenceSpec aux = gaussian_aux();
    Index replications = 1000;
    std::uint64_t seed = 0;
};

inline constexpr Index kMinReplications = 99;

[[nodiscard]] Index auto_block_size(Index n);
[[nodiscard]] Index resolve_block_size(const BootstrapConfig& cfg, Index n);

/// Checks block size against N and the replication count.
void validate(const BootstrapConfig& cfg, Index n);

/// Reads `key = value` lines (ell, window, aux, B, seed); '#' starts a comment.
[[nodiscard]] BootstrapConfig parse_bootstrap_config(std::string_view text, const AuxRegistry& registry = {});

/// (1/Q) sum_j sum_i v_l(i)/||v_l||_1 R_{i+j-1}, Q = N - l + 1.
[[nodiscard]] double tapered_block_mean(std::span<const double> r, const TaperWindow& window, Index ell);

[[nodiscard]] Eigen::VectorXd eta_vector(std::span<const double> aux, const TaperWindow& window, Index ell, Index n);

/// Generates WBDD pseudo-observations of a fixed series with precomputed window weights.
class WbddResampler {
public:
    WbddResampler(std::span<const double> r, const BootstrapConfig& cfg);

    [[nodiscard]] Index size() const noexcept { return centered_.size(); }
    [[nodiscard]] Index block_size() const noexcept { return ell_; }
    [[nodiscard]] double tapered_mean() const noexcept { return tapered_mean_; }
    [[nodiscard]] double plain_mean() const noexcept { return plain_mean_; }

    /// Fresh auxiliary draws from `rng`; writes R* into `out` (length N).
    void draw(Rng& rng, std::span<double> out);
    /// Sum of a fresh pseudo-observation vector.
    [[nodiscard]] double draw_sum(Rng& rng);

private:
    Eigen::VectorXd centered_;  // R_t - Rbar_{l,v}
    Eigen::VectorXd kernel_;    // sqrt(l) v_l(s) / ||v_l||_2
    Index ell_;
    double tapered_mean_;
    double plain_mean_;
    AuxSampler sampler_;
    std::vector<double> aux_;
    std::vector<double> scratch_;
};

[[nodiscard]] Eigen::VectorXd resample(std::span<const double> r, const BootstrapConfig& cfg, Rng& rng);

} // namespace ssa_autogroup
