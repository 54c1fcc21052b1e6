#pragma once

// Bootstrap tests of H_g: E[sum_t w_t S_gt Z_gt] = 0 for g = 1..d-1, FWER control,
// and selection of the grouping index g_hat = max{g : H_g rejected} + 1.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssa_autogroup/separability.hpp"
#include "ssa_autogroup/ssa.hpp"
#include "ssa_autogroup/wbdd.hpp"

namespace ssa_autogroup {

enum class Correction { Sidak, Holm };

[[nodiscard]] std::string_view to_string(Correction c) noexcept;
[[nodiscard]] Correction parse_correction(std::string_view name);

struct HypothesisTestResult {
    Index g = 0;
    double statistic = 0.0;  ///< T_obs = sum_t U_gt
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool rejected = false;
    bool degenerate = false;  ///< S_g or Z_g null; p_raw forced to 1
};

struct GroupingResult {
    std::vector<HypothesisTestResult> tests;  ///< g = 1..d-1
    Correction correction = Correction::Holm;
    double alpha = 0.1;
    Index g_hat = 1;

    // Effective configuration.
    Index series_length = 0;
    Index window = 0;
    Index rank = 0;
    Index block_size = 0;
    Index replications = 0;
    std::string taper;
    std::string aux;
    std::uint64_t seed = 0;

    Warnings warnings;
};

struct BootstrapPValue {
    double statistic = 0.0;
    double p = 1.0;
};

[[nodiscard]] double test_statistic(std::span<const double> u);

/// (#{b : |T_b| >= |T_obs|} + 1) / (B + 1).
[[nodiscard]] double bootstrap_pvalue(double observed, std::span<const double> bootstrap_statistics);

/// Centers U, draws B WBDD pseudo-samples, and compares their sums with the uncentered sum of U.
[[nodiscard]] BootstrapPValue bootstrap_pvalue(std::span<const double> u, const BootstrapConfig& cfg, Rng& rng);

/// 1 - (1 - p)^m.
[[nodiscard]] double sidak_adjust(double p, Index m);
/// Sidak adjustment with m = p.size().
[[nodiscard]] std::vector<double> sidak_adjust(std::span<const double> p);

/// Holm step-down: reject the i* smallest p-values, p_(j) <= alpha / (m - j + 1) for all j <= i*.
[[nodiscard]] std::vector<bool> holm_reject(std::span<const double> p, double alpha);
/// Step-down adjusted p-values: running max of (m - j + 1) p_(j), capped at 1.
[[nodiscard]] std::vector<double> holm_adjust(std::span<const double> p);

/// max{g : rejected[g-1]} + 1, or 1 when nothing is rejected.
[[nodiscard]] Index select_g(const std::vector<bool>& rejected);

/// Full procedure on an existing decomposition. Each g draws from the stream (cfg.seed, g).
[[nodiscard]] GroupingResult run_inference(const SsaDecomposition<double>& dec, const BootstrapConfig& cfg,
                                           Correction correction, double alpha, unsigned threads = 1);

[[nodiscard]] GroupingResult run_inference(const TimeSeries<double>& series, Index window,
                                           const BootstrapConfig& cfg, Correction correction, double alpha,
                                           unsigned threads = 1);

/// Aligned table, one row per g, followed by the selected index.
[[nodiscard]] std::string format_table(const GroupingResult& result);
/// `key=value` lines, reals at 17 significant digits.
[[nodiscard]] std::string format_key_value(const GroupingResult& result);

} // namespace ssa_autogroup
