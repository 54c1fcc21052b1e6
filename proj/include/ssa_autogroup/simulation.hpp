#pragma once

// Monte-Carlo study: signal-plus-noise series, proposed grouping vs. clustering baseline.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssa_autogroup/hc_baseline.hpp"
#include "ssa_autogroup/inference.hpp"

namespace ssa_autogroup {

enum class Signal { F1, F2, F3 };

[[nodiscard]] std::string_view to_string(Signal s) noexcept;
[[nodiscard]] Signal parse_signal(std::string_view name);

/// f1 = sin(2 pi t / 3), f2 = exp(0.2 t), f3 = 0.7 cos(pi t / 2) + 0.5 cos(pi t / 3).
[[nodiscard]] double signal_value(Signal s, double t);

/// Number of leading components that carry the signal: 2, 1, 4.
[[nodiscard]] Index true_grouping(Signal s) noexcept;

struct Scenario {
    Signal signal = Signal::F1;
    double snr = 5.0;  ///< Var(f) / Var(noise); +inf gives a noiseless series
    Index length = 50;
    std::optional<Index> window;  ///< defaults to N/2
    Index reps = 100;
    double alpha = 0.1;
    BootstrapConfig bootstrap;
    Correction correction = Correction::Holm;
    Linkage linkage = Linkage::Complete;
};

void validate(const Scenario& scenario);

/// (f(1), ..., f(N)).
[[nodiscard]] Eigen::VectorXd signal_series(Signal s, Index n);

/// Sample variance (denominator N - 1) of the noiseless signal divided by the SNR.
[[nodiscard]] double noise_variance(const Scenario& scenario);

/// y_t = f(t) + eps_t, eps_t i.i.d. Normal(0, noise_variance).
[[nodiscard]] Eigen::VectorXd generate_series(const Scenario& scenario, Rng& rng);

struct StudyRow {
    Signal signal = Signal::F1;
    double snr = 0.0;
    Index reps = 0;
    double mean_g_hat = 0.0;
    double sd_g_hat = 0.0;   ///< sample sd
    double fwer_hat = 0.0;   ///< share of reps with g_hat > g_star
    double mean_g_hc = 0.0;
    double sd_g_hc = 0.0;
    Index g_star = 0;
    Index failures = 0;      ///< reps lost to NumericalFailure, excluded from the aggregates
    std::vector<Index> g_hat;
    std::vector<Index> g_hc;
};

/// Aggregates over per-rep indices; `reps` counts every attempted rep.
[[nodiscard]] StudyRow summarize(Signal signal, double snr, Index reps, const std::vector<Index>& g_hat,
                                 const std::vector<Index>& g_hc);

/// Rep r of scenario s uses streams derived from (master_seed, s, r).
[[nodiscard]] std::vector<StudyRow> run_study(std::span<const Scenario> scenarios, std::uint64_t master_seed,
                                              unsigned threads = 1);

/// Header `signal,snr,reps,mean_g_hat,sd_g_hat,fwer_hat,mean_g_hc,sd_g_hc,g_star`, one row per scenario.
[[nodiscard]] std::string study_csv(std::span<const StudyRow> rows);

/// Mean (sd) per signal and SNR for both methods.
[[nodiscard]] std::string study_table(std::span<const StudyRow> rows);

} // namespace ssa_autogroup
