#include "ssa_autogroup/simulation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ssa_autogroup/parallel.hpp"

namespace ssa_autogroup {

std::string_view to_string(Signal s) noexcept {
    switch (s) {
    case Signal::F1: return "f1";
    case Signal::F2: return "f2";
    case Signal::F3: return "f3";
    }
    return "unknown";
}

Signal parse_signal(std::string_view name) {
    if (name == "f1") {
        return Signal::F1;
    }
    if (name == "f2") {
        return Signal::F2;
    }
    if (name == "f3") {
        return Signal::F3;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown signal '" + std::string(name) + "' (expected f1|f2|f3)");
}

double signal_value(Signal s, double t) {
    using std::numbers::pi;
    switch (s) {
    case Signal::F1: return std::sin(2.0 * pi * t / 3.0);
    case Signal::F2: return std::exp(0.2 * t);
    case Signal::F3: return 0.7 * std::cos(pi * t / 2.0) + 0.5 * std::cos(pi * t / 3.0);
    }
    return 0.0;
}

Index true_grouping(Signal s) noexcept {
    switch (s) {
    case Signal::F1: return 2;
    case Signal::F2: return 1;
    case Signal::F3: return 4;
    }
    return 0;
}

void validate(const Scenario& scenario) {
    if (!(scenario.snr > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "SNR must be positive");
    }
    if (scenario.reps < 1) {
        throw Error(ErrorKind::InvalidConfig, "at least one repetition required");
    }
    if (!(scenario.alpha > 0.0 && scenario.alpha < 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 1)");
    }
    check_window(scenario.length, scenario.window.value_or(default_window(scenario.length)));
    validate(scenario.bootstrap, scenario.length);
}

Eigen::VectorXd signal_series(Signal s, Index n) {
    Eigen::VectorXd f(n);
    for (Index t = 1; t <= n; ++t) {
        f(t - 1) = signal_value(s, static_cast<double>(t));
    }
    return f;
}

double noise_variance(const Scenario& scenario) {
    if (std::isinf(scenario.snr)) {
        return 0.0;
    }
    const Eigen::VectorXd f = signal_series(scenario.signal, scenario.length);
    const double var = (f.array() - f.mean()).square().sum() / static_cast<double>(f.size() - 1);
    return var / scenario.snr;
}

Eigen::VectorXd generate_series(const Scenario& scenario, Rng& rng) {
    Eigen::VectorXd y = signal_series(scenario.signal, scenario.length);
    const double sd = std::sqrt(noise_variance(scenario));
    if (sd > 0.0) {
        std::normal_distribution<double> noise(0.0, sd);
        for (Index t = 0; t < y.size(); ++t) {
            y(t) += noise(rng);
        }
    }
    return y;
}

namespace {

std::pair<double, double> mean_sd(const std::vector<Index>& values) {
    if (values.empty()) {
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
    double sum = 0.0;
    for (const Index v : values) {
        sum += static_cast<double>(v);
    }
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (const Index v : values) {
        ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

} // namespace

StudyRow summarize(Signal signal, double snr, Index reps, const std::vector<Index>& g_hat,
                   const std::vector<Index>& g_hc) {
    StudyRow row;
    row.signal = signal;
    row.snr = snr;
    row.reps = reps;
    row.g_star = true_grouping(signal);
    row.failures = reps - static_cast<Index>(g_hat.size());
    std::tie(row.mean_g_hat, row.sd_g_hat) = mean_sd(g_hat);
    std::tie(row.mean_g_hc, row.sd_g_hc) = mean_sd(g_hc);
    Index over = 0;
    for (const Index g : g_hat) {
        over += g > row.g_star ? 1 : 0;
    }
    row.fwer_hat = g_hat.empty() ? 0.0 : static_cast<double>(over) / static_cast<double>(g_hat.size());
    row.g_hat = g_hat;
    row.g_hc = g_hc;
    return row;
}

std::vector<StudyRow> run_study(std::span<const Scenario> scenarios, std::uint64_t master_seed, unsigned threads) {
    std::vector<StudyRow> rows;
    rows.reserve(scenarios.size());
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const Scenario& scenario = scenarios[s];
        validate(scenario);
        const Index window = scenario.window.value_or(default_window(scenario.length));
        const auto reps = static_cast<std::size_t>(scenario.reps);
        std::vector<Index> g_hat(reps, 0);
        std::vector<Index> g_hc(reps, 0);
        std::vector<bool> ok(reps, false);

        parallel_for(reps, threads, [&](std::size_t r) {
            Rng noise_rng = make_stream(master_seed, {s, r, 0});
            BootstrapConfig cfg = scenario.bootstrap;
            cfg.seed = derive_seed(master_seed, {s, r, 1});
            try {
                const TimeSeries<double> series(generate_series(scenario, noise_rng));
                const auto dec = decompose(series, window);
                g_hat[r] = run_inference(dec, cfg, scenario.correction, scenario.alpha).g_hat;
                g_hc[r] = hc_grouping(dec, scenario.linkage).g_hc;
                ok[r] = true;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NumericalFailure) {
                    throw;
                }
            }
        });

        std::vector<Index> kept_hat;
        std::vector<Index> kept_hc;
        for (std::size_t r = 0; r < reps; ++r) {
            if (ok[r]) {
                kept_hat.push_back(g_hat[r]);
                kept_hc.push_back(g_hc[r]);
            }
        }
        rows.push_back(summarize(scenario.signal, scenario.snr, scenario.reps, kept_hat, kept_hc));
    }
    return rows;
}

std::string study_csv(std::span<const StudyRow> rows) {
    std::string out = "signal,snr,reps,mean_g_hat,sd_g_hat,fwer_hat,mean_g_hc,sd_g_hc,g_star\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", to_string(r.signal), r.snr,
                           r.reps, r.mean_g_hat, r.sd_g_hat, r.fwer_hat, r.mean_g_hc, r.sd_g_hc, r.g_star);
    }
    return out;
}

std::string study_table(std::span<const StudyRow> rows) {
    std::string out = fmt::format("{:<7} {:>6} {:>6} {:>3}  {:>18}  {:>8}  {:>18}  {:>8}\n", "signal", "SNR", "reps",
                                  "g*", "g_hat mean (sd)", "FWER", "HC mean (sd)", "failed");
    for (const auto& r : rows) {
        out += fmt::format("{:<7} {:>6g} {:>6} {:>3}  {:>7.3f} ({:>7.4f})  {:>8.3f}  {:>7.3f} ({:>7.4f})  {:>8}\n",
                           to_string(r.signal), r.snr, r.reps, r.g_star, r.mean_g_hat, r.sd_g_hat, r.fwer_hat,
                           r.mean_g_hc, r.sd_g_hc, r.failures);
    }
    return out;
}

} // namespace ssa_autogroup
