#include "ssa_autogroup/inference.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssa_autogroup/parallel.hpp"

namespace ssa_autogroup {

std::string_view to_string(Correction c) noexcept {
    switch (c) {
    case Correction::Sidak: return "sidak";
    case Correction::Holm: return "holm";
    }
    return "unknown";
}

Correction parse_correction(std::string_view name) {
    if (name == "holm") {
        return Correction::Holm;
    }
    if (name == "sidak") {
        return Correction::Sidak;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown correction '" + std::string(name) + "' (expected holm|sidak)");
}

double test_statistic(std::span<const double> u) { return std::accumulate(u.begin(), u.end(), 0.0); }

double bootstrap_pvalue(double observed, std::span<const double> bootstrap_statistics) {
    const double threshold = std::abs(observed);
    const auto extreme = std::count_if(bootstrap_statistics.begin(), bootstrap_statistics.end(),
                                       [threshold](double t) { return std::abs(t) >= threshold; });
    return static_cast<double>(extreme + 1) / static_cast<double>(bootstrap_statistics.size() + 1);
}

BootstrapPValue bootstrap_pvalue(std::span<const double> u, const BootstrapConfig& cfg, Rng& rng) {
    const auto n = static_cast<Index>(u.size());
    validate(cfg, n);
    const double observed = test_statistic(u);
    const double mean = observed / static_cast<double>(n);
    std::vector<double> centered(u.begin(), u.end());
    for (double& x : centered) {
        x -= mean;
    }
    WbddResampler resampler(centered, cfg);
    std::vector<double> sums(static_cast<std::size_t>(cfg.replications));
    for (double& s : sums) {
        s = resampler.draw_sum(rng);
    }
    return {observed, bootstrap_pvalue(observed, sums)};
}

double sidak_adjust(double p, Index m) {
    if (m <= 0) {
        return p;
    }
    // 1 - (1 - p)^m without cancellation for small p.
    return std::clamp(-std::expm1(static_cast<double>(m) * std::log1p(-p)), 0.0, 1.0);
}

std::vector<double> sidak_adjust(std::span<const double> p) {
    std::vector<double> out(p.size());
    const auto m = static_cast<Index>(p.size());
    std::transform(p.begin(), p.end(), out.begin(), [m](double x) { return sidak_adjust(x, m); });
    return out;
}

namespace {

std::vector<std::size_t> ascending_order(std::span<const double> p) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    return order;
}

} // namespace

std::vector<bool> holm_reject(std::span<const double> p, double alpha) {
    const std::size_t m = p.size();
    const auto order = ascending_order(p);
    std::vector<bool> rejected(m, false);
    for (std::size_t j = 0; j < m; ++j) {
        if (p[order[j]] > alpha / static_cast<double>(m - j)) {
            break;
        }
        rejected[order[j]] = true;
    }
    return rejected;
}

std::vector<double> holm_adjust(std::span<const double> p) {
    const std::size_t m = p.size();
    const auto order = ascending_order(p);
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        running = std::max(running, std::min(1.0, static_cast<double>(m - j) * p[order[j]]));
        adjusted[order[j]] = running;
    }
    return adjusted;
}

Index select_g(const std::vector<bool>& rejected) {
    for (std::size_t i = rejected.size(); i > 0; --i) {
        if (rejected[i - 1]) {
            return static_cast<Index>(i) + 1;
        }
    }
    return 1;
}

GroupingResult run_inference(const SsaDecomposition<double>& dec, const BootstrapConfig& cfg, Correction correction,
                             double alpha, unsigned threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 1)");
    }
    const Index n = dec.series_length();
    const Index d = dec.rank();
    if (d < 1) {
        throw Error(ErrorKind::DegenerateComponent, "decomposition has no positive eigenvalues (d = 0)");
    }
    validate(cfg, n);

    GroupingResult result;
    result.correction = correction;
    result.alpha = alpha;
    result.series_length = n;
    result.window = dec.window();
    result.rank = d;
    result.block_size = resolve_block_size(cfg, n);
    result.replications = cfg.replications;
    result.taper = cfg.window.name();
    result.aux = std::string(to_string(cfg.aux.kind));
    result.seed = cfg.seed;

    const auto w = weights<double>(n, dec.window());
    const double tol = degeneracy_threshold(dec.series().cwiseAbs().maxCoeff(), w);

    const auto m = static_cast<std::size_t>(d - 1);
    result.tests.resize(m);
    parallel_for(m, threads, [&](std::size_t idx) {
        const Index g = static_cast<Index>(idx) + 1;
        HypothesisTestResult& test = result.tests[idx];
        test.g = g;
        const auto s = split(dec, g);
        test.statistic = s.products.sum();
        if (wnorm(s.signal, w) <= tol || wnorm(s.noise, w) <= tol) {
            test.degenerate = true;
            test.p_raw = 1.0;
            return;
        }
        Rng rng = make_stream(cfg.seed, {static_cast<std::uint64_t>(g)});
        test.p_raw = bootstrap_pvalue(std::span<const double>(s.products.data(), static_cast<std::size_t>(n)), cfg, rng).p;
    });

    for (const auto& test : result.tests) {
        if (test.degenerate) {
            result.warnings.push_back({"run_inference", fmt::format("g = {}: null signal or noise component, p set to 1", test.g)});
        }
    }

    if (m > 0) {
        const double floor_p = 1.0 / static_cast<double>(cfg.replications + 1);
        const double best = correction == Correction::Sidak ? sidak_adjust(floor_p, static_cast<Index>(m))
                                                            : floor_p * static_cast<double>(m);
        if (best > alpha) {
            result.warnings.push_back({"run_inference", fmt::format("B = {} cannot reach level {} across {} tests; "
                                                                    "no hypothesis can be rejected",
                                                                    cfg.replications, alpha, m)});
        }
    }

    std::vector<double> raw(m);
    std::transform(result.tests.begin(), result.tests.end(), raw.begin(), [](const auto& t) { return t.p_raw; });
    std::vector<double> adjusted;
    std::vector<bool> rejected(m);
    if (correction == Correction::Sidak) {
        adjusted = sidak_adjust(raw);
        std::transform(adjusted.begin(), adjusted.end(), rejected.begin(), [alpha](double p) { return p <= alpha; });
    } else {
        adjusted = holm_adjust(raw);
        rejected = holm_reject(raw, alpha);
    }
    for (std::size_t i = 0; i < m; ++i) {
        result.tests[i].p_adjusted = adjusted[i];
        result.tests[i].rejected = rejected[i];
    }
    result.g_hat = select_g(rejected);
    return result;
}

GroupingResult run_inference(const TimeSeries<double>& series, Index window, const BootstrapConfig& cfg,
                             Correction correction, double alpha, unsigned threads) {
    return run_inference(decompose(series, window), cfg, correction, alpha, threads);
}

std::string format_table(const GroupingResult& result) {
    std::string out;
    out += fmt::format("{:>4}  {:>24}  {:>10}  {:>10}  {:>8}\n", "g", "T_obs", "p_raw", "p_adj", "rejected");
    for (const auto& t : result.tests) {
        out += fmt::format("{:>4}  {:>24.12g}  {:>10.6f}  {:>10.6f}  {:>8}{}\n", t.g, t.statistic, t.p_raw,
                           t.p_adjusted, t.rejected ? "yes" : "no", t.degenerate ? "  (null component)" : "");
    }
    out += fmt::format("\nselected grouping index g_hat = {} (d = {}, {} correction, alpha = {})\n", result.g_hat,
                       result.rank, to_string(result.correction), result.alpha);
    return out;
}

std::string format_key_value(const GroupingResult& result) {
    std::string out;
    out += fmt::format("g_hat={}\n", result.g_hat);
    out += fmt::format("correction={}\n", to_string(result.correction));
    out += fmt::format("alpha={:.17g}\n", result.alpha);
    out += fmt::format("seed={}\n", result.seed);
    out += fmt::format("N={}\n", result.series_length);
    out += fmt::format("L={}\n", result.window);
    out += fmt::format("d={}\n", result.rank);
    out += fmt::format("ell={}\n", result.block_size);
    out += fmt::format("B={}\n", result.replications);
    out += fmt::format("window={}\n", result.taper);
    out += fmt::format("aux={}\n", result.aux);
    for (const auto& t : result.tests) {
        out += fmt::format("test.{}.T_obs={:.17g}\n", t.g, t.statistic);
        out += fmt::format("test.{}.p_raw={:.17g}\n", t.g, t.p_raw);
        out += fmt::format("test.{}.p_adjusted={:.17g}\n", t.g, t.p_adjusted);
        out += fmt::format("test.{}.rejected={}\n", t.g, t.rejected ? 1 : 0);
    }
    for (std::size_t i = 0; i < result.warnings.size(); ++i) {
        out += fmt::format("warning.{}={}: {}\n", i + 1, result.warnings[i].where, result.warnings[i].message);
    }
    return out;
}

} // namespace ssa_autogroup
