#include "ssa_autogroup/wbdd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ssa_autogroup {

namespace {

constexpr double kTrapezoidCut = 0.43;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorKind::InvalidConfig, "key '" + std::string(key) + "' expects an integer, got '" +
                                                  std::string(value) + "'");
    }
    return out;
}

} // namespace

TaperWindow TaperWindow::triangle() {
    return TaperWindow(TaperKind::Triangle, "triangle", [](double t) {
        if (t > 0.0 && t <= 0.5) {
            return t;
        }
        if (t > 0.5 && t < 1.0) {
            return 1.0 - t;
        }
        return 0.0;
    });
}

TaperWindow TaperWindow::trapezoid043() {
    return TaperWindow(TaperKind::Trapezoid043, "trapezoid043", [](double t) {
        if (t < 0.0 || t > 1.0) {
            return 0.0;
        }
        if (t <= kTrapezoidCut) {
            return t / kTrapezoidCut;
        }
        if (t <= 1.0 - kTrapezoidCut) {
            return 1.0;
        }
        return (1.0 - t) / kTrapezoidCut;
    });
}

TaperWindow TaperWindow::custom(std::string name, Function fn) {
    return TaperWindow(TaperKind::Custom, std::move(name), std::move(fn));
}

TaperWindow parse_taper(std::string_view name) {
    if (name == "triangle") {
        return TaperWindow::triangle();
    }
    if (name == "trapezoid043") {
        return TaperWindow::trapezoid043();
    }
    throw Error(ErrorKind::InvalidConfig, "unknown taper window '" + std::string(name) +
                                              "' (expected triangle|trapezoid043)");
}

std::vector<std::string> taper_violations(const TaperWindow& window, int grid_points) {
    std::vector<std::string> out;
    const auto report = [&](const std::string& what, double t) {
        std::ostringstream os;
        os << what << " at t = " << t;
        out.push_back(os.str());
    };
    for (const double t : {-1.0, -0.25, -1e-9, 1.0 + 1e-9, 1.25, 2.0}) {
        if (window(t) != 0.0) {
            report("nonzero outside [0, 1]", t);
        }
    }
    if (!(window(0.5) > 0.0)) {
        report("not positive", 0.5);
    }
    double previous = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(grid_points - 1);
        const double v = window(t);
        if (v < 0.0 || v > 1.0) {
            report("value outside [0, 1]", t);
        }
        if (std::abs(v - window(1.0 - t)) > 1e-12) {
            report("not symmetric around 1/2", t);
        }
        if (t <= 0.5) {
            if (v < previous - 1e-15) {
                report("decreasing on [0, 1/2]", t);
            }
            previous = v;
        }
    }
    return out;
}

WindowWeights window_weights(const TaperWindow& window, Index ell) {
    if (ell < 1) {
        throw Error(ErrorKind::InvalidConfig, "block size must be at least 1");
    }
    WindowWeights w;
    w.values.resize(ell);
    for (Index t = 1; t <= ell; ++t) {
        w.values(t - 1) = window((static_cast<double>(t) - 0.5) / static_cast<double>(ell));
    }
    w.l1 = w.values.cwiseAbs().sum();
    w.l2 = w.values.norm();
    if (!(w.l1 > 0.0)) {
        throw Error(ErrorKind::DegenerateWindow, "window '" + window.name() + "' vanishes for block size " +
                                                     std::to_string(ell));
    }
    return w;
}

std::string_view to_string(AuxKind kind) noexcept {
    switch (kind) {
    case AuxKind::Gaussian: return "gaussian";
    case AuxKind::PresetA3: return "a3";
    case AuxKind::PresetA4: return "a4";
    case AuxKind::PresetA5: return "a5";
    case AuxKind::PresetA7: return "a7";
    }
    return "unknown";
}

AuxKind parse_aux_kind(std::string_view name) {
    for (const AuxKind kind : {AuxKind::Gaussian, AuxKind::PresetA3, AuxKind::PresetA4, AuxKind::PresetA5,
                               AuxKind::PresetA7}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw Error(ErrorKind::InvalidConfig, "unknown auxiliary sequence '" + std::string(name) +
                                              "' (expected gaussian|a3|a4|a5|a7)");
}

AuxSequenceSpec gaussian_aux() {
    return {AuxKind::Gaussian, [](Rng& rng, Index ell, std::span<double> out) {
                std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(ell)));
                for (double& a : out) {
                    a = normal(rng);
                }
            }};
}

AuxRegistry::AuxRegistry() { samplers_.emplace(AuxKind::Gaussian, gaussian_aux().draw); }

void AuxRegistry::add(AuxKind kind, AuxSampler sampler) { samplers_.insert_or_assign(kind, std::move(sampler)); }

AuxSequenceSpec AuxRegistry::resolve(AuxKind kind) const {
    const auto it = samplers_.find(kind);
    if (it == samplers_.end()) {
        throw Error(ErrorKind::UnregisteredAuxSequence,
                    "auxiliary sequence '" + std::string(to_string(kind)) + "' has no registered sampler");
    }
    return {kind, it->second};
}

Index auto_block_size(Index n) {
    const auto rounded = static_cast<Index>(std::lround(std::pow(static_cast<double>(n), 0.2)));
    return std::max<Index>(2, rounded);
}

Index resolve_block_size(const BootstrapConfig& cfg, Index n) { return cfg.ell.value_or(auto_block_size(n)); }

void validate(const BootstrapConfig& cfg, Index n) {
    const Index ell = resolve_block_size(cfg, n);
    if (ell < 1) {
        throw Error(ErrorKind::InvalidConfig, "block size must be at least 1");
    }
    if (ell >= n) {
        throw Error(ErrorKind::BlockTooLarge,
                    "block size " + std::to_string(ell) + " must be below N = " + std::to_string(n));
    }
    if (cfg.replications < kMinReplications) {
        throw Error(ErrorKind::InvalidConfig, "at least " + std::to_string(kMinReplications) +
                                                  " bootstrap replications required");
    }
    if (!cfg.aux.draw) {
        throw Error(ErrorKind::UnregisteredAuxSequence, "auxiliary sequence has no sampler");
    }
}

BootstrapConfig parse_bootstrap_config(std::string_view text, const AuxRegistry& registry) {
    BootstrapConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "ell") {
            if (value == "auto") {
                cfg.ell.reset();
            } else {
                cfg.ell = parse_integer<Index>(key, value);
            }
        } else if (key == "window") {
            cfg.window = parse_taper(value);
        } else if (key == "aux") {
            cfg.aux = registry.resolve(parse_aux_kind(value));
        } else if (key == "B") {
            cfg.replications = parse_integer<Index>(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_integer<std::uint64_t>(key, value);
        } else {
            throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" +
                                                      std::string(key) + "'");
        }
    }
    return cfg;
}

double tapered_block_mean(std::span<const double> r, const TaperWindow& window, Index ell) {
    const auto n = static_cast<Index>(r.size());
    if (ell > n) {
        throw Error(ErrorKind::BlockTooLarge,
                    "block size " + std::to_string(ell) + " exceeds N = " + std::to_string(n));
    }
    const WindowWeights w = window_weights(window, ell);
    const Index q = n - ell + 1;
    double total = 0.0;
    for (Index j = 0; j < q; ++j) {
        for (Index i = 0; i < ell; ++i) {
            total += w.values(i) / w.l1 * r[static_cast<std::size_t>(i + j)];
        }
    }
    return total / static_cast<double>(q);
}

Eigen::VectorXd eta_vector(std::span<const double> aux, const TaperWindow& window, Index ell, Index n) {
    if (ell > n) {
        throw Error(ErrorKind::BlockTooLarge,
                    "block size " + std::to_string(ell) + " exceeds N = " + std::to_string(n));
    }
    const Index q = n - ell + 1;
    if (static_cast<Index>(aux.size()) != q) {
        throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(q) + " auxiliary draws, got " +
                                                   std::to_string(aux.size()));
    }
    const WindowWeights w = window_weights(window, ell);
    const double scale = std::sqrt(static_cast<double>(ell)) / w.l2;
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    // v_l(t - j + 1) is nonzero only for j in [t - l + 1, t].
    for (Index t = 1; t <= n; ++t) {
        for (Index j = std::max<Index>(1, t - ell + 1); j <= std::min(t, q); ++j) {
            eta(t - 1) += w.values(t - j) * scale * aux[static_cast<std::size_t>(j - 1)];
        }
    }
    return eta;
}

WbddResampler::WbddResampler(std::span<const double> r, const BootstrapConfig& cfg)
    : ell_(resolve_block_size(cfg, static_cast<Index>(r.size()))), sampler_(cfg.aux.draw) {
    const auto n = static_cast<Index>(r.size());
    if (n < 1) {
        throw Error(ErrorKind::EmptySeries, "cannot resample an empty series");
    }
    if (ell_ < 1) {
        throw Error(ErrorKind::InvalidConfig, "block size must be at least 1");
    }
    if (!sampler_) {
        throw Error(ErrorKind::UnregisteredAuxSequence, "auxiliary sequence has no sampler");
    }
    const Eigen::Map<const Eigen::VectorXd> values(r.data(), n);
    tapered_mean_ = tapered_block_mean(r, cfg.window, ell_);
    plain_mean_ = values.mean();
    centered_ = values.array() - tapered_mean_;
    const WindowWeights w = window_weights(cfg.window, ell_);
    kernel_ = w.values * (std::sqrt(static_cast<double>(ell_)) / w.l2);
    aux_.resize(static_cast<std::size_t>(n - ell_ + 1));
    scratch_.resize(static_cast<std::size_t>(n));
}

void WbddResampler::draw(Rng& rng, std::span<double> out) {
    const Index n = size();
    if (static_cast<Index>(out.size()) != n) {
        throw Error(ErrorKind::LengthMismatch, "output buffer has the wrong length");
    }
    sampler_(rng, ell_, aux_);
    const Index q = n - ell_ + 1;
    for (Index t = 0; t < n; ++t) {
        double eta = 0.0;
        for (Index j = std::max<Index>(0, t - ell_ + 1); j <= std::min(t, q - 1); ++j) {
            eta += kernel_(t - j) * aux_[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(t)] = centered_(t) * eta + plain_mean_;
    }
}

double WbddResampler::draw_sum(Rng& rng) {
    draw(rng, scratch_);
    double total = 0.0;
    for (const double x : scratch_) {
        total += x;
    }
    return total;
}

Eigen::VectorXd resample(std::span<const double> r, const BootstrapConfig& cfg, Rng& rng) {
    WbddResampler resampler(r, cfg);
    Eigen::VectorXd out(resampler.size());
    resampler.draw(rng, std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
}

} // namespace ssa_autogroup
