#include "ssa_autogroup/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssa_autogroup/csv.hpp"
#include "ssa_autogroup/hc_baseline.hpp"
#include "ssa_autogroup/inference.hpp"
#include "ssa_autogroup/parallel.hpp"
#include "ssa_autogroup/separability.hpp"
#include "ssa_autogroup/simulation.hpp"

namespace ssa_autogroup::cli {

namespace {

struct InputOptions {
    std::string input;
    std::string value_col;
    std::string label_col;
    char delimiter = ',';
    bool no_header = false;
    Index window = 0;
};

struct BootstrapOptions {
    std::string config;
    std::string ell = "auto";
    std::string taper = "triangle";
    std::string aux = "gaussian";
    Index replications = 1000;
    std::uint64_t seed = 0;
    double alpha = 0.1;
    std::string correction = "holm";
    std::string linkage = "complete";
    Index clusters = 0;
};

void add_input_options(CLI::App& cmd, InputOptions& o) {
    cmd.add_option("--input", o.input, "CSV file holding the series")->required();
    cmd.add_option("--value-col", o.value_col, "value column: header name or 0-based index")->required();
    cmd.add_option("--label-col", o.label_col, "optional label column (e.g. dates)");
    cmd.add_option("--delimiter", o.delimiter, "field delimiter");
    cmd.add_flag("--no-header", o.no_header, "file has no header row");
    cmd.add_option("--window,-L", o.window, "window length L (default floor(N/2))");
}

void add_bootstrap_options(CLI::App& cmd, BootstrapOptions& o) {
    cmd.add_option("--config", o.config, "file with key = value lines (ell, window, aux, B, seed)");
    cmd.add_option("--ell", o.ell, "WBDD block size, integer or 'auto'");
    cmd.add_option("--taper", o.taper, "taper window: triangle|trapezoid043");
    cmd.add_option("--aux", o.aux, "auxiliary sequence: gaussian|a3|a4|a5|a7");
    cmd.add_option("--B", o.replications, "bootstrap replications");
    cmd.add_option("--seed", o.seed, "random seed");
    cmd.add_option("--alpha", o.alpha, "family-wise error level");
    cmd.add_option("--correction", o.correction, "holm|sidak");
    cmd.add_option("--linkage", o.linkage, "clustering baseline linkage: single|complete|average");
    cmd.add_option("--clusters", o.clusters, "clustering baseline cluster count (default floor(d/2))");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileNotFound, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Config file first, then any flag given explicitly on the command line.
BootstrapConfig resolve_bootstrap(const CLI::App& cmd, const BootstrapOptions& o) {
    const AuxRegistry registry;
    BootstrapConfig cfg = o.config.empty() ? BootstrapConfig{} : parse_bootstrap_config(read_file(o.config), registry);
    if (o.config.empty() || cmd.count("--ell") > 0) {
        if (o.ell == "auto") {
            cfg.ell.reset();
        } else {
            try {
                std::size_t used = 0;
                cfg.ell = static_cast<Index>(std::stoll(o.ell, &used));
                if (used != o.ell.size()) {
                    throw std::invalid_argument(o.ell);
                }
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidConfig, "--ell expects an integer or 'auto', got '" + o.ell + "'");
            }
        }
    }
    if (o.config.empty() || cmd.count("--taper") > 0) {
        cfg.window = parse_taper(o.taper);
    }
    if (o.config.empty() || cmd.count("--aux") > 0) {
        cfg.aux = registry.resolve(parse_aux_kind(o.aux));
    }
    if (o.config.empty() || cmd.count("--B") > 0) {
        cfg.replications = o.replications;
    }
    if (o.config.empty() || cmd.count("--seed") > 0) {
        cfg.seed = o.seed;
    }
    return cfg;
}

TimeSeries<double> load_input(const InputOptions& o) {
    CsvSpec spec;
    spec.path = o.input;
    spec.value_column = o.value_col;
    if (!o.label_col.empty()) {
        spec.label_column = o.label_col;
    }
    spec.delimiter = o.delimiter;
    spec.header = !o.no_header;
    return load_csv(spec);
}

std::optional<Index> optional_count(Index v) { return v > 0 ? std::optional<Index>(v) : std::nullopt; }

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::DegenerateComponent: return kExitNumerical;
    default: return kExitUsage;
    }
}

std::string hc_summary(const HcGrouping& hc) {
    std::string members;
    for (const Index i : hc.first) {
        members += (members.empty() ? "" : " ") + std::to_string(i);
    }
    return members;
}

int analyze(const CLI::App& cmd, const InputOptions& in, const BootstrapOptions& bo, const std::string& out_dir,
            std::ostream& out) {
    const TimeSeries<double> series = load_input(in);
    const Index window = in.window > 0 ? in.window : default_window(series.size());
    const BootstrapConfig cfg = resolve_bootstrap(cmd, bo);
    const Correction correction = parse_correction(bo.correction);
    const Linkage linkage = parse_linkage(bo.linkage);

    const auto dec = decompose(series, window);
    const GroupingResult result = run_inference(dec, cfg, correction, bo.alpha, default_thread_count());
    const HcGrouping hc = hc_grouping(dec, linkage, optional_count(bo.clusters));
    const auto wc = wcorr_matrix(dec);
    const auto parts = split(dec, result.g_hat);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    std::string kv = format_key_value(result);
    kv += fmt::format("input={}\nvalue_col={}\n", in.input, in.value_col);
    kv += fmt::format("hc.linkage={}\nhc.clusters={}\nhc.g_hc={}\nhc.first={}\n", to_string(linkage),
                      bo.clusters > 0 ? bo.clusters : default_cluster_count(dec.rank()), hc.g_hc, hc_summary(hc));
    for (std::size_t i = 0; i < hc.warnings.size(); ++i) {
        kv += fmt::format("hc.warning.{}={}\n", i + 1, hc.warnings[i].message);
    }

    std::string report = fmt::format("input: {} (column {}), N = {}, L = {}, d = {}\n", in.input, in.value_col,
                                     series.size(), window, dec.rank());
    report += fmt::format("bootstrap: B = {}, ell = {}, window = {}, aux = {}, seed = {}\n\n", result.replications,
                          result.block_size, result.taper, result.aux, result.seed);
    report += format_table(result);
    report += fmt::format("clustering baseline ({} linkage): g_hc = {}, first group {{{}}}\n", to_string(linkage),
                          hc.g_hc, hc_summary(hc));

    write_text_file(dir / "report.txt", report);
    write_text_file(dir / "report.kv", kv);
    write_text_file(dir / "signal.csv", reconstruction_csv(series.values(), parts.signal, parts.noise, series.labels()));
    write_text_file(dir / "wcorr.csv", matrix_csv(wc.values));

    out << report;
    out << fmt::format("g_hat={}\ng_hc={}\n", result.g_hat, hc.g_hc);
    return kExitOk;
}

int simulate(const CLI::App& cmd, const std::vector<std::string>& signals, const std::vector<double>& snrs, Index reps,
             Index length, Index window, const BootstrapOptions& bo, const std::string& out_path, std::ostream& out) {
    if (reps < 1) {
        throw Error(ErrorKind::InvalidConfig, "--reps must be at least 1");
    }
    const BootstrapConfig cfg = resolve_bootstrap(cmd, bo);
    std::vector<Scenario> scenarios;
    for (const auto& name : signals) {
        for (const double snr : snrs) {
            Scenario s;
            s.signal = parse_signal(name);
            s.snr = snr;
            s.length = length;
            if (window > 0) {
                s.window = window;
            }
            s.reps = reps;
            s.alpha = bo.alpha;
            s.bootstrap = cfg;
            s.correction = parse_correction(bo.correction);
            s.linkage = parse_linkage(bo.linkage);
            scenarios.push_back(s);
        }
    }
    const auto rows = run_study(scenarios, cfg.seed, default_thread_count());
    const std::string csv = study_csv(rows);
    if (out_path.empty()) {
        out << csv;
    } else {
        write_text_file(out_path, csv);
        out << fmt::format("N = {}, B = {}, alpha = {}, {} correction, aux = {}, window = {}, seed = {}\n", length,
                           cfg.replications, bo.alpha, bo.correction, to_string(cfg.aux.kind), cfg.window.name(),
                           cfg.seed);
        out << study_table(rows);
    }
    return kExitOk;
}

int wcorr(const InputOptions& in, const std::string& out_path, std::ostream& out) {
    const TimeSeries<double> series = load_input(in);
    const Index window = in.window > 0 ? in.window : default_window(series.size());
    const auto wc = wcorr_matrix(decompose(series, window));
    const std::string csv = matrix_csv(wc.values);
    if (out_path.empty()) {
        out << csv;
    } else {
        write_text_file(out_path, csv);
        out << fmt::format("wrote {}x{} w-correlation matrix to {}\n", wc.values.rows(), wc.values.cols(), out_path);
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SSA denoising with grouping selected by bootstrap multiple testing", "ssa_autogroup"};
    app.require_subcommand(1);

    InputOptions analyze_in;
    BootstrapOptions analyze_bo;
    std::string out_dir = ".";
    auto* analyze_cmd = app.add_subcommand("analyze", "decompose a CSV series, select g_hat, write reports");
    add_input_options(*analyze_cmd, analyze_in);
    add_bootstrap_options(*analyze_cmd, analyze_bo);
    analyze_cmd->add_option("--out-dir", out_dir, "directory for report.txt, report.kv, signal.csv, wcorr.csv");

    std::vector<std::string> signals{"f1", "f2", "f3"};
    std::vector<double> snrs{2.0, 5.0};
    Index reps = 100;
    Index length = 50;
    Index sim_window = 0;
    BootstrapOptions sim_bo;
    std::string sim_out;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo study of both grouping methods");
    simulate_cmd->add_option("--signals", signals, "comma separated subset of f1,f2,f3")->delimiter(',');
    simulate_cmd->add_option("--snr", snrs, "comma separated signal-to-noise ratios")->delimiter(',');
    simulate_cmd->add_option("--reps", reps, "Monte-Carlo repetitions per scenario");
    simulate_cmd->add_option("--N", length, "series length");
    simulate_cmd->add_option("--window,-L", sim_window, "window length (default N/2)");
    simulate_cmd->add_option("--out", sim_out, "CSV output path (stdout when omitted)");
    add_bootstrap_options(*simulate_cmd, sim_bo);

    InputOptions wcorr_in;
    std::string wcorr_out;
    auto* wcorr_cmd = app.add_subcommand("wcorr", "export the |w-correlation| matrix of elementary components");
    add_input_options(*wcorr_cmd, wcorr_in);
    wcorr_cmd->add_option("--out", wcorr_out, "CSV output path (stdout when omitted)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        CLI::App* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << failed->help();
        return kExitUsage;
    }

    try {
        if (analyze_cmd->parsed()) {
            return analyze(*analyze_cmd, analyze_in, analyze_bo, out_dir, out);
        }
        if (simulate_cmd->parsed()) {
            return simulate(*simulate_cmd, signals, snrs, reps, length, sim_window, sim_bo, sim_out, out);
        }
        return wcorr(wcorr_in, wcorr_out, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace ssa_autogroup::cli
