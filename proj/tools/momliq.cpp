#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "momliq/momliq.hpp"

namespace fs = std::filesystem;
using namespace momliq;

namespace {

struct ConfigArgs {
    std::string path;
    std::string out;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.path, "Run configuration (key = value lines)")->required();
    cmd->add_option("--out", args.out, "Output directory (overrides output_dir)");
    cmd->add_option("--set", args.overrides, "Override one config key, e.g. --set rebalance_days=7");
}

RunConfig resolve_config(const ConfigArgs& args) {
    RunConfig config = load_config(args.path);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1), fs::current_path());
    }
    if (!args.out.empty()) config.output_dir = args.out;
    config.validate();
    return config;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

std::string csv_of(const auto& writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

Date resolve_start(const RunConfig& config, const Panel& panel) {
    if (config.start) return *config.start;
    if (auto d = default_start(panel, config.criteria, config.signals)) return *d;
    throw WindowTooShortError("no date in the panel admits a non-empty universe with signals");
}

int cmd_run(const ConfigArgs& args, const std::optional<std::string>& costs) {
    RunConfig config = resolve_config(args);
    if (costs) {
        config.cost_bps_list = parse_cost_list(*costs);
        config.validate();
    }
    const Panel panel = load_study_panel(config);
    const ReportBundle bundle = run_full_study(config, panel);
    write_report(bundle, config.output_dir);
    std::cout << "study " << format_date(bundle.start) << " .. " << format_date(bundle.end) << ", "
              << bundle.series.size() << " series -> " << config.output_dir << '\n';
    return 0;
}

int cmd_universe(const ConfigArgs& args) {
    const RunConfig config = resolve_config(args);
    const Panel panel = load_study_panel(config);
    const Date start = resolve_start(config, panel);
    const Date end = config.end.value_or(panel.last_date());
    const auto dates = rebalance_schedule(start, end, config.rebalance_days);
    const auto counts = universe_counts(panel, dates, config.criteria);
    const fs::path out = fs::path(config.output_dir) / "universe_counts.csv";
    write_file(out, csv_of([&](std::ostream& o) { write_universe_counts_csv(counts, o); }));
    std::cout << counts.size() << " rebalance dates -> " << out.string() << '\n';
    return 0;
}

int cmd_backtest(const ConfigArgs& args, const std::string& strategy, const std::string& weighting,
                 std::optional<double> cost_bps) {
    const RunConfig config = resolve_config(args);
    PortfolioSpec spec;
    spec.selection = parse_selection(strategy);
    if (weighting.empty()) {
        spec.weighting = spec.selection.kind == SelectionKind::Market ? Weighting::Cap : Weighting::Equal;
    } else if (weighting == "equal") {
        spec.weighting = Weighting::Equal;
    } else if (weighting == "cap") {
        spec.weighting = Weighting::Cap;
    } else {
        throw ConfigError("--weighting must be equal or cap");
    }
    spec.rebalance_days = config.rebalance_days;
    spec.cost_bps = cost_bps.value_or(config.cost_bps_list.front());
    spec.charge_inception_costs = config.charge_inception_costs;

    const Panel panel = load_study_panel(config);
    const Date start = resolve_start(config, panel);
    const Date end = config.end.value_or(panel.last_date());
    const BacktestResult result = run_backtest(panel, spec, config.criteria, config.signals, start, end);

    const fs::path dir = config.output_dir;
    write_file(dir / ("backtest_" + strategy + ".csv"), csv_of([&](std::ostream& o) { write_backtest_csv(result, o); }));
    write_file(dir / ("turnover_" + strategy + ".csv"), csv_of([&](std::ostream& o) { write_turnover_csv(result, o); }));
    for (const auto& s : result.skipped_rebalances) {
        std::cerr << "skipped rebalance " << format_date(s.date) << ": " << s.reason << '\n';
    }
    std::cout << strategy << ": " << result.size() << " days, final equity "
              << result.equity_curve.back() << " -> " << dir.string() << '\n';
    return 0;
}

int cmd_synth(SynthParams params, const std::string& start, const std::string& out) {
    if (!start.empty()) params.start_date = parse_date(start);
    const Panel panel = gen_panel(params);
    if (out.empty() || out == "-") {
        write_panel_csv(panel, std::cout);
    } else {
        write_file(out, csv_of([&](std::ostream& o) { write_panel_csv(panel, o); }));
        std::cerr << panel.record_count() << " records, " << panel.assets().size() << " assets -> " << out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Momentum x liquidity bivariate-sort backtester"};
    app.require_subcommand(1);

    ConfigArgs run_args;
    std::optional<std::string> costs;
    auto* run = app.add_subcommand("run", "Full study: grid, cost table, universe counts, equity curves");
    add_config_options(run, run_args);
    run->add_option("--costs", costs, "Comma-separated cost levels in basis points");

    ConfigArgs universe_args;
    auto* universe = app.add_subcommand("universe", "Eligible-universe size at each rebalance date");
    add_config_options(universe, universe_args);

    ConfigArgs backtest_args;
    std::string strategy;
    std::string weighting;
    std::optional<double> cost_bps;
    auto* backtest = app.add_subcommand("backtest", "Backtest one portfolio");
    add_config_options(backtest, backtest_args);
    backtest->add_option("--strategy", strategy, "e.g. losers_illiquid, umd_liquid, iml_losers, market")->required();
    backtest->add_option("--weighting", weighting, "equal or cap");
    backtest->add_option("--cost-bps", cost_bps, "Trading cost in basis points");

    SynthParams synth_params;
    std::string synth_start;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic panel CSV");
    synth->add_option("--seed", synth_params.seed, "Generator seed");
    synth->add_option("--assets", synth_params.n_assets, "Number of assets");
    synth->add_option("--days", synth_params.n_days, "Number of calendar days");
    synth->add_option("--daily-vol", synth_params.daily_vol, "Daily return volatility");
    synth->add_option("--momentum-strength", synth_params.momentum_strength, "Persistent drift scale");
    synth->add_option("--liquidity-spread", synth_params.liquidity_spread, "Cross-sectional volume dispersion");
    synth->add_option("--listing-stagger", synth_params.listing_stagger_days, "Days between asset listings");
    synth->add_option("--marketcap-base", synth_params.marketcap_base, "Typical market cap in USD");
    synth->add_option("--missing-prob", synth_params.missing_prob, "Probability of a missing record");
    synth->add_option("--zero-volume-prob", synth_params.zero_volume_prob, "Probability of a zero-volume record");
    synth->add_option("--start", synth_start, "First date, YYYY-MM-DD");
    synth->add_option("--out", synth_out, "Output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_args, costs);
        if (*universe) return cmd_universe(universe_args);
        if (*backtest) return cmd_backtest(backtest_args, strategy, weighting, cost_bps);
        if (*synth) return cmd_synth(synth_params, synth_start, synth_out);
    } catch (const Error& e) {
        std::cerr << "momliq: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "momliq: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
