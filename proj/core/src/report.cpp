#include "momliq/report.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "momliq/errors.hpp"
#include "text_util.hpp"

namespace momliq {

namespace {

struct Job {
    std::string strategy;
    PortfolioSpec spec;
};

// Runs fn(i) for i in [0, n) on a small worker pool. The first failure in
// index order is rethrown so errors are as deterministic as results.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::min(n_threads, n); ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

constexpr std::array<const char*, 3> kMomentumRows{"Losers", "Neutral", "Winners"};
constexpr std::array<const char*, 3> kLiquidityColumns{"Liquid", "Neutral", "Illiquid"};

std::optional<PerfStats> try_stats(const BacktestResult& series, const BacktestResult& benchmark, int ppy) {
    try {
        return perf_stats(series.gross_returns, benchmark.gross_returns, ppy);
    } catch (const TooFewSamplesError&) {
        return std::nullopt;
    }
}

}  // namespace

const StrategySeries* ReportBundle::find(std::string_view strategy, double cost_bps) const {
    for (const auto& s : series) {
        if (s.strategy == strategy && s.cost_bps == cost_bps) return &s;
    }
    return nullptr;
}

Panel load_study_panel(const RunConfig& config) {
    if (config.synthetic()) return gen_panel(config.synth);
    const ExclusionSet exclusions = config.exclusions_path.empty() ? ExclusionSet{}
                                                                   : load_exclusions(config.exclusions_path);
    return load_panel_csv(config.panel_path, exclusions);
}

ReportBundle run_full_study(const RunConfig& config, const Panel& panel) {
    config.validate();
    ReportBundle bundle;

    std::optional<Date> start = config.start;
    if (!start) start = default_start(panel, config.criteria, config.signals);
    if (!start) throw WindowTooShortError("no date in the panel admits a non-empty universe with signals");
    const Date end = config.end.value_or(panel.last_date());
    if (!(*start < end)) {
        throw WindowTooShortError("backtest window [" + format_date(*start) + ", " + format_date(end) + "] is empty");
    }
    bundle.start = *start;
    bundle.end = end;

    const auto schedule = rebalance_schedule(*start, end, config.rebalance_days);
    const auto plan = plan_formations(panel, schedule, config.criteria, config.signals);
    bundle.universe_counts.reserve(plan.size());
    for (const Formation& f : plan) {
        bundle.universe_counts.push_back({f.date, f.universe.size()});
        if (f.sort) bundle.sorts.push_back(*f.sort);
    }

    const auto spec_for = [&](Selection sel, double cost) {
        PortfolioSpec spec;
        spec.selection = sel;
        spec.weighting = sel.kind == SelectionKind::Market ? Weighting::Cap : Weighting::Equal;
        spec.rebalance_days = config.rebalance_days;
        spec.cost_bps = cost;
        spec.charge_inception_costs = config.charge_inception_costs;
        return spec;
    };

    std::vector<Job> jobs;
    for (Tercile m : kTerciles) {
        for (Tercile l : kTerciles) {
            const Selection sel = Selection::cell(m, l);
            jobs.push_back({selection_name(sel), spec_for(sel, 0.0)});
        }
    }
    for (Tercile l : kTerciles) jobs.push_back({selection_name(Selection::umd(l)), spec_for(Selection::umd(l), 0.0)});
    for (Tercile m : kTerciles) jobs.push_back({selection_name(Selection::iml(m)), spec_for(Selection::iml(m), 0.0)});
    jobs.push_back({"market", spec_for(Selection::market(), 0.0)});
    for (const Selection& sel : kCostSweepStrategies) {
        for (double cost : config.cost_bps_list) {
            if (cost != 0.0) jobs.push_back({selection_name(sel), spec_for(sel, cost)});
        }
    }

    bundle.series.resize(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        bundle.series[i] = {jobs[i].strategy, jobs[i].spec.cost_bps,
                            run_backtest(panel, jobs[i].spec, plan, *start, end)};
    });

    const int ppy = config.periods_per_year;
    const BacktestResult& bench = bundle.find("market")->result;
    for (Tercile m : kTerciles) {
        for (Tercile l : kTerciles) {
            const auto& cell = bundle.find(selection_name(Selection::cell(m, l)))->result;
            bundle.grid.cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)] = try_stats(cell, bench, ppy);
        }
    }
    for (Tercile t : kTerciles) {
        const auto i = static_cast<std::size_t>(t);
        bundle.grid.umd[i] = try_stats(bundle.find(selection_name(Selection::umd(t)))->result, bench, ppy);
        bundle.grid.iml[i] = try_stats(bundle.find(selection_name(Selection::iml(t)))->result, bench, ppy);
    }

    for (const Selection& sel : kCostSweepStrategies) {
        const std::string name = selection_name(sel);
        for (double cost : config.cost_bps_list) {
            const StrategySeries* s = bundle.find(name, cost);
            bundle.cost_table.push_back({name, cost, perf_stats(s->result.daily_returns, bench.gross_returns, ppy)});
        }
    }
    return bundle;
}

std::string format_pct(double fraction) { return fmt::format("{:.2f}", fraction * 100.0); }

std::string format_fixed2(double value) { return fmt::format("{:.2f}", value); }

std::string render_grid(const GridStats& grid) {
    for (const auto& row : grid.cells) {
        for (const auto& c : row) {
            if (!c) throw IncompleteGridError("grid has a cell without statistics");
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (!grid.umd[i] || !grid.iml[i]) throw IncompleteGridError("grid is missing a UMD or IML marginal");
    }

    const auto ir_text = [](const PerfStats& s) { return s.ir_annualized ? format_fixed2(*s.ir_annualized) : "NA"; };
    const auto mean_text = [](const PerfStats& s, bool starred) {
        return format_pct(s.mean_daily) + (starred && s.significant() ? "*" : "");
    };

    std::ostringstream out;
    out << "block,row,Liquid,Neutral,Illiquid,IML\n";
    const std::array<const char*, 3> blocks{"mean_pct", "std_pct", "ir"};
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto value = [&](const PerfStats& s, bool zero_investment) {
            if (b == 0) return mean_text(s, zero_investment);
            if (b == 1) return format_pct(s.std_daily);
            return ir_text(s);
        };
        for (std::size_t m = 0; m < 3; ++m) {
            out << blocks[b] << ',' << kMomentumRows[m];
            for (std::size_t l = 0; l < 3; ++l) out << ',' << value(*grid.cells[m][l], false);
            out << ',' << value(*grid.iml[m], true) << '\n';
        }
        out << blocks[b] << ",UMD";
        for (std::size_t l = 0; l < 3; ++l) out << ',' << value(*grid.umd[l], true);
        out << ",\n";
    }
    return out.str();
}

std::string render_cost_table(std::span<const CostRow> rows) {
    std::ostringstream out;
    out << "strategy,cost_bps,mean_daily_pct,std_daily_pct,ir_annualized\n";
    for (const auto& r : rows) {
        out << r.strategy << ',' << detail::format_exact(r.cost_bps) << ',' << format_pct(r.stats.mean_daily) << ','
            << format_pct(r.stats.std_daily) << ','
            << (r.stats.ir_annualized ? format_fixed2(*r.stats.ir_annualized) : "NA") << '\n';
    }
    return out.str();
}

std::string render_equity_curves(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "date,strategy,equity\n";
    for (const auto& s : bundle.series) {
        if (s.cost_bps != 0.0) continue;
        for (std::size_t i = 0; i < s.result.size(); ++i) {
            out << format_date(s.result.dates[i]) << ',' << s.strategy << ','
                << detail::format_exact(s.result.equity_curve[i]) << '\n';
        }
    }
    return out.str();
}

std::string render_returns(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "date,strategy,cost_bps,gross_return,net_return\n";
    for (const auto& s : bundle.series) {
        const std::string cost = detail::format_exact(s.cost_bps);
        for (std::size_t i = 0; i < s.result.size(); ++i) {
            out << format_date(s.result.dates[i]) << ',' << s.strategy << ',' << cost << ','
                << detail::format_exact(s.result.gross_returns[i]) << ','
                << detail::format_exact(s.result.daily_returns[i]) << '\n';
        }
    }
    return out.str();
}

void write_report(const ReportBundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    const auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
        out << text;
    };
    write("grid_stats.csv", render_grid(bundle.grid));
    write("cost_table.csv", render_cost_table(bundle.cost_table));

    std::ostringstream counts;
    write_universe_counts_csv(bundle.universe_counts, counts);
    write("universe_counts.csv", counts.str());
    write("equity_curves.csv", render_equity_curves(bundle));
    write("returns.csv", render_returns(bundle));

    std::ostringstream audit;
    audit << "date,asset_id,momentum_group,liquidity_group\n";
    for (const auto& s : bundle.sorts) write_sort_audit_csv(s, audit, false);
    write("sort_audit.csv", audit.str());
}

}  // namespace momliq
