#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momliq/config.hpp"
#include "momliq/portfolio.hpp"
#include "momliq/stats.hpp"

namespace momliq {

/// Three-by-three momentum x illiquidity statistics with the UMD row and
/// IML column. Indexing follows Tercile order (Low, Mid, High).
struct GridStats {
    std::array<std::array<std::optional<PerfStats>, 3>, 3> cells;  // [momentum][liquidity]
    std::array<std::optional<PerfStats>, 3> umd;                    // by liquidity
    std::array<std::optional<PerfStats>, 3> iml;                    // by momentum
};

struct CostRow {
    std::string strategy;
    double cost_bps = 0.0;
    PerfStats stats;
};

/// One backtested series as emitted in returns.csv.
struct StrategySeries {
    std::string strategy;
    double cost_bps = 0.0;
    BacktestResult result;
};

struct ReportBundle {
    Date start{};
    Date end{};
    GridStats grid;
    std::vector<CostRow> cost_table;
    std::vector<UniverseCount> universe_counts;
    std::vector<StrategySeries> series;
    std::vector<SortResult> sorts;

    /// Zero-cost run of a strategy, if present.
    const StrategySeries* find(std::string_view strategy, double cost_bps = 0.0) const;
};

/// The two long-only strategies swept over trading costs.
inline const std::array<Selection, 2> kCostSweepStrategies{Selection::cell(Tercile::High, Tercile::Low),
                                                           Selection::cell(Tercile::Low, Tercile::High)};

/// Nine cells, three UMD and three IML series and the cap-weighted market,
/// all at zero cost, plus the cost sweep. Grid statistics use gross returns
/// against the gross market series. Independent backtests run concurrently;
/// the bundle does not depend on scheduling.
ReportBundle run_full_study(const RunConfig& config, const Panel& panel);

/// Loads (or generates) the panel named by the config, then runs the study.
Panel load_study_panel(const RunConfig& config);

/// Three blocks (mean_pct, std_pct, ir) of rows Losers, Neutral, Winners,
/// UMD and columns Liquid, Neutral, Illiquid, IML. UMD/IML means get a
/// trailing `*` when significant at 5%. Throws IncompleteGridError.
std::string render_grid(const GridStats& grid);

/// strategy,cost_bps,mean_daily_pct,std_daily_pct,ir_annualized
std::string render_cost_table(std::span<const CostRow> rows);

/// date,strategy,equity for the zero-cost series.
std::string render_equity_curves(const ReportBundle& bundle);

/// date,strategy,cost_bps,gross_return,net_return with exact numbers.
std::string render_returns(const ReportBundle& bundle);

/// Percent with two decimals: 0.005234 -> "0.52".
std::string format_pct(double fraction);
std::string format_fixed2(double value);

/// Writes grid_stats.csv, cost_table.csv, universe_counts.csv,
/// equity_curves.csv, returns.csv and sort_audit.csv into `dir`.
void write_report(const ReportBundle& bundle, const std::filesystem::path& dir);

}  // namespace momliq
