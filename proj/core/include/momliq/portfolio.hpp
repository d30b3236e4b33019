#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momliq/signals.hpp"
#include "momliq/sorter.hpp"
#include "momliq/universe.hpp"

namespace momliq {

enum class Weighting { Equal, Cap };

enum class SelectionKind {
    Cell,    // one of the nine momentum x illiquidity cells
    Umd,     // winners minus losers within a liquidity tercile
    Iml,     // illiquid minus liquid within a momentum tercile
    Market,  // the whole eligible universe
};

struct Selection {
    SelectionKind kind = SelectionKind::Market;
    Tercile momentum = Tercile::Mid;
    Tercile liquidity = Tercile::Mid;

    static Selection cell(Tercile momentum, Tercile liquidity) { return {SelectionKind::Cell, momentum, liquidity}; }
    static Selection umd(Tercile liquidity) { return {SelectionKind::Umd, Tercile::Mid, liquidity}; }
    static Selection iml(Tercile momentum) { return {SelectionKind::Iml, momentum, Tercile::Mid}; }
    static Selection market() { return {SelectionKind::Market, Tercile::Mid, Tercile::Mid}; }

    bool is_long_short() const noexcept { return kind == SelectionKind::Umd || kind == SelectionKind::Iml; }

    friend bool operator==(const Selection&, const Selection&) = default;
};

/// Stable lower-case label, e.g. `losers_illiquid`, `umd_liquid`,
/// `iml_losers`, `market`.
std::string selection_name(const Selection& selection);

/// Parses the labels produced by selection_name. Throws ParseError.
Selection parse_selection(std::string_view text);

struct PortfolioSpec {
    Selection selection;
    Weighting weighting = Weighting::Equal;
    int rebalance_days = 14;
    double cost_bps = 0.0;
    bool charge_inception_costs = true;

    static PortfolioSpec market(double cost_bps = 0.0) {
        return {Selection::market(), Weighting::Cap, 14, cost_bps, true};
    }

    void validate() const;
};

/// Portfolio state as fractions of current equity.
struct Holding {
    std::map<AssetId, double> weights;
    double cash = 1.0;

    static Holding all_cash() { return {}; }
    double invested() const noexcept;
};

using ReturnMap = std::map<AssetId, double>;

/// Fully invested target. EQUAL gives 1/N per member; CAP weights by
/// market cap. Throws EmptyPortfolioError on no members and
/// MissingDataError when a CAP member lacks a positive cap.
Holding build_weights(std::span<const AssetId> members, Weighting weighting,
                      const std::map<AssetId, double>& marketcaps);

/// Buy-and-hold update over one day. Held assets absent from `returns` are
/// liquidated to cash at their previous value; cash earns nothing.
Holding drift(const Holding& holding, const ReturnMap& returns);

/// Sum of w_i * R_i over held assets with a return; absent ones add 0.
double portfolio_day_return(const Holding& holding, const ReturnMap& returns);

/// Sum of |target_i - current_i| over the union of assets, cash excluded.
double turnover(const Holding& current, const Holding& target);

/// Proportional one-way cost: cost_bps / 1e4 * turnover.
double rebalance_cost(const Holding& current, const Holding& target, double cost_bps);

struct DatedValue {
    Date date{};
    double value = 0.0;

    friend bool operator==(const DatedValue&, const DatedValue&) = default;
};

struct SkippedRebalance {
    Date date{};
    std::string reason;

    friend bool operator==(const SkippedRebalance&, const SkippedRebalance&) = default;
};

/// Daily series share the `dates` axis, one entry per calendar day of the
/// backtest window. Costs are already deducted from `daily_returns`.
struct BacktestResult {
    std::vector<Date> dates;
    std::vector<double> daily_returns;
    std::vector<double> gross_returns;
    std::vector<double> equity_curve;
    std::vector<DatedValue> turnover;
    std::vector<SkippedRebalance> skipped_rebalances;

    std::size_t size() const noexcept { return dates.size(); }

    friend bool operator==(const BacktestResult&, const BacktestResult&) = default;
};

/// Everything a rebalance needs, computed once per date and shared by every
/// portfolio that trades on it.
struct Formation {
    Date date{};
    std::vector<AssetId> universe;
    std::map<AssetId, double> marketcaps;
    SignalSnapshot signals;
    std::optional<SortResult> sort;
};

/// start, start + step, ... strictly before `end`.
std::vector<Date> rebalance_schedule(Date start, Date end, int rebalance_days);

Formation form_portfolios(const Panel& panel, Date date, const InclusionCriteria& criteria,
                          const SignalConfig& cfg);

std::vector<Formation> plan_formations(const Panel& panel, std::span<const Date> dates,
                                       const InclusionCriteria& criteria, const SignalConfig& cfg);

/// First panel date with a non-empty universe and at least one asset whose
/// signals are computable, if any.
std::optional<Date> default_start(const Panel& panel, const InclusionCriteria& criteria, const SignalConfig& cfg);

/// Daily backtest over [start, end]. Rebalances at rebalance_schedule dates
/// use the close of that day; trading costs are deducted from that day's
/// return. The first day carries no gross return since nothing is held
/// before inception. UMD/IML specs run both legs and return long minus
/// short. Throws WindowTooShortError when no rebalance date has a
/// non-empty universe.
BacktestResult run_backtest(const Panel& panel, const PortfolioSpec& spec, const InclusionCriteria& criteria,
                            const SignalConfig& cfg, Date start, Date end);

/// Same, reusing precomputed formations for the schedule dates.
BacktestResult run_backtest(const Panel& panel, const PortfolioSpec& spec, std::span<const Formation> plan,
                            Date start, Date end);

/// Per-date long minus short net returns. Throws AxisMismatchError.
std::vector<double> long_short_series(const BacktestResult& long_leg, const BacktestResult& short_leg);

/// Zero-investment result: gross difference of the legs less the trading
/// costs of both legs, combined turnover and skips, equity compounded from
/// the net series. At zero cost the net series equals long_short_series.
BacktestResult combine_long_short(const BacktestResult& long_leg, const BacktestResult& short_leg);

/// `date,gross_return,net_return,equity`.
void write_backtest_csv(const BacktestResult& result, std::ostream& out);
/// `rebalance_date,turnover`.
void write_turnover_csv(const BacktestResult& result, std::ostream& out);

}  // namespace momliq
