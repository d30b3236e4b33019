#include "momliq/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "momliq/errors.hpp"
#include "text_util.hpp"

namespace momliq {

namespace {

std::string_view momentum_label(Tercile t) {
    switch (t) {
        case Tercile::Low: return "losers";
        case Tercile::Mid: return "neutral";
        case Tercile::High: return "winners";
    }
    return "?";
}

std::string_view liquidity_label(Tercile t) {
    switch (t) {
        case Tercile::Low: return "liquid";
        case Tercile::Mid: return "neutral";
        case Tercile::High: return "illiquid";
    }
    return "?";
}

std::optional<Tercile> momentum_from_label(std::string_view s) {
    if (s == "losers") return Tercile::Low;
    if (s == "neutral") return Tercile::Mid;
    if (s == "winners") return Tercile::High;
    return std::nullopt;
}

std::optional<Tercile> liquidity_from_label(std::string_view s) {
    if (s == "liquid") return Tercile::Low;
    if (s == "neutral") return Tercile::Mid;
    if (s == "illiquid") return Tercile::High;
    return std::nullopt;
}

struct Legs {
    Selection long_leg;
    Selection short_leg;
};

Legs legs_of(const Selection& s) {
    if (s.kind == SelectionKind::Umd) {
        return {Selection::cell(Tercile::High, s.liquidity), Selection::cell(Tercile::Low, s.liquidity)};
    }
    return {Selection::cell(s.momentum, Tercile::High), Selection::cell(s.momentum, Tercile::Low)};
}

// Members for a long-only selection, or an empty list with a reason.
std::vector<AssetId> members_for(const Selection& selection, const Formation& f, std::string& reason) {
    if (selection.kind == SelectionKind::Market) {
        if (f.universe.empty()) reason = "empty universe";
        return f.universe;
    }
    if (f.universe.empty()) {
        reason = "empty universe";
        return {};
    }
    if (!f.sort) {
        reason = "no asset with computable signals";
        return {};
    }
    auto members = f.sort->cell(selection.momentum, selection.liquidity);
    if (members.empty()) reason = "empty cell " + selection_name(selection);
    return members;
}

}  // namespace

std::string selection_name(const Selection& s) {
    switch (s.kind) {
        case SelectionKind::Cell:
            return std::string(momentum_label(s.momentum)) + "_" + std::string(liquidity_label(s.liquidity));
        case SelectionKind::Umd: return "umd_" + std::string(liquidity_label(s.liquidity));
        case SelectionKind::Iml: return "iml_" + std::string(momentum_label(s.momentum));
        case SelectionKind::Market: return "market";
    }
    return "?";
}

Selection parse_selection(std::string_view text) {
    if (text == "market") return Selection::market();
    const auto us = text.find('_');
    if (us != std::string_view::npos) {
        const auto head = text.substr(0, us);
        const auto tail = text.substr(us + 1);
        if (head == "umd") {
            if (auto l = liquidity_from_label(tail)) return Selection::umd(*l);
        } else if (head == "iml") {
            if (auto m = momentum_from_label(tail)) return Selection::iml(*m);
        } else if (auto m = momentum_from_label(head)) {
            if (auto l = liquidity_from_label(tail)) return Selection::cell(*m, *l);
        }
    }
    throw ParseError("unknown portfolio selection '" + std::string(text) + "'");
}

void PortfolioSpec::validate() const {
    if (rebalance_days < 1) throw ValidationError("rebalance_days must be >= 1");
    if (!(cost_bps >= 0.0) || !std::isfinite(cost_bps)) throw ValidationError("cost_bps must be non-negative");
}

double Holding::invested() const noexcept {
    double sum = 0.0;
    for (const auto& [_, w] : weights) sum += w;
    return sum;
}

Holding build_weights(std::span<const AssetId> members, Weighting weighting,
                      const std::map<AssetId, double>& marketcaps) {
    if (members.empty()) throw EmptyPortfolioError("build_weights: no members");
    Holding h;
    h.cash = 0.0;
    if (weighting == Weighting::Equal) {
        const double w = 1.0 / static_cast<double>(members.size());
        for (const AssetId& a : members) h.weights[a] = w;
        return h;
    }
    double total = 0.0;
    for (const AssetId& a : members) {
        const auto it = marketcaps.find(a);
        if (it == marketcaps.end() || !(it->second > 0.0)) {
            throw MissingDataError(a, Date{});
        }
        total += it->second;
    }
    for (const AssetId& a : members) h.weights[a] = marketcaps.at(a) / total;
    return h;
}

Holding drift(const Holding& holding, const ReturnMap& returns) {
    Holding next;
    next.cash = holding.cash;
    double growth = holding.cash;
    for (const auto& [asset, w] : holding.weights) {
        const auto it = returns.find(asset);
        if (it == returns.end()) {
            next.cash += w;
            growth += w;
            continue;
        }
        const double grown = w * (1.0 + it->second);
        next.weights[asset] = grown;
        growth += grown;
    }
    if (growth > 0.0) {
        for (auto& [_, w] : next.weights) w /= growth;
        next.cash /= growth;
    }
    return next;
}

double portfolio_day_return(const Holding& holding, const ReturnMap& returns) {
    double r = 0.0;
    for (const auto& [asset, w] : holding.weights) {
        const auto it = returns.find(asset);
        if (it != returns.end()) r += w * it->second;
    }
    return r;
}

double turnover(const Holding& current, const Holding& target) {
    double sum = 0.0;
    for (const auto& [asset, w] : target.weights) {
        const auto it = current.weights.find(asset);
        sum += std::abs(w - (it == current.weights.end() ? 0.0 : it->second));
    }
    for (const auto& [asset, w] : current.weights) {
        if (!target.weights.contains(asset)) sum += std::abs(w);
    }
    return sum;
}

double rebalance_cost(const Holding& current, const Holding& target, double cost_bps) {
    return cost_bps / 10'000.0 * turnover(current, target);
}

std::vector<Date> rebalance_schedule(Date start, Date end, int rebalance_days) {
    if (rebalance_days < 1) throw ValidationError("rebalance_days must be >= 1");
    std::vector<Date> out;
    for (Date d = start; d < end; d += Days{rebalance_days}) out.push_back(d);
    return out;
}

Formation form_portfolios(const Panel& panel, Date date, const InclusionCriteria& criteria,
                          const SignalConfig& cfg) {
    Formation f;
    f.date = date;
    f.universe = select_universe(panel, date, criteria);
    for (const AssetId& a : f.universe) f.marketcaps[a] = panel.find(a, date)->marketcap_usd;
    f.signals = compute_snapshot(panel, f.universe, date, cfg);
    if (!f.signals.empty()) f.sort = bivariate_sort(f.signals);
    return f;
}

std::vector<Formation> plan_formations(const Panel& panel, std::span<const Date> dates,
                                       const InclusionCriteria& criteria, const SignalConfig& cfg) {
    std::vector<Formation> out;
    out.reserve(dates.size());
    for (Date d : dates) out.push_back(form_portfolios(panel, d, criteria, cfg));
    return out;
}

std::optional<Date> default_start(const Panel& panel, const InclusionCriteria& criteria, const SignalConfig& cfg) {
    if (panel.empty()) return std::nullopt;
    criteria.validate();
    cfg.validate();
    for (Date d = panel.first_date() + Days{criteria.history_days}; d <= panel.last_date(); d += Days{1}) {
        const auto universe = select_universe(panel, d, criteria);
        if (universe.empty()) continue;
        if (!compute_snapshot(panel, universe, d, cfg).empty()) return d;
    }
    return std::nullopt;
}

namespace {

BacktestResult run_long_only(const Panel& panel, const PortfolioSpec& spec, std::span<const Formation> plan,
                             Date start, Date end) {
    std::map<Date, const Formation*> by_date;
    for (const Formation& f : plan) by_date[f.date] = &f;

    const auto schedule = rebalance_schedule(start, end, spec.rebalance_days);
    bool any_universe = false;
    for (Date d : schedule) {
        const auto it = by_date.find(d);
        if (it == by_date.end()) {
            throw ValidationError("formation plan lacks rebalance date " + format_date(d));
        }
        any_universe = any_universe || !it->second->universe.empty();
    }
    if (!any_universe) {
        throw WindowTooShortError("no rebalance date in [" + format_date(start) + ", " + format_date(end) +
                                  "] has a non-empty universe");
    }

    const double cost_rate = spec.cost_bps / 10'000.0;
    BacktestResult result;
    const auto n_days = static_cast<std::size_t>(days_between(start, end)) + 1;
    result.dates.reserve(n_days);
    result.daily_returns.reserve(n_days);
    result.gross_returns.reserve(n_days);
    result.equity_curve.reserve(n_days);

    Holding holding = Holding::all_cash();
    bool invested = false;
    double equity = 1.0;
    std::size_t next_rebalance = 0;
    ReturnMap returns;

    for (Date d = start; d <= end; d += Days{1}) {
        double gross = 0.0;
        if (d > start && !holding.weights.empty()) {
            returns.clear();
            for (const auto& [asset, _] : holding.weights) {
                const auto idx = panel.index_of(asset);
                if (!idx) continue;
                if (const auto r = try_daily_return(panel, *idx, d)) returns.emplace(asset, *r);
            }
            gross = portfolio_day_return(holding, returns);
            holding = drift(holding, returns);
        }
        double net = gross;

        if (next_rebalance < schedule.size() && schedule[next_rebalance] == d) {
            ++next_rebalance;
            const Formation& f = *by_date.at(d);
            std::string reason;
            const auto members = members_for(spec.selection, f, reason);
            if (members.empty()) {
                result.skipped_rebalances.push_back({d, reason});
            } else {
                Holding target = build_weights(members, spec.weighting, f.marketcaps);
                const double traded = turnover(holding, target);
                const bool charge = invested || spec.charge_inception_costs;
                net = gross - (charge ? cost_rate * traded : 0.0);
                result.turnover.push_back({d, traded});
                holding = std::move(target);
                invested = true;
            }
        }

        equity *= 1.0 + net;
        result.dates.push_back(d);
        result.gross_returns.push_back(gross);
        result.daily_returns.push_back(net);
        result.equity_curve.push_back(equity);
    }
    return result;
}

}  // namespace

BacktestResult run_backtest(const Panel& panel, const PortfolioSpec& spec, std::span<const Formation> plan,
                            Date start, Date end) {
    spec.validate();
    if (!(start < end)) throw ValidationError("backtest start must precede end");
    if (!spec.selection.is_long_short()) return run_long_only(panel, spec, plan, start, end);

    const Legs legs = legs_of(spec.selection);
    PortfolioSpec long_spec = spec;
    long_spec.selection = legs.long_leg;
    PortfolioSpec short_spec = spec;
    short_spec.selection = legs.short_leg;
    return combine_long_short(run_long_only(panel, long_spec, plan, start, end),
                              run_long_only(panel, short_spec, plan, start, end));
}

BacktestResult run_backtest(const Panel& panel, const PortfolioSpec& spec, const InclusionCriteria& criteria,
                            const SignalConfig& cfg, Date start, Date end) {
    spec.validate();
    criteria.validate();
    cfg.validate();
    if (!(start < end)) throw ValidationError("backtest start must precede end");
    const auto schedule = rebalance_schedule(start, end, spec.rebalance_days);
    const auto plan = plan_formations(panel, schedule, criteria, cfg);
    return run_backtest(panel, spec, plan, start, end);
}

std::vector<double> long_short_series(const BacktestResult& long_leg, const BacktestResult& short_leg) {
    if (long_leg.dates != short_leg.dates) throw AxisMismatchError("long and short legs have different date axes");
    std::vector<double> out(long_leg.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = long_leg.daily_returns[i] - short_leg.daily_returns[i];
    return out;
}

BacktestResult combine_long_short(const BacktestResult& long_leg, const BacktestResult& short_leg) {
    if (long_leg.dates != short_leg.dates) throw AxisMismatchError("long and short legs have different date axes");
    BacktestResult out;
    out.dates = long_leg.dates;
    out.gross_returns.resize(out.dates.size());
    out.daily_returns.resize(out.dates.size());
    out.equity_curve.resize(out.dates.size());
    double equity = 1.0;
    for (std::size_t i = 0; i < out.dates.size(); ++i) {
        out.gross_returns[i] = long_leg.gross_returns[i] - short_leg.gross_returns[i];
        const double cost = (long_leg.gross_returns[i] - long_leg.daily_returns[i]) +
                            (short_leg.gross_returns[i] - short_leg.daily_returns[i]);
        out.daily_returns[i] = out.gross_returns[i] - cost;
        equity *= 1.0 + out.daily_returns[i];
        out.equity_curve[i] = equity;
    }

    std::map<Date, double> traded;
    for (const auto& t : long_leg.turnover) traded[t.date] += t.value;
    for (const auto& t : short_leg.turnover) traded[t.date] += t.value;
    for (const auto& [d, v] : traded) out.turnover.push_back({d, v});

    for (const auto& s : long_leg.skipped_rebalances) out.skipped_rebalances.push_back({s.date, "long leg: " + s.reason});
    for (const auto& s : short_leg.skipped_rebalances) {
        out.skipped_rebalances.push_back({s.date, "short leg: " + s.reason});
    }
    std::stable_sort(out.skipped_rebalances.begin(), out.skipped_rebalances.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });
    return out;
}

void write_backtest_csv(const BacktestResult& result, std::ostream& out) {
    out << "date,gross_return,net_return,equity\n";
    for (std::size_t i = 0; i < result.size(); ++i) {
        out << format_date(result.dates[i]) << ',' << detail::format_exact(result.gross_returns[i]) << ','
            << detail::format_exact(result.daily_returns[i]) << ',' << detail::format_exact(result.equity_curve[i])
            << '\n';
    }
}

void write_turnover_csv(const BacktestResult& result, std::ostream& out) {
    out << "rebalance_date,turnover\n";
    for (const auto& t : result.turnover) out << format_date(t.date) << ',' << detail::format_exact(t.value) << '\n';
}

}  // namespace momliq
