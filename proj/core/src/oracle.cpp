#include "momliq/oracle.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momliq/errors.hpp"

// Everything below is deliberately naive. Nothing here calls the engine's
// universe, signal, sort, weighting or accounting code.

namespace momliq::oracle {

namespace {

std::optional<double> price_on(const Panel& panel, const AssetId& asset, Date d) {
    const DailyRecord* r = panel.find(asset, d);
    if (!r) return std::nullopt;
    return r->price_usd;
}

bool eligible(const Panel& panel, const AssetId& asset, Date t, const InclusionCriteria& c) {
    if (!panel.find(asset, t)) return false;

    std::optional<Date> earliest;
    for (Date d = panel.first_date(); d <= t && !earliest; d += Days{1}) {
        if (panel.find(asset, d)) earliest = d;
    }
    const Date window_start = t - Days{c.history_days};
    if (!earliest || *earliest > window_start) return false;

    int days_with_record = 0;
    for (Date d = window_start; d <= t; d += Days{1}) {
        const DailyRecord* r = panel.find(asset, d);
        if (!r) continue;
        ++days_with_record;
        if (r->marketcap_usd < c.min_marketcap_usd) return false;
    }
    return static_cast<double>(days_with_record) / static_cast<double>(c.history_days + 1) >= c.min_coverage;
}

struct Signals {
    AssetId asset;
    double momentum = 0.0;
    double illiquidity = 0.0;
};

std::optional<Signals> signals_for(const Panel& panel, const AssetId& asset, Date t, const SignalConfig& cfg) {
    const auto p_now = price_on(panel, asset, t);
    const auto p_then = price_on(panel, asset, t - Days{cfg.momentum_days});
    if (!p_now || !p_then) return std::nullopt;

    double total = 0.0;
    int used = 0;
    for (int back = cfg.illiq_days - 1; back >= 0; --back) {
        const Date day = t - Days{back};
        const DailyRecord* today = panel.find(asset, day);
        const DailyRecord* before = panel.find(asset, day - Days{1});
        if (!today || !before || today->volume_usd <= 0.0) continue;
        const double r = today->price_usd / before->price_usd - 1.0;
        total += std::fabs(r) / today->volume_usd;
        used += 1;
    }
    if (used < cfg.min_volume_days) return std::nullopt;
    return Signals{asset, (*p_now - *p_then) / *p_then, total / used};
}

// 0 = bottom tail, 1 = middle, 2 = top tail, by counting how many assets
// order strictly before each one.
std::vector<int> rank_buckets(const std::vector<Signals>& all, double Signals::*field) {
    const std::size_t n = all.size();
    auto tail = static_cast<std::size_t>(std::floor(0.3 * static_cast<double>(n) + 0.5));
    std::size_t top_tail = tail;
    if (tail + top_tail > n) top_tail = n - tail;
    std::vector<int> out(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t before = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double vi = all[i].*field;
            const double vj = all[j].*field;
            if (vj < vi || (vj == vi && all[j].asset < all[i].asset)) ++before;
        }
        if (before < tail) {
            out[i] = 0;
        } else if (before >= n - top_tail) {
            out[i] = 2;
        }
    }
    return out;
}

int bucket_index(Tercile t) {
    return t == Tercile::Low ? 0 : (t == Tercile::Mid ? 1 : 2);
}

struct Target {
    std::map<AssetId, double> weights;
    bool universe_nonempty = false;
};

Target target_for(const Panel& panel, const Selection& sel, Weighting weighting, Date t,
                  const InclusionCriteria& criteria, const SignalConfig& cfg) {
    Target out;
    std::vector<AssetId> universe;
    for (const AssetId& a : panel.assets()) {
        if (eligible(panel, a, t, criteria)) universe.push_back(a);
    }
    out.universe_nonempty = !universe.empty();

    std::vector<AssetId> members;
    if (sel.kind == SelectionKind::Market) {
        members = universe;
    } else {
        std::vector<Signals> sig;
        for (const AssetId& a : universe) {
            if (auto s = signals_for(panel, a, t, cfg)) sig.push_back(*s);
        }
        if (!sig.empty()) {
            const auto mom = rank_buckets(sig, &Signals::momentum);
            const auto liq = rank_buckets(sig, &Signals::illiquidity);
            for (std::size_t i = 0; i < sig.size(); ++i) {
                if (mom[i] == bucket_index(sel.momentum) && liq[i] == bucket_index(sel.liquidity)) {
                    members.push_back(sig[i].asset);
                }
            }
        }
    }
    if (members.empty()) return out;

    if (weighting == Weighting::Equal) {
        for (const AssetId& a : members) out.weights[a] = 1.0 / static_cast<double>(members.size());
    } else {
        double caps = 0.0;
        for (const AssetId& a : members) caps += panel.find(a, t)->marketcap_usd;
        for (const AssetId& a : members) out.weights[a] = panel.find(a, t)->marketcap_usd / caps;
    }
    return out;
}

BacktestResult run_leg(const Panel& panel, const PortfolioSpec& spec, const InclusionCriteria& criteria,
                       const SignalConfig& cfg, Date start, Date end) {
    BacktestResult res;
    std::map<AssetId, double> units;
    std::map<AssetId, double> last_price;
    double cash = 1.0;
    double equity = 1.0;
    bool ever_invested = false;
    bool any_universe = false;

    for (Date d = start; d <= end; d += Days{1}) {
        // Mark to market; positions without a price today are sold at the
        // last price seen.
        double value = cash;
        std::vector<AssetId> gone;
        for (const auto& [a, u] : units) {
            if (const auto p = price_on(panel, a, d)) {
                value += u * *p;
                last_price[a] = *p;
            } else {
                value += u * last_price.at(a);
                gone.push_back(a);
            }
        }
        for (const AssetId& a : gone) {
            cash += units[a] * last_price[a];
            units.erase(a);
        }
        const double gross = d == start ? 0.0 : value / equity - 1.0;
        double net = gross;
        double new_equity = value;

        const long offset = days_between(start, d);
        if (d < end && offset % spec.rebalance_days == 0) {
            const Target target = target_for(panel, spec.selection, spec.weighting, d, criteria, cfg);
            any_universe = any_universe || target.universe_nonempty;
            if (target.weights.empty()) {
                res.skipped_rebalances.push_back({d, "no members"});
            } else {
                std::map<AssetId, double> held_share;
                for (const auto& [a, u] : units) held_share[a] = u * *price_on(panel, a, d) / value;
                double traded = 0.0;
                for (const auto& [a, w] : target.weights) {
                    traded += std::fabs(w - (held_share.contains(a) ? held_share[a] : 0.0));
                }
                for (const auto& [a, s] : held_share) {
                    if (!target.weights.contains(a)) traded += std::fabs(s);
                }
                const bool charge = ever_invested || spec.charge_inception_costs;
                const double fee = charge ? spec.cost_bps * 1e-4 * traded * equity : 0.0;
                new_equity = value - fee;
                net = d == start ? -fee / equity : new_equity / equity - 1.0;

                units.clear();
                for (const auto& [a, w] : target.weights) {
                    const double p = *price_on(panel, a, d);
                    units[a] = w * new_equity / p;
                    last_price[a] = p;
                }
                cash = 0.0;
                ever_invested = true;
                res.turnover.push_back({d, traded});
            }
        }

        equity = new_equity;
        res.dates.push_back(d);
        res.gross_returns.push_back(gross);
        res.daily_returns.push_back(net);
        res.equity_curve.push_back(equity);
    }
    if (!any_universe) throw WindowTooShortError("oracle: no rebalance date with a non-empty universe");
    return res;
}

}  // namespace

BacktestResult oracle_backtest(const Panel& panel, const PortfolioSpec& spec, const InclusionCriteria& criteria,
                               const SignalConfig& cfg, Date start, Date end) {
    if (!(start < end)) throw ValidationError("oracle: start must precede end");
    if (!spec.selection.is_long_short()) return run_leg(panel, spec, criteria, cfg, start, end);

    PortfolioSpec long_spec = spec;
    PortfolioSpec short_spec = spec;
    if (spec.selection.kind == SelectionKind::Umd) {
        long_spec.selection = Selection::cell(Tercile::High, spec.selection.liquidity);
        short_spec.selection = Selection::cell(Tercile::Low, spec.selection.liquidity);
    } else {
        long_spec.selection = Selection::cell(spec.selection.momentum, Tercile::High);
        short_spec.selection = Selection::cell(spec.selection.momentum, Tercile::Low);
    }
    const BacktestResult up = run_leg(panel, long_spec, criteria, cfg, start, end);
    const BacktestResult down = run_leg(panel, short_spec, criteria, cfg, start, end);

    BacktestResult res;
    res.dates = up.dates;
    double equity = 1.0;
    for (std::size_t i = 0; i < up.dates.size(); ++i) {
        // Shorting the down leg earns minus its gross return and still pays
        // for the trades that leg makes.
        const double short_fee = down.gross_returns[i] - down.daily_returns[i];
        res.daily_returns.push_back(up.daily_returns[i] + (-down.gross_returns[i] - short_fee));
        res.gross_returns.push_back(up.gross_returns[i] - down.gross_returns[i]);
        equity *= 1.0 + res.daily_returns.back();
        res.equity_curve.push_back(equity);
    }
    std::map<Date, double> traded;
    for (const auto& t : up.turnover) traded[t.date] += t.value;
    for (const auto& t : down.turnover) traded[t.date] += t.value;
    for (const auto& [d, v] : traded) res.turnover.push_back({d, v});
    for (const auto& s : up.skipped_rebalances) res.skipped_rebalances.push_back(s);
    for (const auto& s : down.skipped_rebalances) res.skipped_rebalances.push_back(s);
    return res;
}

}  // namespace momliq::oracle
