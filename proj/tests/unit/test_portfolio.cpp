#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "momliq/errors.hpp"
#include "momliq/portfolio.hpp"
#include "momliq/stats.hpp"
#include "momliq/synth.hpp"
#include "test_support.hpp"

using namespace momliq;
using namespace momliq::testing;

namespace {

InclusionCriteria short_history() {
    InclusionCriteria c;
    c.history_days = 30;
    return c;
}

SynthParams backtest_params(std::uint64_t seed) {
    SynthParams p;
    p.seed = seed;
    p.n_assets = 18;
    p.n_days = 150;
    p.listing_stagger_days = 2;
    p.missing_prob = 0.01;
    p.zero_volume_prob = 0.05;
    p.momentum_strength = 0.5;
    return p;
}

}  // namespace

TEST(Selection, NamesRoundTrip) {
    EXPECT_EQ(selection_name(Selection::cell(Tercile::Low, Tercile::High)), "losers_illiquid");
    EXPECT_EQ(selection_name(Selection::cell(Tercile::High, Tercile::Low)), "winners_liquid");
    EXPECT_EQ(selection_name(Selection::umd(Tercile::Low)), "umd_liquid");
    EXPECT_EQ(selection_name(Selection::iml(Tercile::Low)), "iml_losers");
    EXPECT_EQ(selection_name(Selection::market()), "market");
    for (Tercile m : kTerciles) {
        for (Tercile l : kTerciles) {
            const auto s = Selection::cell(m, l);
            EXPECT_EQ(parse_selection(selection_name(s)), s);
        }
        EXPECT_EQ(parse_selection(selection_name(Selection::umd(m))), Selection::umd(m));
        EXPECT_EQ(parse_selection(selection_name(Selection::iml(m))), Selection::iml(m));
    }
    EXPECT_THROW(parse_selection("umd_winners"), ParseError);
    EXPECT_THROW(parse_selection("best"), ParseError);
}

TEST(BuildWeights, EqualAndCap) {
    const std::vector<AssetId> four{"A", "B", "C", "D"};
    const Holding eq = build_weights(four, Weighting::Equal, {});
    for (const auto& a : four) EXPECT_EQ(eq.weights.at(a), 0.25);
    EXPECT_EQ(eq.cash, 0.0);

    const std::vector<AssetId> three{"A", "B", "C"};
    const Holding cap = build_weights(three, Weighting::Cap, {{"A", 2e9}, {"B", 1e9}, {"C", 1e9}});
    EXPECT_DOUBLE_EQ(cap.weights.at("A"), 0.5);
    EXPECT_DOUBLE_EQ(cap.weights.at("B"), 0.25);
    EXPECT_DOUBLE_EQ(cap.weights.at("C"), 0.25);

    EXPECT_THROW(build_weights(std::vector<AssetId>{}, Weighting::Equal, {}), EmptyPortfolioError);
    EXPECT_THROW(build_weights(three, Weighting::Cap, {{"A", 1.0}}), MissingDataError);
}

TEST(Drift, BuyAndHold) {
    Holding h;
    h.cash = 0.0;
    h.weights = {{"A", 0.5}, {"B", 0.5}};
    const Holding moved = drift(h, {{"A", 0.10}, {"B", -0.10}});
    EXPECT_DOUBLE_EQ(moved.weights.at("A"), 0.55);
    EXPECT_DOUBLE_EQ(moved.weights.at("B"), 0.45);

    const Holding still = drift(h, {{"A", 0.0}, {"B", 0.0}});
    EXPECT_EQ(still.weights, h.weights);

    const Holding gapped = drift(h, {{"A", 0.0}});
    EXPECT_FALSE(gapped.weights.contains("B"));
    EXPECT_DOUBLE_EQ(gapped.cash, 0.5);
    EXPECT_DOUBLE_EQ(gapped.invested() + gapped.cash, 1.0);
}

TEST(PortfolioDayReturn, WeightedSum) {
    Holding h;
    h.cash = 0.0;
    h.weights = {{"A", 0.5}, {"B", 0.5}};
    EXPECT_DOUBLE_EQ(portfolio_day_return(h, {{"A", 0.10}, {"B", -0.04}}), 0.03);
    EXPECT_DOUBLE_EQ(portfolio_day_return(h, {{"A", 0.10}, {"B", -0.10}}), 0.0);
    EXPECT_EQ(portfolio_day_return(Holding::all_cash(), {{"A", 0.5}}), 0.0);
}

TEST(RebalanceCost, Turnover) {
    Holding target;
    target.cash = 0.0;
    target.weights = {{"A", 0.5}, {"B", 0.5}};
    EXPECT_EQ(rebalance_cost(target, target, 100.0), 0.0);
    EXPECT_DOUBLE_EQ(rebalance_cost(Holding::all_cash(), target, 100.0), 0.01);
    EXPECT_EQ(rebalance_cost(Holding::all_cash(), target, 0.0), 0.0);

    Holding other;
    other.cash = 0.0;
    other.weights = {{"B", 0.25}, {"C", 0.75}};
    EXPECT_DOUBLE_EQ(turnover(target, other), 0.5 + 0.25 + 0.75);
}

TEST(RebalanceSchedule, StrictlyBeforeEnd) {
    const auto s = rebalance_schedule(day(0), day(28), 14);
    EXPECT_EQ(s, (std::vector<Date>{day(0), day(14)}));
    EXPECT_EQ(rebalance_schedule(day(0), day(29), 14).size(), 3u);
    EXPECT_THROW(rebalance_schedule(day(0), day(10), 0), ValidationError);
}

TEST(RunBacktest, SingleAssetMarketPassesReturnsThrough) {
    std::vector<double> prices{100.0};
    for (int i = 1; i < 90; ++i) prices.push_back(prices.back() * (1.0 + 0.01 * std::sin(i)));
    PanelBuilder b;
    add_path(b, "ONLY", 0, prices);
    const Panel p = std::move(b).build();

    const auto r = run_backtest(p, PortfolioSpec::market(), short_history(), SignalConfig{}, day(40), day(89));
    ASSERT_EQ(r.size(), 50u);
    EXPECT_EQ(r.dates.front(), day(40));
    EXPECT_EQ(r.dates.back(), day(89));
    EXPECT_EQ(r.gross_returns[0], 0.0);
    for (std::size_t i = 1; i < r.size(); ++i) {
        EXPECT_DOUBLE_EQ(r.daily_returns[i], daily_return(p, "ONLY", r.dates[i]));
    }
    EXPECT_TRUE(rel_close(r.equity_curve.back(), prices[89] / prices[40], 1e-12));
    EXPECT_EQ(r.turnover.front().value, 1.0);
    EXPECT_EQ(r.turnover[1].value, 0.0);
}

TEST(RunBacktest, CostsLowerReturnsOnRebalanceDaysOnly) {
    const Panel p = gen_panel(backtest_params(3));
    const Date start = p.first_date() + Days{70};
    const Date end = p.last_date();
    PortfolioSpec spec;
    spec.selection = Selection::cell(Tercile::High, Tercile::Low);
    const auto free = run_backtest(p, spec, short_history(), SignalConfig{}, start, end);
    spec.cost_bps = 50.0;
    const auto paid = run_backtest(p, spec, short_history(), SignalConfig{}, start, end);

    EXPECT_EQ(free.gross_returns, paid.gross_returns);
    EXPECT_EQ(free.turnover, paid.turnover);
    std::map<Date, double> traded;
    for (const auto& t : paid.turnover) traded[t.date] = t.value;
    for (std::size_t i = 0; i < paid.size(); ++i) {
        const auto it = traded.find(paid.dates[i]);
        const double expected = it == traded.end() ? 0.0 : 0.005 * it->second;
        EXPECT_NEAR(free.daily_returns[i] - paid.daily_returns[i], expected, 1e-15);
    }
    EXPECT_LT(paid.equity_curve.back(), free.equity_curve.back());
}

TEST(RunBacktest, InceptionCostToggle) {
    const Panel p = gen_panel(backtest_params(4));
    const Date start = p.first_date() + Days{70};
    PortfolioSpec spec;
    spec.selection = Selection::market();
    spec.weighting = Weighting::Cap;
    spec.cost_bps = 100.0;
    const auto charged = run_backtest(p, spec, short_history(), SignalConfig{}, start, p.last_date());
    spec.charge_inception_costs = false;
    const auto waived = run_backtest(p, spec, short_history(), SignalConfig{}, start, p.last_date());
    EXPECT_DOUBLE_EQ(charged.daily_returns[0], -0.01);
    EXPECT_EQ(waived.daily_returns[0], 0.0);
    for (std::size_t i = 1; i < charged.size(); ++i) EXPECT_EQ(charged.daily_returns[i], waived.daily_returns[i]);
}

TEST(LongShort, DifferenceAndAxisCheck) {
    BacktestResult a;
    BacktestResult b;
    a.dates = b.dates = {day(0), day(1)};
    a.daily_returns = a.gross_returns = {0.0, 0.015};
    b.daily_returns = b.gross_returns = {0.0, 0.005};
    EXPECT_DOUBLE_EQ(long_short_series(a, b)[1], 0.010);
    a.equity_curve = b.equity_curve = {1.0, 1.0};
    const auto combined = combine_long_short(a, b);
    EXPECT_DOUBLE_EQ(combined.equity_curve.back(), 1.010);

    BacktestResult shifted = b;
    shifted.dates = {day(1), day(2)};
    EXPECT_THROW(long_short_series(a, shifted), AxisMismatchError);
}

TEST(RunBacktest, EmptyUniverseEverywhereIsTooShort) {
    PanelBuilder b;
    add_path(b, "TINY", 0, flat(60), 1e6, 10.0);
    const Panel p = std::move(b).build();
    EXPECT_THROW(run_backtest(p, PortfolioSpec::market(), short_history(), SignalConfig{}, day(35), day(59)),
                 WindowTooShortError);
    EXPECT_THROW(run_backtest(p, PortfolioSpec::market(), short_history(), SignalConfig{}, day(35), day(35)),
                 ValidationError);
}

TEST(RunBacktest, EmptyCellHoldsPriorPortfolio) {
    // Two assets: LOW/HIGH momentum only, so the neutral cells stay empty.
    PanelBuilder b;
    add_path(b, "UP", 0, compounding(80, 100.0, 0.01));
    add_path(b, "DOWN", 0, compounding(80, 100.0, -0.01));
    const Panel p = std::move(b).build();
    PortfolioSpec spec;
    spec.selection = Selection::cell(Tercile::Mid, Tercile::Mid);
    const auto r = run_backtest(p, spec, short_history(), SignalConfig{}, day(40), day(79));
    EXPECT_TRUE(r.turnover.empty());
    EXPECT_EQ(r.skipped_rebalances.size(), 3u);
    for (double x : r.daily_returns) EXPECT_EQ(x, 0.0);
}

TEST(BacktestCsv, Layout) {
    BacktestResult r;
    r.dates = {day(0), day(1)};
    r.gross_returns = {0.0, 0.5};
    r.daily_returns = {-0.001, 0.5};
    r.equity_curve = {0.999, 1.4985};
    r.turnover = {{day(0), 1.0}};
    std::ostringstream a;
    write_backtest_csv(r, a);
    EXPECT_EQ(a.str(), "date,gross_return,net_return,equity\n2020-01-01,0,-0.001,0.999\n2020-01-02,0.5,0.5,1.4985\n");
    std::ostringstream t;
    write_turnover_csv(r, t);
    EXPECT_EQ(t.str(), "rebalance_date,turnover\n2020-01-01,1\n");
}

TEST(PortfolioProperties, AccountingIdentities) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Panel p = gen_panel(backtest_params(seed));
        const Date start = p.first_date() + Days{60};
        const auto schedule = rebalance_schedule(start, p.last_date(), 14);
        const auto plan = plan_formations(p, schedule, short_history(), SignalConfig{});

        for (const Selection& sel : {Selection::market(), Selection::cell(Tercile::Low, Tercile::High),
                                     Selection::cell(Tercile::High, Tercile::Mid)}) {
            PortfolioSpec spec;
            spec.selection = sel;
            spec.cost_bps = 25.0;
            const auto r = run_backtest(p, spec, plan, start, p.last_date());
            double equity = 1.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                equity *= 1.0 + r.daily_returns[i];
                EXPECT_TRUE(rel_close(r.equity_curve[i], equity, 1e-12));
                EXPECT_LE(r.daily_returns[i], r.gross_returns[i]);
            }
            const auto curve = equity_curve(r.daily_returns);
            EXPECT_TRUE(rel_close(curve.back(), r.equity_curve.back(), 1e-12));
            for (const auto& t : r.turnover) {
                EXPECT_GE(t.value, 0.0);
                EXPECT_LE(t.value, 2.0 + 1e-12);
            }
        }

        // Weight conservation through repeated drift, including gaps.
        const Formation* f = nullptr;
        for (const auto& x : plan) {
            if (!x.universe.empty()) {
                f = &x;
                break;
            }
        }
        ASSERT_NE(f, nullptr);
        Holding h = build_weights(f->universe, Weighting::Cap, f->marketcaps);
        for (Date d = f->date + Days{1}; d <= p.last_date(); d += Days{1}) {
            ReturnMap rets;
            for (const auto& [a, _] : h.weights) {
                if (auto r = try_daily_return(p, *p.index_of(a), d)) rets[a] = *r;
            }
            h = drift(h, rets);
            EXPECT_NEAR(h.invested() + h.cash, 1.0, 1e-9);
        }

        // Zero-investment series equal the per-date leg difference.
        PortfolioSpec umd;
        umd.selection = Selection::umd(Tercile::Mid);
        PortfolioSpec winners;
        winners.selection = Selection::cell(Tercile::High, Tercile::Mid);
        PortfolioSpec losers;
        losers.selection = Selection::cell(Tercile::Low, Tercile::Mid);
        const auto ls = run_backtest(p, umd, plan, start, p.last_date());
        const auto w = run_backtest(p, winners, plan, start, p.last_date());
        const auto l = run_backtest(p, losers, plan, start, p.last_date());
        for (std::size_t i = 0; i < ls.size(); ++i) {
            EXPECT_EQ(ls.daily_returns[i], w.daily_returns[i] - l.daily_returns[i]);
        }
    }
}

TEST(PortfolioProperties, PlanReuseMatchesDirectRun) {
    const Panel p = gen_panel(backtest_params(21));
    const Date start = p.first_date() + Days{60};
    PortfolioSpec spec;
    spec.selection = Selection::iml(Tercile::High);
    spec.cost_bps = 10.0;
    const auto schedule = rebalance_schedule(start, p.last_date(), spec.rebalance_days);
    const auto plan = plan_formations(p, schedule, short_history(), SignalConfig{});
    EXPECT_EQ(run_backtest(p, spec, plan, start, p.last_date()),
              run_backtest(p, spec, short_history(), SignalConfig{}, start, p.last_date()));
}

TEST(RunBacktest, ZeroInvestmentPaysForBothLegs) {
    const Panel p = gen_panel(backtest_params(9));
    const Date start = p.first_date() + Days{60};
    PortfolioSpec spec;
    spec.selection = Selection::umd(Tercile::Low);
    const auto free = run_backtest(p, spec, short_history(), SignalConfig{}, start, p.last_date());
    spec.cost_bps = 50.0;
    const auto paid = run_backtest(p, spec, short_history(), SignalConfig{}, start, p.last_date());
    std::map<Date, double> traded;
    for (const auto& t : paid.turnover) traded[t.date] = t.value;
    for (std::size_t i = 0; i < paid.size(); ++i) {
        const auto it = traded.find(paid.dates[i]);
        const double fee = it == traded.end() ? 0.0 : 0.005 * it->second;
        EXPECT_NEAR(free.daily_returns[i] - paid.daily_returns[i], fee, 1e-15);
    }
}
