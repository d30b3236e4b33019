#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "momliq/config.hpp"
#include "momliq/errors.hpp"
#include "momliq/report.hpp"
#include "momliq/stats.hpp"

using namespace momliq;
namespace fs = std::filesystem;

namespace {

RunConfig study_config() {
    std::istringstream in(
        "seed = 7\n"
        "synth_assets = 30\n"
        "synth_days = 320\n"
        "synth_momentum_strength = 0.3\n"
        "synth_listing_stagger_days = 2\n"
        "synth_zero_volume_prob = 0.02\n"
        "history_days = 90\n"
        "cost_bps_list = 0, 10, 50\n");
    return parse_config(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

PerfStats stats_with(double mean, double std, std::optional<double> p, std::optional<double> ir = 1.0) {
    PerfStats s;
    s.n = 100;
    s.mean_daily = mean;
    s.std_daily = std;
    s.ir_annualized = ir;
    s.p_value = p;
    if (p) s.t_stat = 2.0;
    return s;
}

GridStats filled_grid() {
    GridStats g;
    for (auto& row : g.cells) {
        for (auto& c : row) c = stats_with(0.001, 0.02, 0.5);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        g.umd[i] = stats_with(0.002, 0.03, 0.30);
        g.iml[i] = stats_with(-0.001, 0.03, 0.30, std::nullopt);
    }
    return g;
}

}  // namespace

TEST(Config, ParsesKeysAndResolvesPaths) {
    const fs::path dir = fs::temp_directory_path() / "momliq_config_test";
    fs::create_directories(dir);
    { std::ofstream(dir / "panel.csv") << "date,asset_id,price_usd,volume_usd,marketcap_usd\n"; }
    std::istringstream in(
        "# comment\n"
        "panel_path = panel.csv\n"
        "start = 2019-01-01   # inline\n"
        "end = 2019-06-30\n"
        "history_days = 100\n"
        "min_marketcap_usd = 2e6\n"
        "rebalance_days = 7\n"
        "cost_bps_list = 0,25\n"
        "charge_inception_costs = false\n");
    const RunConfig c = parse_config(in, dir);
    EXPECT_EQ(c.panel_path, (dir / "panel.csv").string());
    EXPECT_EQ(c.start, make_date(2019, 1, 1));
    EXPECT_EQ(c.criteria.history_days, 100);
    EXPECT_EQ(c.criteria.min_marketcap_usd, 2e6);
    EXPECT_EQ(c.rebalance_days, 7);
    EXPECT_EQ(c.cost_bps_list, (std::vector<double>{0.0, 25.0}));
    EXPECT_FALSE(c.charge_inception_costs);
    EXPECT_FALSE(c.synthetic());
    EXPECT_NO_THROW(c.validate());
    fs::remove_all(dir);
}

TEST(Config, Errors) {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
    };
    EXPECT_THROW(parse("colour = blue\n"), ConfigError);
    EXPECT_THROW(parse("history_days = many\n"), ConfigError);
    EXPECT_THROW(parse("just words\n"), ConfigError);
    EXPECT_THROW(parse("start = 2019-02-30\n"), ConfigError);
    EXPECT_THROW(parse("seed = 1\ncost_bps_list =\n").validate(), ConfigError);
    EXPECT_THROW(parse("seed = 1\ncost_bps_list = 10,-5\n").validate(), ConfigError);
    EXPECT_THROW(parse("panel_path = /nonexistent/panel.csv\n").validate(), ConfigError);
    EXPECT_THROW(parse("").validate(), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
    EXPECT_NO_THROW(parse("seed = 3\n").validate());
}

TEST(Formatting, PercentAndFixed) {
    EXPECT_EQ(format_pct(0.005234), "0.52");
    EXPECT_EQ(format_pct(-0.0001), "-0.01");
    EXPECT_EQ(format_fixed2(1.005), "1.00");
    EXPECT_EQ(format_fixed2(-12.3456), "-12.35");
}

TEST(RenderGrid, SignificanceMarkers) {
    GridStats g = filled_grid();
    g.umd[2] = stats_with(0.0052, 0.03, 0.03);
    const std::string text = render_grid(g);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "block,row,Liquid,Neutral,Illiquid,IML");
    std::getline(lines, line);
    EXPECT_EQ(line, "mean_pct,Losers,0.10,0.10,0.10,-0.10");
    std::getline(lines, line);
    std::getline(lines, line);
    std::getline(lines, line);
    EXPECT_EQ(line, "mean_pct,UMD,0.20,0.20,0.52*,");
    EXPECT_NE(text.find("ir,Losers,1.00,1.00,1.00,NA"), std::string::npos);
    EXPECT_NE(text.find("std_pct,UMD,3.00,3.00,3.00,"), std::string::npos);
    EXPECT_EQ(std::count(text.begin(), text.end(), '*'), 1);
}

TEST(RenderGrid, IncompleteGridThrows) {
    GridStats g = filled_grid();
    g.cells[1][2].reset();
    EXPECT_THROW(render_grid(g), IncompleteGridError);
    g = filled_grid();
    g.iml[0].reset();
    EXPECT_THROW(render_grid(g), IncompleteGridError);
}

TEST(FullStudy, ArtifactsAreCompleteAndReproducible) {
    const RunConfig config = study_config();
    const Panel panel = load_study_panel(config);
    const ReportBundle bundle = run_full_study(config, panel);

    // 9 cells + 3 UMD + 3 IML + market, then 2 strategies x 2 nonzero costs.
    EXPECT_EQ(bundle.series.size(), 20u);
    EXPECT_EQ(bundle.cost_table.size(), 6u);
    EXPECT_FALSE(bundle.universe_counts.empty());
    EXPECT_NO_THROW(render_grid(bundle.grid));

    const fs::path a = fs::temp_directory_path() / "momliq_study_a";
    const fs::path b = fs::temp_directory_path() / "momliq_study_b";
    fs::remove_all(a);
    fs::remove_all(b);
    write_report(bundle, a);
    write_report(run_full_study(config, load_study_panel(config)), b);
    for (const char* name : {"grid_stats.csv", "cost_table.csv", "universe_counts.csv", "equity_curves.csv",
                             "returns.csv", "sort_audit.csv"}) {
        ASSERT_TRUE(fs::exists(a / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }

    // Re-derive the liquid UMD row entry from the emitted per-date series.
    std::map<std::string, std::vector<double>> gross;
    std::istringstream returns(slurp(a / "returns.csv"));
    std::string line;
    std::getline(returns, line);
    while (std::getline(returns, line)) {
        std::vector<std::string> f;
        std::istringstream fields(line);
        for (std::string x; std::getline(fields, x, ',');) f.push_back(x);
        ASSERT_EQ(f.size(), 5u);
        if (f[2] == "0") gross[f[1]].push_back(std::stod(f[3]));
    }
    const auto& winners = gross.at("winners_liquid");
    const auto& losers = gross.at("losers_liquid");
    const auto& umd = gross.at("umd_liquid");
    ASSERT_EQ(winners.size(), umd.size());
    std::vector<double> rebuilt(umd.size());
    for (std::size_t i = 0; i < umd.size(); ++i) {
        rebuilt[i] = winners[i] - losers[i];
        EXPECT_EQ(rebuilt[i], umd[i]);
    }
    const auto& reported = *bundle.grid.umd[0];
    EXPECT_EQ(mean_std(rebuilt).mean, reported.mean_daily);
    EXPECT_EQ(ttest_zero(rebuilt).p_value, *reported.p_value);

    const std::string grid = slurp(a / "grid_stats.csv");
    const std::string expected_cell = format_pct(reported.mean_daily) + (reported.significant() ? "*" : "");
    EXPECT_NE(grid.find("mean_pct,UMD," + expected_cell + ","), std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(FullStudy, CostTableIsMonotoneAndGrossInvariant) {
    const RunConfig config = study_config();
    const ReportBundle bundle = run_full_study(config, load_study_panel(config));
    for (const Selection& sel : kCostSweepStrategies) {
        const std::string name = selection_name(sel);
        const auto* free = bundle.find(name, 0.0);
        const auto* mid = bundle.find(name, 10.0);
        const auto* high = bundle.find(name, 50.0);
        ASSERT_TRUE(free && mid && high);
        EXPECT_EQ(free->result.gross_returns, high->result.gross_returns);
        EXPECT_GE(free->result.equity_curve.back(), mid->result.equity_curve.back());
        EXPECT_GE(mid->result.equity_curve.back(), high->result.equity_curve.back());
    }
}
