#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "momliq/errors.hpp"
#include "momliq/synth.hpp"
#include "momliq/universe.hpp"
#include "test_support.hpp"

using namespace momliq;
using namespace momliq::testing;

namespace {

constexpr int kT = 250;

Panel truncate_after(const Panel& panel, Date last) {
    PanelBuilder b;
    for (std::size_t i = 0; i < panel.assets().size(); ++i) {
        for (const DailyRecord& r : panel.records(i)) {
            if (r.date <= last) b.add(panel.assets()[i], r);
        }
    }
    return std::move(b).build();
}

SynthParams universe_params(std::uint64_t seed) {
    SynthParams p;
    p.seed = seed;
    p.n_assets = 15;
    p.n_days = 160;
    p.listing_stagger_days = 6;
    p.missing_prob = 0.02;
    p.marketcap_base = 3e6;  // some assets dip under the floor
    p.daily_vol = 0.06;
    return p;
}

}  // namespace

TEST(InclusionCriteria, DefaultsAndValidation) {
    const InclusionCriteria c;
    EXPECT_EQ(c.history_days, 182);
    EXPECT_EQ(c.min_marketcap_usd, 1e6);
    EXPECT_EQ(c.min_coverage, 0.95);
    EXPECT_NO_THROW(c.validate());

    InclusionCriteria bad = c;
    bad.history_days = 0;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = c;
    bad.min_marketcap_usd = 0.0;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = c;
    bad.min_coverage = 1.5;
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(SelectUniverse, InclusionRules) {
    PanelBuilder b;
    add_path(b, "YOUNG", kT - 100, flat(101), 1e6, 5e6);
    add_path(b, "GOOD", 0, flat(kT + 1), 1e6, 1.5e6);
    add_path(b, "NOTODAY", 0, flat(kT), 1e6, 5e6);  // last record the day before t
    for (int d = 0; d <= kT; ++d) {
        b.add("SMALLDAY", DailyRecord{day(d), 100.0, 1e6, d == kT - 30 ? 900'000.0 : 5e6});
    }
    const Panel p = std::move(b).build();
    EXPECT_EQ(select_universe(p, day(kT), InclusionCriteria{}), std::vector<AssetId>{"GOOD"});
}

TEST(SelectUniverse, SubThresholdDayOutsideWindowIsForgotten) {
    PanelBuilder b;
    for (int d = 0; d <= kT; ++d) b.add("A", DailyRecord{day(d), 1.0, 1.0, d == 10 ? 5e5 : 2e6});
    const Panel p = std::move(b).build();
    EXPECT_TRUE(select_universe(p, day(kT), {}).size() == 1);
    EXPECT_TRUE(select_universe(p, day(150), {}).empty());
}

TEST(SelectUniverse, CoverageThresholdWithGaps) {
    PanelBuilder b;
    for (int d = 0; d <= kT; ++d) {
        const bool five_gaps = d >= kT - 50 && d < kT - 45;
        const bool ten_gaps = d >= kT - 50 && d < kT - 40;
        if (!five_gaps) b.add("FIVE", DailyRecord{day(d), 1.0, 1.0, 2e6});
        if (!ten_gaps) b.add("TEN", DailyRecord{day(d), 1.0, 1.0, 2e6});
    }
    const Panel p = std::move(b).build();
    // 178/183 = 0.973 passes, 173/183 = 0.945 fails the 95% rule.
    EXPECT_EQ(select_universe(p, day(kT), {}), std::vector<AssetId>{"FIVE"});
}

TEST(SelectUniverse, EarliestRecordMustPrecedeWindow) {
    PanelBuilder b;
    add_path(b, "EXACT", kT - 182, flat(183), 1.0, 2e6);
    add_path(b, "LATE", kT - 181, flat(182), 1.0, 2e6);
    const Panel p = std::move(b).build();
    EXPECT_EQ(select_universe(p, day(kT), {}), std::vector<AssetId>{"EXACT"});
}

TEST(UniverseCounts, EngineeredFiveQualify) {
    PanelBuilder b;
    for (int i = 0; i < 5; ++i) add_path(b, "Q" + std::to_string(i), 0, flat(kT + 1), 1.0, 2e6);
    add_path(b, "TINY", 0, flat(kT + 1), 1.0, 1e5);
    add_path(b, "YOUNG", kT - 20, flat(21), 1.0, 2e6);
    const Panel p = std::move(b).build();

    const std::vector<Date> dates{day(100), day(kT)};
    const auto counts = universe_counts(p, dates, {});
    ASSERT_EQ(counts.size(), 2u);
    EXPECT_EQ(counts[0].count, 0u);
    EXPECT_EQ(counts[1].count, 5u);
    EXPECT_EQ(universe_counts(p, dates, {}), counts);

    std::ostringstream out;
    write_universe_counts_csv(counts, out);
    EXPECT_EQ(out.str(), "date,count\n2020-04-10,0\n2020-09-07,5\n");
}

TEST(UniverseCounts, EmptyWhenNothingQualifies) {
    PanelBuilder b;
    add_path(b, "TINY", 0, flat(kT + 1), 1.0, 1e5);
    const Panel p = std::move(b).build();
    const std::vector<Date> dates{day(190), day(200), day(kT)};
    for (const auto& c : universe_counts(p, dates, {})) EXPECT_EQ(c.count, 0u);
}

TEST(UniverseProperties, PointInTimeMonotoneAndPresentToday) {
    InclusionCriteria c;
    c.history_days = 60;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const Panel p = gen_panel(universe_params(seed));
        for (int t = 60; t < 160; t += 9) {
            const Date date = p.first_date() + Days{t};
            const auto u = select_universe(p, date, c);

            const Panel truncated = truncate_after(p, date);
            EXPECT_EQ(select_universe(truncated, date, c), u) << "look-ahead at seed " << seed;

            for (const auto& a : u) EXPECT_NE(p.find(a, date), nullptr);

            for (double floor : {2e6, 4e6, 8e6}) {
                InclusionCriteria stricter = c;
                stricter.min_marketcap_usd = floor;
                const auto smaller = select_universe(p, date, stricter);
                EXPECT_TRUE(std::includes(u.begin(), u.end(), smaller.begin(), smaller.end()));
            }
        }
    }
}
