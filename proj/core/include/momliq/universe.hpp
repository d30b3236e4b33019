#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "momliq/panel.hpp"

namespace momliq {

/// Point-in-time inclusion rules applied at each rebalance date.
struct InclusionCriteria {
    int history_days = 182;  // 26 weeks
    double min_marketcap_usd = 1'000'000.0;
    double min_coverage = kDefaultMinCoverage;

    /// Throws ValidationError when a field is out of range.
    void validate() const;
};

/// Assets eligible on `date`, ascending by id. An asset qualifies when
///   - it has a record on `date`,
///   - its earliest record is on or before `date - history_days` and the
///     window [date - history_days, date] is covered to at least
///     `min_coverage`,
///   - its market cap is at least `min_marketcap_usd` on every window day
///     that has a record.
/// Only records dated on or before `date` are consulted.
std::vector<AssetId> select_universe(const Panel& panel, Date date, const InclusionCriteria& criteria);

/// Same rule for a single asset (by panel index).
bool is_eligible(const Panel& panel, std::size_t asset_index, Date date, const InclusionCriteria& criteria);

struct UniverseCount {
    Date date{};
    std::size_t count = 0;

    friend bool operator==(const UniverseCount&, const UniverseCount&) = default;
};

std::vector<UniverseCount> universe_counts(const Panel& panel, std::span<const Date> dates,
                                           const InclusionCriteria& criteria);

/// `date,count` CSV.
void write_universe_counts_csv(std::span<const UniverseCount> counts, std::ostream& out);

}  // namespace momliq
