#include "momliq/universe.hpp"

#include <ostream>

#include "momliq/errors.hpp"

namespace momliq {

void InclusionCriteria::validate() const {
    if (history_days < 1) throw ValidationError("history_days must be >= 1");
    if (!(min_marketcap_usd > 0.0)) throw ValidationError("min_marketcap_usd must be positive");
    if (!(min_coverage > 0.0 && min_coverage <= 1.0)) throw ValidationError("min_coverage must be in (0, 1]");
}

bool is_eligible(const Panel& panel, std::size_t asset_index, Date date, const InclusionCriteria& criteria) {
    if (!panel.find(asset_index, date)) return false;
    const Date window_start = date - Days{criteria.history_days};
    if (panel.asset_first_date(asset_index) > window_start) return false;

    int present = 0;
    for (Date d = window_start; d <= date; d += Days{1}) {
        const DailyRecord* r = panel.find(asset_index, d);
        if (!r) continue;
        if (r->marketcap_usd < criteria.min_marketcap_usd) return false;
        ++present;
    }
    const double coverage = static_cast<double>(present) / static_cast<double>(criteria.history_days + 1);
    return coverage >= criteria.min_coverage;
}

std::vector<AssetId> select_universe(const Panel& panel, Date date, const InclusionCriteria& criteria) {
    criteria.validate();
    std::vector<AssetId> out;
    for (std::size_t i = 0; i < panel.assets().size(); ++i) {
        if (is_eligible(panel, i, date, criteria)) out.push_back(panel.assets()[i]);
    }
    return out;
}

std::vector<UniverseCount> universe_counts(const Panel& panel, std::span<const Date> dates,
                                           const InclusionCriteria& criteria) {
    std::vector<UniverseCount> out;
    out.reserve(dates.size());
    for (Date d : dates) out.push_back({d, select_universe(panel, d, criteria).size()});
    return out;
}

void write_universe_counts_csv(std::span<const UniverseCount> counts, std::ostream& out) {
    out << "date,count\n";
    for (const auto& c : counts) out << format_date(c.date) << ',' << c.count << '\n';
}

}  // namespace momliq
