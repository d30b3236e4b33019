#include "momliq/signals.hpp"

#include <algorithm>
#include <cmath>

namespace momliq {

namespace {

std::size_t require_index(const Panel& panel, const AssetId& asset, Date date) {
    const auto idx = panel.index_of(asset);
    if (!idx) throw MissingDataError(asset, date);
    return *idx;
}

}  // namespace

void SignalConfig::validate() const {
    if (momentum_days < 1) throw ValidationError("momentum_days must be >= 1");
    if (illiq_days < 1) throw ValidationError("illiq_days must be >= 1");
    if (min_volume_days < 1 || min_volume_days > illiq_days) {
        throw ValidationError("min_volume_days must be in [1, illiq_days]");
    }
}

double momentum(const Panel& panel, const AssetId& asset, Date date, const SignalConfig& cfg) {
    const std::size_t idx = require_index(panel, asset, date);
    const DailyRecord* now = panel.find(idx, date);
    if (!now) throw MissingDataError(asset, date);
    const Date past_date = date - Days{cfg.momentum_days};
    const DailyRecord* past = panel.find(idx, past_date);
    if (!past) throw MissingDataError(asset, past_date);
    return (now->price_usd - past->price_usd) / past->price_usd;
}

double amihud(const Panel& panel, const AssetId& asset, Date date, const SignalConfig& cfg) {
    const std::size_t idx = require_index(panel, asset, date);
    double sum = 0.0;
    int qualifying = 0;
    for (Date d = date - Days{cfg.illiq_days - 1}; d <= date; d += Days{1}) {
        const DailyRecord* r = panel.find(idx, d);
        if (!r || !(r->volume_usd > 0.0)) continue;
        const auto ret = try_daily_return(panel, idx, d);
        if (!ret) continue;
        sum += std::abs(*ret) / r->volume_usd;
        ++qualifying;
    }
    if (qualifying < cfg.min_volume_days) {
        throw InsufficientVolumeDataError("asset '" + asset + "' has " + std::to_string(qualifying) +
                                          " qualifying volume days at " + format_date(date) + ", need " +
                                          std::to_string(cfg.min_volume_days));
    }
    return sum / static_cast<double>(qualifying);
}

SignalSnapshot compute_snapshot(const Panel& panel, std::span<const AssetId> universe, Date date,
                                const SignalConfig& cfg) {
    cfg.validate();
    SignalSnapshot snap;
    snap.date = date;

    std::vector<AssetId> members(universe.begin(), universe.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    for (const AssetId& asset : members) {
        try {
            const double mom = momentum(panel, asset, date, cfg);
            const double illiq = amihud(panel, asset, date, cfg);
            snap.momentum.emplace(asset, mom);
            snap.illiquidity.emplace(asset, illiq);
        } catch (const Error& e) {
            snap.dropped.push_back({asset, e.kind(), e.what()});
        }
    }
    return snap;
}

}  // namespace momliq
