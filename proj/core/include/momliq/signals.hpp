#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "momliq/errors.hpp"
#include "momliq/panel.hpp"

namespace momliq {

struct SignalConfig {
    int momentum_days = 14;
    int illiq_days = 14;
    /// Minimum number of positive-volume days with a computable return in
    /// the illiquidity window.
    int min_volume_days = 7;

    void validate() const;
};

/// Trailing cumulative return (P(t) - P(t-k)) / P(t-k), k = momentum_days.
/// Throws MissingDataError when either endpoint is absent.
double momentum(const Panel& panel, const AssetId& asset, Date date, const SignalConfig& cfg);

/// Amihud illiquidity: mean of |R(d)| / V(d) over the qualifying days d of
/// {date - illiq_days + 1, ..., date}. A day qualifies when it has positive
/// USD volume and a computable daily return. Units are 1/USD.
/// Throws InsufficientVolumeDataError below `min_volume_days` qualifying days.
double amihud(const Panel& panel, const AssetId& asset, Date date, const SignalConfig& cfg);

struct DroppedAsset {
    AssetId asset;
    ErrorKind reason = ErrorKind::MissingData;
    std::string detail;

    friend bool operator==(const DroppedAsset&, const DroppedAsset&) = default;
};

/// Both signals for every universe member at one rebalance date. Members
/// for which either signal fails are listed in `dropped` and carry no value.
struct SignalSnapshot {
    Date date{};
    std::map<AssetId, double> momentum;
    std::map<AssetId, double> illiquidity;
    std::vector<DroppedAsset> dropped;

    bool empty() const noexcept { return momentum.empty(); }
    std::size_t size() const noexcept { return momentum.size(); }

    friend bool operator==(const SignalSnapshot&, const SignalSnapshot&) = default;
};

SignalSnapshot compute_snapshot(const Panel& panel, std::span<const AssetId> universe, Date date,
                                const SignalConfig& cfg);

}  // namespace momliq
