#pragma once

#include <cstdint>
#include <vector>

#include "momliq/panel.hpp"

namespace momliq {

/// Knobs for the seeded synthetic panel factory.
///
/// Prices follow a geometric random walk whose per-asset drift is an AR(1)
/// process; its innovation scale is `momentum_strength * daily_vol`, so a
/// positive strength makes trailing winners keep winning and zero gives a
/// driftless null. Volumes are log-normal with a per-asset level spread by
/// `liquidity_spread`. Market cap is price times a fixed per-asset supply.
struct SynthParams {
    std::uint64_t seed = 1;
    int n_assets = 20;
    int n_days = 120;
    double daily_vol = 0.04;
    double momentum_strength = 0.0;
    double drift_persistence = 0.97;
    double liquidity_spread = 1.0;
    /// Day offset of each asset's first record. When empty, asset i lists on
    /// day i * listing_stagger_days.
    std::vector<int> listing_offsets;
    int listing_stagger_days = 0;
    double marketcap_base = 1e8;
    /// Probability that a record is absent (a data gap).
    double missing_prob = 0.0;
    /// Probability that a present record reports zero volume.
    double zero_volume_prob = 0.0;
    Date start_date = make_date(2015, 1, 1);

    void validate() const;
};

/// Deterministic for a given parameter set on every platform: the stream
/// comes from std::mt19937_64, whose output sequence the standard fixes,
/// and uniforms and normals are derived from it by explicit formulas.
/// Asset ids are `A000`, `A001`, ...
Panel gen_panel(const SynthParams& params);

}  // namespace momliq
