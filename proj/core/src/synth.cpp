#include "momliq/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "momliq/errors.hpp"

namespace momliq {

namespace {

// Portable draws on top of mt19937_64 (std distributions are
// implementation-defined).
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Box-Muller, cosine branch only.
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

struct AssetState {
    double liquidity_z = 0.0;
    double supply = 0.0;
    double log_price = 0.0;
    double drift = 0.0;
    int listing = 0;
};

}  // namespace

void SynthParams::validate() const {
    if (n_assets < 1) throw ValidationError("n_assets must be >= 1");
    if (n_days < 2) throw ValidationError("n_days must be >= 2");
    if (!(daily_vol > 0.0)) throw ValidationError("daily_vol must be positive");
    if (!(momentum_strength >= 0.0)) throw ValidationError("momentum_strength must be non-negative");
    if (!(drift_persistence >= 0.0 && drift_persistence < 1.0)) {
        throw ValidationError("drift_persistence must be in [0, 1)");
    }
    if (!(liquidity_spread >= 0.0)) throw ValidationError("liquidity_spread must be non-negative");
    if (!(marketcap_base > 0.0)) throw ValidationError("marketcap_base must be positive");
    if (listing_stagger_days < 0) throw ValidationError("listing_stagger_days must be non-negative");
    if (!listing_offsets.empty() && listing_offsets.size() != static_cast<std::size_t>(n_assets)) {
        throw ValidationError("listing_offsets must have one entry per asset");
    }
    for (int off : listing_offsets) {
        if (off < 0 || off >= n_days) throw ValidationError("listing offsets must lie in [0, n_days)");
    }
    if (!(missing_prob >= 0.0 && missing_prob < 1.0)) throw ValidationError("missing_prob must be in [0, 1)");
    if (!(zero_volume_prob >= 0.0 && zero_volume_prob < 1.0)) {
        throw ValidationError("zero_volume_prob must be in [0, 1)");
    }
}

Panel gen_panel(const SynthParams& p) {
    p.validate();
    Stream rng(p.seed);

    const int width = std::max(3, static_cast<int>(std::to_string(p.n_assets - 1).size()));
    std::vector<std::string> ids;
    std::vector<AssetState> assets(static_cast<std::size_t>(p.n_assets));
    const double drift_scale = p.momentum_strength * p.daily_vol;
    for (int i = 0; i < p.n_assets; ++i) {
        ids.push_back(fmt::format("A{:0{}d}", i, width));
        AssetState& a = assets[static_cast<std::size_t>(i)];
        a.liquidity_z = rng.normal();
        const double cap_z = rng.normal();
        a.log_price = std::log(10.0) + rng.normal();
        a.supply = p.marketcap_base * std::exp(0.5 * cap_z) / std::exp(a.log_price);
        a.drift = drift_scale * rng.normal();
        if (p.listing_offsets.empty()) {
            a.listing = std::min(p.n_days - 1, i * p.listing_stagger_days);
        } else {
            a.listing = p.listing_offsets[static_cast<std::size_t>(i)];
        }
    }

    const double innovation = drift_scale * std::sqrt(1.0 - p.drift_persistence * p.drift_persistence);
    const double volume_base = 0.05 * p.marketcap_base;
    PanelBuilder builder;
    for (int day = 0; day < p.n_days; ++day) {
        const Date date = p.start_date + Days{day};
        for (int i = 0; i < p.n_assets; ++i) {
            AssetState& a = assets[static_cast<std::size_t>(i)];
            // Every draw is consumed whether or not the record is emitted, so
            // the stream layout does not depend on listing or gaps.
            const double price_shock = rng.normal();
            const double drift_shock = rng.normal();
            const double volume_shock = rng.normal();
            const double gap_draw = rng.uniform();
            const double zero_draw = rng.uniform();

            if (day > 0) {
                a.log_price += a.drift - 0.5 * p.daily_vol * p.daily_vol + p.daily_vol * price_shock;
                a.drift = p.drift_persistence * a.drift + innovation * drift_shock;
            }
            if (day < a.listing) continue;
            if (day > a.listing && gap_draw < p.missing_prob) continue;

            DailyRecord rec;
            rec.date = date;
            rec.price_usd = std::exp(a.log_price);
            rec.marketcap_usd = rec.price_usd * a.supply;
            rec.volume_usd = zero_draw < p.zero_volume_prob
                                 ? 0.0
                                 : volume_base * std::exp(p.liquidity_spread * a.liquidity_z + 0.5 * volume_shock);
            builder.add(ids[static_cast<std::size_t>(i)], rec);
        }
    }
    return std::move(builder).build();
}

}  // namespace momliq
