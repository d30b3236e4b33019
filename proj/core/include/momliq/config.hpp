#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momliq/signals.hpp"
#include "momliq/synth.hpp"
#include "momliq/universe.hpp"

namespace momliq {

/// Flat `key = value` run configuration. Relative paths are resolved
/// against the directory of the config file.
///
/// Recognized keys: panel_path, exclusions_path, start, end, history_days,
/// min_marketcap_usd, min_coverage, momentum_days, illiq_days,
/// min_volume_days, rebalance_days, cost_bps_list, periods_per_year,
/// charge_inception_costs, output_dir, seed, and synth_* keys for the
/// synthetic panel (synth_assets, synth_days, synth_daily_vol,
/// synth_momentum_strength, synth_liquidity_spread,
/// synth_listing_stagger_days, synth_marketcap_base, synth_missing_prob,
/// synth_zero_volume_prob, synth_start_date).
///
/// With no panel_path and a seed, runs use a generated panel.
struct RunConfig {
    std::string panel_path;
    std::string exclusions_path;
    std::optional<Date> start;
    std::optional<Date> end;
    InclusionCriteria criteria;
    SignalConfig signals;
    int rebalance_days = 14;
    std::vector<double> cost_bps_list{0.0, 10.0, 50.0, 100.0};
    int periods_per_year = 365;
    bool charge_inception_costs = true;
    std::string output_dir = "momliq_out";
    std::optional<std::uint64_t> seed;
    SynthParams synth;

    bool synthetic() const noexcept { return panel_path.empty() && seed.has_value(); }

    /// Throws ConfigError on any invalid field or unresolvable input path.
    void validate() const;
};

/// Sets one key. Throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Comma-separated basis-point list, e.g. "0,10,50,100".
std::vector<double> parse_cost_list(std::string_view text);

}  // namespace momliq
