#include "momliq/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string>

#include "momliq/errors.hpp"
#include "text_util.hpp"

namespace momliq {

namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
    Int out{};
    const auto v = detail::trim(value);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key) + ": expected an integer, got " + quoted(value));
    }
    return out;
}

double to_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    if (!detail::parse_double(value, out)) {
        throw ConfigError(std::string(key) + ": expected a number, got " + quoted(value));
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    const auto v = detail::trim(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(std::string(key) + ": expected true/false, got " + quoted(value));
}

Date to_date(std::string_view key, std::string_view value) {
    try {
        return parse_date(detail::trim(value));
    } catch (const ParseError& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

std::string resolve(std::string_view value, const std::filesystem::path& base_dir) {
    const std::filesystem::path p{std::string(detail::trim(value))};
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p.string();
    return (base_dir / p).lexically_normal().string();
}

}  // namespace

std::vector<double> parse_cost_list(std::string_view text) {
    std::vector<double> out;
    if (detail::trim(text).empty()) return out;
    for (auto field : detail::split(text, ',')) out.push_back(to_double("cost_bps_list", field));
    return out;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value, const std::filesystem::path& base) {
    if (key == "panel_path") {
        c.panel_path = resolve(value, base);
    } else if (key == "exclusions_path") {
        c.exclusions_path = resolve(value, base);
    } else if (key == "output_dir") {
        c.output_dir = resolve(value, base);
    } else if (key == "start") {
        c.start = to_date(key, value);
    } else if (key == "end") {
        c.end = to_date(key, value);
    } else if (key == "history_days") {
        c.criteria.history_days = to_int<int>(key, value);
    } else if (key == "min_marketcap_usd") {
        c.criteria.min_marketcap_usd = to_double(key, value);
    } else if (key == "min_coverage") {
        c.criteria.min_coverage = to_double(key, value);
    } else if (key == "momentum_days") {
        c.signals.momentum_days = to_int<int>(key, value);
    } else if (key == "illiq_days") {
        c.signals.illiq_days = to_int<int>(key, value);
    } else if (key == "min_volume_days") {
        c.signals.min_volume_days = to_int<int>(key, value);
    } else if (key == "rebalance_days") {
        c.rebalance_days = to_int<int>(key, value);
    } else if (key == "cost_bps_list") {
        c.cost_bps_list = parse_cost_list(value);
    } else if (key == "periods_per_year") {
        c.periods_per_year = to_int<int>(key, value);
    } else if (key == "charge_inception_costs") {
        c.charge_inception_costs = to_bool(key, value);
    } else if (key == "seed") {
        c.seed = to_int<std::uint64_t>(key, value);
        c.synth.seed = *c.seed;
    } else if (key == "synth_assets") {
        c.synth.n_assets = to_int<int>(key, value);
    } else if (key == "synth_days") {
        c.synth.n_days = to_int<int>(key, value);
    } else if (key == "synth_daily_vol") {
        c.synth.daily_vol = to_double(key, value);
    } else if (key == "synth_momentum_strength") {
        c.synth.momentum_strength = to_double(key, value);
    } else if (key == "synth_liquidity_spread") {
        c.synth.liquidity_spread = to_double(key, value);
    } else if (key == "synth_listing_stagger_days") {
        c.synth.listing_stagger_days = to_int<int>(key, value);
    } else if (key == "synth_marketcap_base") {
        c.synth.marketcap_base = to_double(key, value);
    } else if (key == "synth_missing_prob") {
        c.synth.missing_prob = to_double(key, value);
    } else if (key == "synth_zero_volume_prob") {
        c.synth.zero_volume_prob = to_double(key, value);
    } else if (key == "synth_start_date") {
        c.synth.start_date = to_date(key, value);
    } else {
        throw ConfigError("unknown config key " + quoted(key));
    }
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(config, detail::trim(view.substr(0, eq)), detail::trim(view.substr(eq + 1)), base_dir);
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_config(in, path.parent_path());
}

void RunConfig::validate() const {
    const auto check = [](auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            throw ConfigError(e.what());
        }
    };
    check([&] { criteria.validate(); });
    check([&] { signals.validate(); });
    if (synthetic()) check([&] { synth.validate(); });
    if (rebalance_days < 1) throw ConfigError("rebalance_days must be >= 1");
    if (periods_per_year < 1) throw ConfigError("periods_per_year must be >= 1");
    if (cost_bps_list.empty()) throw ConfigError("cost_bps_list must not be empty");
    for (double c : cost_bps_list) {
        if (!(c >= 0.0)) throw ConfigError("cost_bps_list entries must be non-negative");
    }
    if (start && end && !(*start < *end)) throw ConfigError("start must precede end");
    if (!synthetic()) {
        if (panel_path.empty()) throw ConfigError("panel_path is required (or give a seed for a synthetic panel)");
        if (!std::filesystem::is_regular_file(panel_path)) {
            throw ConfigError("panel_path '" + panel_path + "' is not a readable file");
        }
    }
    if (!exclusions_path.empty() && !std::filesystem::is_regular_file(exclusions_path)) {
        throw ConfigError("exclusions_path '" + exclusions_path + "' is not a readable file");
    }
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

}  // namespace momliq
