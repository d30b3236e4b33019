#include "momliq/sorter.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "momliq/errors.hpp"

namespace momliq {

std::string_view to_string(Tercile t) noexcept {
    switch (t) {
        case Tercile::Low: return "LOW";
        case Tercile::Mid: return "MID";
        case Tercile::High: return "HIGH";
    }
    return "?";
}

Tercile parse_tercile(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "LOW") return Tercile::Low;
    if (upper == "MID") return Tercile::Mid;
    if (upper == "HIGH") return Tercile::High;
    throw ParseError("unknown tercile '" + std::string(text) + "' (expected LOW, MID or HIGH)");
}

TercileSizes tercile_sizes(std::size_t n, double low_frac, double high_frac) {
    if (!(low_frac >= 0.0 && high_frac >= 0.0 && low_frac + high_frac < 1.0)) {
        throw ValidationError("tercile fractions must be non-negative with low + high < 1");
    }
    const auto round_half_up = [](double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); };
    TercileSizes s;
    s.low = round_half_up(low_frac * static_cast<double>(n));
    s.high = round_half_up(high_frac * static_cast<double>(n));
    if (s.low + s.high > n) s.high = n - s.low;
    s.mid = n - s.low - s.high;
    return s;
}

std::map<AssetId, Tercile> assign_terciles(const std::map<AssetId, double>& values, double low_frac,
                                           double high_frac) {
    if (values.empty()) throw EmptyInputError("assign_terciles: no values");
    const TercileSizes sizes = tercile_sizes(values.size(), low_frac, high_frac);

    std::vector<std::pair<double, const AssetId*>> order;
    order.reserve(values.size());
    for (const auto& [asset, v] : values) order.emplace_back(v, &asset);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return *a.second < *b.second;
    });

    std::map<AssetId, Tercile> out;
    const std::size_t high_start = order.size() - sizes.high;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        Tercile label = Tercile::Mid;
        if (rank < sizes.low) {
            label = Tercile::Low;
        } else if (rank >= high_start) {
            label = Tercile::High;
        }
        out.emplace(*order[rank].second, label);
    }
    return out;
}

namespace {

std::vector<AssetId> members_where(const std::map<AssetId, Tercile>& groups, Tercile want) {
    std::vector<AssetId> out;
    for (const auto& [asset, t] : groups) {
        if (t == want) out.push_back(asset);
    }
    return out;
}

}  // namespace

std::vector<AssetId> SortResult::cell(Tercile momentum, Tercile liquidity) const {
    std::vector<AssetId> out;
    for (const auto& [asset, m] : momentum_group) {
        if (m != momentum) continue;
        const auto it = liquidity_group.find(asset);
        if (it != liquidity_group.end() && it->second == liquidity) out.push_back(asset);
    }
    return out;
}

std::vector<AssetId> SortResult::momentum_bucket(Tercile momentum) const {
    return members_where(momentum_group, momentum);
}

std::vector<AssetId> SortResult::liquidity_bucket(Tercile liquidity) const {
    return members_where(liquidity_group, liquidity);
}

SortResult bivariate_sort(const SignalSnapshot& snapshot) {
    if (snapshot.empty()) throw EmptyInputError("bivariate_sort: empty snapshot at " + format_date(snapshot.date));
    SortResult out;
    out.date = snapshot.date;
    out.momentum_group = assign_terciles(snapshot.momentum);
    out.liquidity_group = assign_terciles(snapshot.illiquidity);
    return out;
}

void write_sort_audit_csv(const SortResult& sort, std::ostream& out, bool header) {
    if (header) out << "date,asset_id,momentum_group,liquidity_group\n";
    const std::string date_text = format_date(sort.date);
    for (const auto& [asset, m] : sort.momentum_group) {
        out << date_text << ',' << asset << ',' << to_string(m) << ',' << to_string(sort.liquidity_group.at(asset))
            << '\n';
    }
}

}  // namespace momliq
