#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "momliq/signals.hpp"

namespace momliq {

/// Bucket of a 30/40/30 rank split. For momentum LOW = losers, HIGH =
/// winners; for illiquidity LOW = liquid, HIGH = illiquid.
enum class Tercile { Low, Mid, High };

inline constexpr std::array<Tercile, 3> kTerciles{Tercile::Low, Tercile::Mid, Tercile::High};

std::string_view to_string(Tercile t) noexcept;
/// Accepts LOW/MID/HIGH (any case). Throws ParseError.
Tercile parse_tercile(std::string_view text);

inline constexpr double kTailFraction = 0.30;

struct TercileSizes {
    std::size_t low = 0;
    std::size_t mid = 0;
    std::size_t high = 0;
};

/// Tail sizes round(low_frac * n) and round(high_frac * n), rounding halves
/// up; the middle bucket takes the rest.
TercileSizes tercile_sizes(std::size_t n, double low_frac = kTailFraction, double high_frac = kTailFraction);

/// Rank-based tercile assignment. Assets are ordered by (value, id), so
/// ties resolve by id and the result depends only on ranks.
/// Throws EmptyInputError on empty input, ValidationError on bad fractions.
std::map<AssetId, Tercile> assign_terciles(const std::map<AssetId, double>& values,
                                           double low_frac = kTailFraction, double high_frac = kTailFraction);

struct SortResult {
    Date date{};
    std::map<AssetId, Tercile> momentum_group;
    std::map<AssetId, Tercile> liquidity_group;

    /// Members of one of the nine cells, ascending by id.
    std::vector<AssetId> cell(Tercile momentum, Tercile liquidity) const;
    std::vector<AssetId> momentum_bucket(Tercile momentum) const;
    std::vector<AssetId> liquidity_bucket(Tercile liquidity) const;

    friend bool operator==(const SortResult&, const SortResult&) = default;
};

/// Independent (unconditional) momentum and illiquidity tercile sorts.
SortResult bivariate_sort(const SignalSnapshot& snapshot);

/// `date,asset_id,momentum_group,liquidity_group`; header written when
/// `header` is true so several dates can share one file.
void write_sort_audit_csv(const SortResult& sort, std::ostream& out, bool header = true);

}  // namespace momliq
