#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "momliq/date.hpp"

namespace momliq {

/// Opaque, case-sensitive asset token (usually a ticker symbol).
using AssetId = std::string;
using ExclusionSet = std::set<AssetId>;

struct DailyRecord {
    Date date{};
    double price_usd = 0.0;
    double volume_usd = 0.0;
    double marketcap_usd = 0.0;

    friend bool operator==(const DailyRecord&, const DailyRecord&) = default;
};

/// One unparsed CSV data row. `row` is the 1-based line number in the
/// source file (the header is line 1).
struct RawRow {
    std::size_t row = 0;
    std::string date;
    std::string asset_id;
    std::string price_usd;
    std::string volume_usd;
    std::string marketcap_usd;
};

/// Immutable daily (asset, date) store. Each asset keeps a dense slot array
/// over its own first..last record dates, so lookups are O(1) after the
/// asset index is resolved.
class Panel {
public:
    Panel() = default;

    bool empty() const noexcept { return assets_.empty(); }
    Date first_date() const noexcept { return first_; }
    Date last_date() const noexcept { return last_; }
    std::size_t record_count() const noexcept { return record_count_; }

    /// Asset ids in lexicographic order.
    const std::vector<AssetId>& assets() const noexcept { return assets_; }
    const ExclusionSet& exclusions() const noexcept { return exclusions_; }

    std::optional<std::size_t> index_of(const AssetId& asset) const;

    const DailyRecord* find(std::size_t asset_index, Date date) const;
    const DailyRecord* find(const AssetId& asset, Date date) const;

    /// Earliest / latest record date of an asset.
    Date asset_first_date(std::size_t asset_index) const { return series_[asset_index].first; }
    Date asset_last_date(std::size_t asset_index) const { return series_[asset_index].last; }

    /// All records of one asset, ascending by date.
    std::vector<DailyRecord> records(std::size_t asset_index) const;

    friend bool operator==(const Panel& a, const Panel& b);

private:
    friend class PanelBuilder;

    struct Series {
        Date first{};
        Date last{};
        std::vector<DailyRecord> slots;
        std::vector<unsigned char> present;
    };

    std::vector<AssetId> assets_;
    std::vector<Series> series_;
    std::unordered_map<AssetId, std::size_t> index_;
    ExclusionSet exclusions_;
    Date first_{};
    Date last_{};
    std::size_t record_count_ = 0;
};

/// Accumulates validated records and freezes them into a Panel. Records of
/// excluded assets are silently dropped.
class PanelBuilder {
public:
    explicit PanelBuilder(ExclusionSet exclusions = {});

    /// Throws ValidationError on a bad value and DuplicateRecordError on a
    /// repeated (asset, date). `row` only decorates messages.
    void add(const AssetId& asset, const DailyRecord& record, std::size_t row = 0);

    Panel build() &&;

private:
    ExclusionSet exclusions_;
    std::unordered_map<AssetId, std::vector<std::pair<DailyRecord, std::size_t>>> pending_;
};

/// Parses and validates raw rows. Malformed fields raise ParseError with the
/// row number; invalid values ValidationError; repeats DuplicateRecordError.
Panel load_panel(std::span<const RawRow> rows, const ExclusionSet& exclusions);

/// Splits a `date,asset_id,price_usd,volume_usd,marketcap_usd` CSV into raw
/// rows. The header is required.
std::vector<RawRow> read_panel_rows(std::istream& in);

Panel load_panel_csv(const std::string& path, const ExclusionSet& exclusions);

/// Writes the panel in the input schema, ordered by (date, asset_id), with
/// round-trip exact number formatting.
void write_panel_csv(const Panel& panel, std::ostream& out);

/// One asset id per line; blank lines and `#` comments ignored.
ExclusionSet read_exclusions(std::istream& in);
ExclusionSet load_exclusions(const std::string& path);

/// P(t)/P(t-1) - 1. Throws MissingDataError when either record is absent.
double daily_return(const Panel& panel, const AssetId& asset, Date date);

/// Non-throwing variant for hot loops.
std::optional<double> try_daily_return(const Panel& panel, std::size_t asset_index, Date date);

inline constexpr double kDefaultMinCoverage = 0.95;

struct HistoryCoverage {
    bool sufficient = false;
    double coverage = 0.0;
};

/// Fraction of days in [date - window_days, date] with a record, and whether
/// it reaches `min_coverage`. Unknown assets have coverage 0.
HistoryCoverage has_history(const Panel& panel, const AssetId& asset, Date date, int window_days,
                            double min_coverage = kDefaultMinCoverage);

}  // namespace momliq
