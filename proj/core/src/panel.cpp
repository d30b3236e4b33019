#include "momliq/panel.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "momliq/errors.hpp"
#include "text_util.hpp"

namespace momliq {

namespace {

constexpr std::string_view kHeader = "date,asset_id,price_usd,volume_usd,marketcap_usd";

std::string row_prefix(std::size_t row) { return row > 0 ? "row " + std::to_string(row) + ": " : std::string{}; }

}  // namespace

// ---------------------------------------------------------------------------
// Panel
// ---------------------------------------------------------------------------

std::optional<std::size_t> Panel::index_of(const AssetId& asset) const {
    const auto it = index_.find(asset);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const DailyRecord* Panel::find(std::size_t asset_index, Date date) const {
    const Series& s = series_[asset_index];
    if (date < s.first || date > s.last) return nullptr;
    const auto slot = static_cast<std::size_t>(days_between(s.first, date));
    return s.present[slot] ? &s.slots[slot] : nullptr;
}

const DailyRecord* Panel::find(const AssetId& asset, Date date) const {
    const auto idx = index_of(asset);
    return idx ? find(*idx, date) : nullptr;
}

std::vector<DailyRecord> Panel::records(std::size_t asset_index) const {
    const Series& s = series_[asset_index];
    std::vector<DailyRecord> out;
    for (std::size_t i = 0; i < s.slots.size(); ++i) {
        if (s.present[i]) out.push_back(s.slots[i]);
    }
    return out;
}

bool operator==(const Panel& a, const Panel& b) {
    if (a.assets_ != b.assets_ || a.exclusions_ != b.exclusions_ || a.record_count_ != b.record_count_) return false;
    if (a.empty()) return true;
    if (a.first_ != b.first_ || a.last_ != b.last_) return false;
    for (std::size_t i = 0; i < a.assets_.size(); ++i) {
        if (a.records(i) != b.records(i)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// PanelBuilder
// ---------------------------------------------------------------------------

PanelBuilder::PanelBuilder(ExclusionSet exclusions) : exclusions_(std::move(exclusions)) {}

void PanelBuilder::add(const AssetId& asset, const DailyRecord& record, std::size_t row) {
    if (asset.empty()) {
        throw ValidationError(row_prefix(row) + "empty asset_id");
    }
    if (!(record.price_usd > 0.0)) {
        throw ValidationError(row_prefix(row) + "price_usd must be positive for '" + asset + "' on " +
                              format_date(record.date));
    }
    if (!(record.volume_usd >= 0.0)) {
        throw ValidationError(row_prefix(row) + "volume_usd must be non-negative for '" + asset + "' on " +
                              format_date(record.date));
    }
    if (!(record.marketcap_usd >= 0.0)) {
        throw ValidationError(row_prefix(row) + "marketcap_usd must be non-negative for '" + asset + "' on " +
                              format_date(record.date));
    }
    if (exclusions_.contains(asset)) return;
    pending_[asset].emplace_back(record, row);
}

Panel PanelBuilder::build() && {
    Panel panel;
    panel.exclusions_ = std::move(exclusions_);

    for (const auto& [asset, _] : pending_) panel.assets_.push_back(asset);
    std::sort(panel.assets_.begin(), panel.assets_.end());

    bool have_span = false;
    for (const AssetId& asset : panel.assets_) {
        auto& recs = pending_[asset];
        std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.first.date < b.first.date; });
        for (std::size_t i = 1; i < recs.size(); ++i) {
            if (recs[i].first.date == recs[i - 1].first.date) {
                throw DuplicateRecordError(row_prefix(recs[i].second) + "duplicate record for ('" + asset + "', " +
                                           format_date(recs[i].first.date) + ")");
            }
        }
        Panel::Series s;
        s.first = recs.front().first.date;
        s.last = recs.back().first.date;
        const auto n = static_cast<std::size_t>(days_between(s.first, s.last)) + 1;
        s.slots.resize(n);
        s.present.assign(n, 0);
        for (const auto& [rec, _] : recs) {
            const auto slot = static_cast<std::size_t>(days_between(s.first, rec.date));
            s.slots[slot] = rec;
            s.present[slot] = 1;
        }
        if (!have_span) {
            panel.first_ = s.first;
            panel.last_ = s.last;
            have_span = true;
        } else {
            panel.first_ = std::min(panel.first_, s.first);
            panel.last_ = std::max(panel.last_, s.last);
        }
        panel.record_count_ += recs.size();
        panel.index_.emplace(asset, panel.series_.size());
        panel.series_.push_back(std::move(s));
    }
    pending_.clear();
    return panel;
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

Panel load_panel(std::span<const RawRow> rows, const ExclusionSet& exclusions) {
    PanelBuilder builder(exclusions);
    for (const RawRow& raw : rows) {
        DailyRecord rec;
        try {
            rec.date = parse_date(detail::trim(raw.date));
        } catch (const ParseError& e) {
            throw ParseError(row_prefix(raw.row) + e.what());
        }
        const auto number = [&](std::string_view field, const char* name) {
            double v = 0.0;
            if (!detail::parse_double(field, v)) {
                throw ParseError(row_prefix(raw.row) + "malformed " + name + " '" + std::string(field) + "'");
            }
            return v;
        };
        rec.price_usd = number(raw.price_usd, "price_usd");
        rec.volume_usd = number(raw.volume_usd, "volume_usd");
        rec.marketcap_usd = number(raw.marketcap_usd, "marketcap_usd");
        builder.add(std::string(detail::trim(raw.asset_id)), rec, raw.row);
    }
    return std::move(builder).build();
}

std::vector<RawRow> read_panel_rows(std::istream& in) {
    std::vector<RawRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = detail::trim(line);
        if (!header_seen) {
            if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
            if (view != kHeader) {
                throw ParseError("row 1: expected header '" + std::string(kHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        if (view.empty()) continue;
        const auto fields = detail::split(view, ',');
        if (fields.size() != 5) {
            throw ParseError(row_prefix(line_no) + "expected 5 fields, got " + std::to_string(fields.size()));
        }
        rows.push_back(RawRow{line_no, std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                              std::string(fields[3]), std::string(fields[4])});
    }
    if (!header_seen) throw ParseError("empty panel file (header required)");
    return rows;
}

Panel load_panel_csv(const std::string& path, const ExclusionSet& exclusions) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open panel file '" + path + "'");
    const auto rows = read_panel_rows(in);
    return load_panel(rows, exclusions);
}

void write_panel_csv(const Panel& panel, std::ostream& out) {
    out << kHeader << '\n';
    if (panel.empty()) return;
    for (Date d = panel.first_date(); d <= panel.last_date(); d += Days{1}) {
        const std::string date_text = format_date(d);
        for (std::size_t i = 0; i < panel.assets().size(); ++i) {
            const DailyRecord* r = panel.find(i, d);
            if (!r) continue;
            out << date_text << ',' << panel.assets()[i] << ',' << detail::format_exact(r->price_usd) << ','
                << detail::format_exact(r->volume_usd) << ',' << detail::format_exact(r->marketcap_usd) << '\n';
        }
    }
}

ExclusionSet read_exclusions(std::istream& in) {
    ExclusionSet out;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (!view.empty()) out.emplace(view);
    }
    return out;
}

ExclusionSet load_exclusions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open exclusions file '" + path + "'");
    return read_exclusions(in);
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

std::optional<double> try_daily_return(const Panel& panel, std::size_t asset_index, Date date) {
    const DailyRecord* today = panel.find(asset_index, date);
    if (!today) return std::nullopt;
    const DailyRecord* yesterday = panel.find(asset_index, date - Days{1});
    if (!yesterday) return std::nullopt;
    return today->price_usd / yesterday->price_usd - 1.0;
}

double daily_return(const Panel& panel, const AssetId& asset, Date date) {
    const auto idx = panel.index_of(asset);
    if (!idx || !panel.find(*idx, date)) throw MissingDataError(asset, date);
    if (!panel.find(*idx, date - Days{1})) throw MissingDataError(asset, date - Days{1});
    return *try_daily_return(panel, *idx, date);
}

HistoryCoverage has_history(const Panel& panel, const AssetId& asset, Date date, int window_days,
                            double min_coverage) {
    if (window_days < 1) throw ValidationError("has_history: window_days must be >= 1");
    const auto idx = panel.index_of(asset);
    if (!idx) return {};
    int present = 0;
    for (Date d = date - Days{window_days}; d <= date; d += Days{1}) {
        if (panel.find(*idx, d)) ++present;
    }
    HistoryCoverage out;
    out.coverage = static_cast<double>(present) / static_cast<double>(window_days + 1);
    out.sufficient = out.coverage >= min_coverage;
    return out;
}

}  // namespace momliq
