#include "momliq/errors.hpp"

namespace momliq {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::DuplicateRecord: return "DuplicateRecord";
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::MissingData: return "MissingData";
        case ErrorKind::InsufficientVolumeData: return "InsufficientVolumeData";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::EmptyPortfolio: return "EmptyPortfolio";
        case ErrorKind::WindowTooShort: return "WindowTooShort";
        case ErrorKind::AxisMismatch: return "AxisMismatch";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::ZeroTrackingError: return "ZeroTrackingError";
        case ErrorKind::IncompleteGrid: return "IncompleteGrid";
        case ErrorKind::Config: return "Config";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

MissingDataError::MissingDataError(std::string asset, Date date)
    : Error(ErrorKind::MissingData, "missing data for asset '" + asset + "' on " + format_date(date)),
      asset_(std::move(asset)),
      date_(date) {}

}  // namespace momliq
