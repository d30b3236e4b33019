#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "momliq/date.hpp"

namespace momliq {

enum class ErrorKind {
    Parse,
    DuplicateRecord,
    Validation,
    MissingData,
    InsufficientVolumeData,
    EmptyInput,
    EmptyPortfolio,
    WindowTooShort,
    AxisMismatch,
    TooFewSamples,
    ZeroVariance,
    ZeroTrackingError,
    IncompleteGrid,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind is what callers
/// branch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
public:
    explicit KindError(const std::string& message) : Error(K, message) {}
};

using ParseError = KindError<ErrorKind::Parse>;
using DuplicateRecordError = KindError<ErrorKind::DuplicateRecord>;
using ValidationError = KindError<ErrorKind::Validation>;
using InsufficientVolumeDataError = KindError<ErrorKind::InsufficientVolumeData>;
using EmptyInputError = KindError<ErrorKind::EmptyInput>;
using EmptyPortfolioError = KindError<ErrorKind::EmptyPortfolio>;
using WindowTooShortError = KindError<ErrorKind::WindowTooShort>;
using AxisMismatchError = KindError<ErrorKind::AxisMismatch>;
using TooFewSamplesError = KindError<ErrorKind::TooFewSamples>;
using ZeroVarianceError = KindError<ErrorKind::ZeroVariance>;
using ZeroTrackingError = KindError<ErrorKind::ZeroTrackingError>;
using IncompleteGridError = KindError<ErrorKind::IncompleteGrid>;
using ConfigError = KindError<ErrorKind::Config>;
using IoError = KindError<ErrorKind::Io>;

/// A required (asset, date) record is absent.
class MissingDataError : public Error {
public:
    MissingDataError(std::string asset, Date date);
    const std::string& asset() const noexcept { return asset_; }
    Date date() const noexcept { return date_; }

private:
    std::string asset_;
    Date date_;
};

}  // namespace momliq
