#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slovasc {

enum class ErrorCode {
    MalformedHeader,
    TruncatedFile,
    NonPositiveScale,
    UnsupportedFormat,
    UnreadableFile,
    MalformedRow,
    DimensionMismatch,
    InvalidLabelValue,
    ImageTooSmall,
    EmptyMask,
    DegenerateFit,
    TooFewScales,
    EmptySkeleton,
    NoSegmentsInRoi,
    TooFewVessels,
    ZeroVariance,
    DegeneratePopulation,
    SingleClass,
    InvalidArgument,
    MissingRequiredKey,
    EmptyInputDir,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported as an Error carrying its code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace slovasc
