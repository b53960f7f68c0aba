#include "slovasc/errors.hpp"

namespace slovasc {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::NonPositiveScale: return "NonPositiveScale";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::UnreadableFile: return "UnreadableFile";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidLabelValue: return "InvalidLabelValue";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::TooFewScales: return "TooFewScales";
        case ErrorCode::EmptySkeleton: return "EmptySkeleton";
        case ErrorCode::NoSegmentsInRoi: return "NoSegmentsInRoi";
        case ErrorCode::TooFewVessels: return "TooFewVessels";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::DegeneratePopulation: return "DegeneratePopulation";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::MissingRequiredKey: return "MissingRequiredKey";
        case ErrorCode::EmptyInputDir: return "EmptyInputDir";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace slovasc
