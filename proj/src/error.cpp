#include "couplemap/error.hpp"

namespace couplemap {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::DuplicateTimestamp: return "DuplicateTimestamp";
        case ErrorKind::EmptyIntersection: return "EmptyIntersection";
        case ErrorKind::NonPositiveValue: return "NonPositiveValue";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::WrongKind: return "WrongKind";
        case ErrorKind::InvalidSeries: return "InvalidSeries";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::EmbeddingFailure: return "EmbeddingFailure";
        case ErrorKind::LengthTooShort: return "LengthTooShort";
        case ErrorKind::LagTooLarge: return "LagTooLarge";
        case ErrorKind::EmptyNetwork: return "EmptyNetwork";
        case ErrorKind::EmptyDistribution: return "EmptyDistribution";
        case ErrorKind::NoEdges: return "NoEdges";
        case ErrorKind::InvalidPartition: return "InvalidPartition";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::MismatchedMeasureSets: return "MismatchedMeasureSets";
        case ErrorKind::MissingBaseline: return "MissingBaseline";
        case ErrorKind::NetworkError: return "NetworkError";
    }
    return "Unknown";
}

namespace {

std::string render(ErrorKind kind, const std::string& detail) {
    std::string out(to_string(kind));
    if (!detail.empty()) {
        out += ':';
        out += detail;
    }
    return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string detail)
    : std::runtime_error(render(kind, detail)), kind_(kind), detail_(std::move(detail)) {}

}  // namespace couplemap
