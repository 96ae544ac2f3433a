#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace couplemap {

enum class ErrorKind {
    IoError,
    ParseError,
    DuplicateTimestamp,
    EmptyIntersection,
    NonPositiveValue,
    ZeroVariance,
    WrongKind,
    InvalidSeries,
    InvalidArgument,
    EmbeddingFailure,
    LengthTooShort,
    LagTooLarge,
    EmptyNetwork,
    EmptyDistribution,
    NoEdges,
    InvalidPartition,
    TooFewSamples,
    MismatchedMeasureSets,
    MissingBaseline,
    NetworkError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure in the library surfaces as this exception. what() renders the
// single-line "Kind:detail" form the command-line tool prints verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string detail);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace couplemap
