#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gtdmine {

enum class Errc {
    FileNotFound,
    HeaderMismatch,
    RowError,
    UnknownRegion,
    YearOutOfRange,
    TooFewRecords,
    ClassTooSmall,
    InvalidDistribution,
    InvalidSchema,
    InvalidEncoding,
    EmptyCounts,
    EmptyDataset,
    EmptyIndex,
    ShapeMismatch,
    InvalidHyperparameter,
    UnknownLabel,
    EmptyMatrix,
    DegenerateClass,
    InvalidBounds,
    IoError,
    FormatVersionMismatch,
    SchemaFingerprintMismatch,
    CorruptPayload,
    InvalidConfig,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace gtdmine
